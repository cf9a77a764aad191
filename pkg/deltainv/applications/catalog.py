"""Built-in manifold catalog.

Names follow ``family[:arg[:arg]]``: ``sphere:n[:r]``, ``rp:n``, ``hypercylinder:p:q``,
``clifford-torus``, ``catenoid``, ``whitney:n``, ``warped-s2`` and ``flat-torus``.
Records are built on first lookup and cached. A miss returns ``None`` from
:meth:`BuiltinCatalog.get`; :meth:`BuiltinCatalog.resolve` raises instead.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Protocol, runtime_checkable

from scipy import special

from deltainv.applications.records import ManifoldRecord, RecordKind, Topology, WarpedSpec
from deltainv.exceptions import UnknownManifoldError
from deltainv.expr.parser import parse_expression
from deltainv.extrinsic.immersion import ImmersionField
from deltainv.geometry.metric import FactorMetric, MetricField
from deltainv.lagrangian.ambient import whitney_immersion

logger = logging.getLogger(__name__)

POLAR_RANGE = [0.0, math.pi]
AZIMUTH_RANGE = [0.0, 2 * math.pi]
LINE_RANGE = [-1.0, 1.0]

LISTED_NAMES = (
    "sphere:2",
    "sphere:3",
    "sphere:4",
    "rp:3",
    "hypercylinder:1:2",
    "clifford-torus",
    "catenoid",
    "whitney:3",
    "warped-s2",
    "flat-torus",
)


@runtime_checkable
class ManifoldCatalog(Protocol):
    """Anything that maps catalog names to :class:`ManifoldRecord`."""

    def get(self, name: str) -> ManifoldRecord | None: ...

    @property
    def names(self) -> list[str]: ...


def sphere_volume(n: int, r: float = 1.0) -> float:
    """Volume of the round ``S^n(r)``."""
    return r**n * 2.0 * math.pi ** ((n + 1) / 2) / float(special.gamma((n + 1) / 2))


def sphere_components(variables: list[str], r: float = 1.0) -> list[str]:
    """Hyperspherical coordinates of ``S^q(r)`` in ``E^{q+1}``; the last variable is the azimuth."""
    q = len(variables)
    scale = f"{r!r}*" if r != 1.0 else ""
    comps, prefix = [], ""
    for i, v in enumerate(variables):
        if i == q - 1:
            comps.append(f"{scale}{prefix}cos({v})")
            comps.append(f"{scale}{prefix}sin({v})")
        else:
            comps.append(f"{scale}{prefix}cos({v})")
            prefix += f"sin({v})*"
    return comps


def sphere_metric_entries(variables: list[str], r: float = 1.0) -> list[list[str]]:
    """Diagonal chart metric ``r^2 diag(1, sin^2 u1, sin^2 u1 sin^2 u2, ...)``."""
    q = len(variables)
    entries = [["0"] * q for _ in range(q)]
    factor = f"{r * r!r}"
    for i in range(q):
        entries[i][i] = factor
        factor += f"*sin({variables[i]})^2"
    return entries


def sphere_domain(q: int) -> list[list[float]]:
    return [list(POLAR_RANGE)] * (q - 1) + [list(AZIMUTH_RANGE)]


def _int_arg(name: str, text: str, lowest: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise UnknownManifoldError(name, f"'{text}' is not an integer")
    if value < lowest:
        raise UnknownManifoldError(name, f"argument {value} is below {lowest}")
    return value


def build_sphere(name: str, args: list[str]) -> ManifoldRecord:
    if len(args) not in (1, 2):
        raise UnknownManifoldError(name, "expected sphere:n[:r]")
    n = _int_arg(name, args[0], 2)
    try:
        r = float(args[1]) if len(args) == 2 else 1.0
    except ValueError:
        raise UnknownManifoldError(name, f"'{args[1]}' is not a radius")
    if r <= 0:
        raise UnknownManifoldError(name, "radius must be positive")
    variables = [f"u{i}" for i in range(1, n + 1)]
    f = ImmersionField.from_strings(sphere_components(variables, r), variables, sphere_domain(n))
    return ManifoldRecord(
        name=name,
        kind=RecordKind.IMMERSION,
        immersion=f,
        lambda1=n / r**2,
        volume=sphere_volume(n, r),
        topology=Topology(b1_zero=True, finite_pi1=True),
        homogeneous=True,
        description=f"round {n}-sphere of radius {r:g} in E^{n + 1}",
    )


def build_projective(name: str, args: list[str]) -> ManifoldRecord:
    if len(args) != 1:
        raise UnknownManifoldError(name, "expected rp:n")
    n = _int_arg(name, args[0], 2)
    variables = [f"u{i}" for i in range(1, n + 1)]
    metric = MetricField.from_strings(sphere_metric_entries(variables), variables, sphere_domain(n))
    return ManifoldRecord(
        name=name,
        kind=RecordKind.METRIC,
        metric=metric,
        lambda1=2.0 * (n + 1),
        volume=sphere_volume(n) / 2.0,
        topology=Topology(b1_zero=True, finite_pi1=True),
        homogeneous=True,
        description=f"real projective {n}-space of constant curvature 1 (sphere chart)",
    )


def build_hypercylinder(name: str, args: list[str]) -> ManifoldRecord:
    if len(args) != 2:
        raise UnknownManifoldError(name, "expected hypercylinder:p:q")
    p = _int_arg(name, args[0], 1)
    q = _int_arg(name, args[1], 1)
    flat = [f"t{i}" for i in range(1, p + 1)]
    round_ = [f"u{i}" for i in range(1, q + 1)]
    components = flat + sphere_components(round_)
    domain = [list(LINE_RANGE)] * p + sphere_domain(q)
    f = ImmersionField.from_strings(components, flat + round_, domain)
    return ManifoldRecord(
        name=name,
        kind=RecordKind.IMMERSION,
        immersion=f,
        homogeneous=True,
        description=f"spherical hypercylinder E^{p} x S^{q}(1) in E^{p + q + 1}",
    )


def build_clifford_torus(name: str, args: list[str]) -> ManifoldRecord:
    if args:
        raise UnknownManifoldError(name, "clifford-torus takes no arguments")
    s = "sqrt(2)"
    components = [f"cos(u)/{s}", f"sin(u)/{s}", f"cos(v)/{s}", f"sin(v)/{s}"]
    f = ImmersionField.from_strings(components, ("u", "v"), [list(AZIMUTH_RANGE)] * 2)
    return ManifoldRecord(
        name=name,
        kind=RecordKind.IMMERSION,
        immersion=f,
        lambda1=2.0,
        volume=2.0 * math.pi**2,
        topology=Topology(b1_zero=False, finite_pi1=False),
        homogeneous=True,
        description="Clifford torus S^1(1/sqrt 2) x S^1(1/sqrt 2) in S^3 in E^4",
    )


def build_catenoid(name: str, args: list[str]) -> ManifoldRecord:
    if args:
        raise UnknownManifoldError(name, "catenoid takes no arguments")
    components = ["cosh(v)*cos(u)", "cosh(v)*sin(u)", "v"]
    f = ImmersionField.from_strings(components, ("u", "v"), [list(AZIMUTH_RANGE), list(LINE_RANGE)])
    return ManifoldRecord(
        name=name,
        kind=RecordKind.IMMERSION,
        immersion=f,
        description="catenoid, a minimal surface in E^3",
    )


def build_whitney(name: str, args: list[str]) -> ManifoldRecord:
    if len(args) != 1:
        raise UnknownManifoldError(name, "expected whitney:n")
    n = _int_arg(name, args[0], 2)
    return ManifoldRecord(
        name=name,
        kind=RecordKind.IMMERSION,
        immersion=whitney_immersion(n),
        topology=Topology(b1_zero=True, finite_pi1=True),
        description=f"Whitney {n}-sphere, a Lagrangian immersion into C^{n} with one double point",
    )


def build_warped_sphere(name: str, args: list[str]) -> ManifoldRecord:
    if args:
        raise UnknownManifoldError(name, "warped-s2 takes no arguments")
    base = FactorMetric.from_strings([["1"]], ("t",), [[-math.pi / 2, math.pi / 2]])
    fiber = FactorMetric.from_strings([["1"]], ("s",), [list(AZIMUTH_RANGE)])
    warping = parse_expression("cos(t)", ("t",))
    f = ImmersionField.from_strings(
        ["cos(t)*cos(s)", "cos(t)*sin(s)", "sin(t)"], ("t", "s"), [[-math.pi / 2, math.pi / 2], list(AZIMUTH_RANGE)]
    )
    return ManifoldRecord(
        name=name,
        kind=RecordKind.WARPED,
        warped=WarpedSpec(base, fiber, warping),
        immersion=f,
        lambda1=2.0,
        volume=4.0 * math.pi,
        topology=Topology(b1_zero=True, finite_pi1=True),
        homogeneous=True,
        description="unit 2-sphere as (-pi/2, pi/2) x_cos S^1 in E^3",
    )


def build_flat_torus(name: str, args: list[str]) -> ManifoldRecord:
    if args:
        raise UnknownManifoldError(name, "flat-torus takes no arguments")
    metric = MetricField.from_strings([["1", "0"], ["0", "1"]], ("x", "y"), [[0.0, 1.0], [0.0, 1.0]])
    return ManifoldRecord(
        name=name,
        kind=RecordKind.METRIC,
        metric=metric,
        lambda1=4.0 * math.pi**2,
        volume=1.0,
        topology=Topology(b1_zero=False, finite_pi1=False),
        homogeneous=True,
        description="square flat torus R^2 / Z^2",
    )


_FAMILIES: dict[str, Callable[[str, list[str]], ManifoldRecord]] = {
    "sphere": build_sphere,
    "rp": build_projective,
    "hypercylinder": build_hypercylinder,
    "clifford-torus": build_clifford_torus,
    "catenoid": build_catenoid,
    "whitney": build_whitney,
    "warped-s2": build_warped_sphere,
    "flat-torus": build_flat_torus,
}


class BuiltinCatalog:
    """:class:`ManifoldCatalog` over the families above, caching built records."""

    def __init__(self) -> None:
        self._records: dict[str, ManifoldRecord] = {}

    def get(self, name: str) -> ManifoldRecord | None:
        try:
            return self.resolve(name)
        except UnknownManifoldError as exc:
            logger.debug(str(exc))
            return None

    def resolve(self, name: str) -> ManifoldRecord:
        """Record for ``name``.

        Raises
        ------
        UnknownManifoldError
            If the family is unknown or its arguments are malformed.
        """
        key = name.strip()
        if key in self._records:
            return self._records[key]
        family, *args = key.split(":")
        builder = _FAMILIES.get(family)
        if builder is None:
            raise UnknownManifoldError(name, f"known families are {', '.join(sorted(_FAMILIES))}")
        record = builder(key, args)
        self._records[key] = record
        logger.debug(f"Built catalog record {key} ({record.kind.value}, dim {record.dim})")
        return record

    @property
    def names(self) -> list[str]:
        return list(LISTED_NAMES)

    @property
    def families(self) -> list[str]:
        return sorted(_FAMILIES)


DEFAULT_CATALOG = BuiltinCatalog()
