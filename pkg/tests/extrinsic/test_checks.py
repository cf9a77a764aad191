import numpy as np
import pytest

from deltainv.combinatorics import enumerate_tuples
from deltainv.custom_types import TupleSpec
from deltainv.delta import SubspaceTuple, delta_invariant, delta_profile
from deltainv.exceptions import InvalidTupleError
from deltainv.extrinsic import (
    ImmersionField,
    SecondFundamentalForm,
    chen_inequality_check,
    curvature_via_gauss,
    equality_structure_check,
    ideality_check,
    mean_curvature,
    point_ideality,
    second_fundamental_form,
)
from deltainv.extrinsic.checks import chen_sweep_at_point, equality_tuples, space_form_term
from deltainv.geometry import constant_curvature_tensor
from deltainv.lagrangian import whitney_immersion
from deltainv.sampling import interior_grid

UMBILICAL_3 = SecondFundamentalForm(-np.eye(3))
FLAT_3 = SecondFundamentalForm(np.zeros((3, 3, 1)))


class TestChenInequality:
    def test_unit_three_sphere(self):
        t = TupleSpec(3, (2,))
        d = delta_invariant(constant_curvature_tensor(3, 1.0), t)
        result = chen_inequality_check(d, 1.0, t)
        assert result.margin == pytest.approx(0.25)
        assert result.passed
        assert result.certified

    def test_totally_geodesic(self):
        for t in enumerate_tuples(3):
            d = delta_invariant(constant_curvature_tensor(3, 0.0), t)
            assert chen_inequality_check(d, 0.0, t).margin == pytest.approx(0.0)

    def test_space_form_term(self):
        assert space_form_term(4, TupleSpec(4, (2,)), 1.0) == pytest.approx(5.0)

    def test_totally_geodesic_in_a_space_form_is_sharp(self):
        t = TupleSpec(4, (2,))
        d = delta_invariant(constant_curvature_tensor(4, -1.0), t)
        assert chen_inequality_check(d, 0.0, t, c=-1.0).margin == pytest.approx(0.0, abs=1e-12)

    def test_violation_fails(self):
        t = TupleSpec(3, (2,))
        d = delta_invariant(constant_curvature_tensor(3, 1.0), t)
        result = chen_inequality_check(d, 0.0, t)
        assert not result.passed
        assert result.margin == pytest.approx(-2.0)

    def test_mismatched_tuple(self):
        d = delta_invariant(constant_curvature_tensor(4, 1.0), TupleSpec(4, (2,)))
        with pytest.raises(InvalidTupleError):
            chen_inequality_check(d, 1.0, TupleSpec(4, (3,)))

    def test_hypercylinder_sweep(self, catalog, fast_options):
        f = catalog.resolve("hypercylinder:1:2").immersion
        for p in interior_grid(f.domain, 2):
            results = chen_sweep_at_point(second_fundamental_form(f, p), opts=fast_options)
            assert len(results) == 2
            assert min(r.margin for r in results) >= -1e-6

    def test_random_codimension_two_data(self, gauss_tensor, fast_options):
        _, h = gauss_tensor(4, codim=2)
        assert all(r.passed for r in chen_sweep_at_point(h, opts=fast_options))


class TestIdeality:
    def test_unit_sphere(self):
        ideal = point_ideality(UMBILICAL_3)
        assert ideal.H2 == pytest.approx(1.0)
        assert ideal.dhat0 == pytest.approx(1.0)
        assert ideal.result.verdict
        assert ideal.argmax == TupleSpec(3)
        assert ideal.structure.passed
        assert TupleSpec(3) in ideal.equal_at
        assert ideal.maximum_principle.passed

    def test_plane(self):
        ideal = point_ideality(FLAT_3)
        assert ideal.result.verdict
        assert ideal.result.margin == pytest.approx(0.0)

    def test_whitney_sphere_is_not_ideal(self, fast_options):
        f = whitney_immersion(3)
        report = ideality_check(f, [[0.5, 0.2, -0.3], [1.0, 0.0, 0.0]], fast_options)
        assert not report.ideal
        assert all(pt.result.margin > 0 for pt in report.points)

    def test_equality_tuples(self):
        profile = delta_profile(constant_curvature_tensor(3, 1.0))
        assert equality_tuples(profile, 1.0) == [TupleSpec(3)]
        assert equality_tuples(profile, 0.3) == []


class TestEqualityStructure:
    def test_umbilical_at_the_empty_tuple(self):
        t = TupleSpec(3)
        result = equality_structure_check(UMBILICAL_3, SubspaceTuple(np.eye(3), t), t)
        assert result.passed
        assert result.details["mu"] == [pytest.approx(-1.0)]

    def test_totally_geodesic(self):
        t = TupleSpec(3, (2,))
        assert equality_structure_check(FLAT_3, SubspaceTuple(np.eye(3), t), t).passed

    def test_block_form_passes(self):
        # A = diag(a, -a + mu, mu) with trace mu on the block
        t = TupleSpec(3, (2,))
        a = np.diag([0.7, -0.7 + 0.4, 0.4])
        result = equality_structure_check(SecondFundamentalForm(a), SubspaceTuple(np.eye(3), t), t)
        assert result.passed
        assert result.details["mu"] == [pytest.approx(0.4)]

    def test_generic_data_fails(self, rng):
        t = TupleSpec(4, (2,))
        h = SecondFundamentalForm(rng.normal(size=(4, 4, 2)))
        result = equality_structure_check(h, SubspaceTuple(np.eye(4), t), t)
        assert not result.passed
        assert result.lhs > 1e-5

    def test_frame_for_another_tuple(self):
        with pytest.raises(InvalidTupleError):
            equality_structure_check(UMBILICAL_3, SubspaceTuple(np.eye(3), TupleSpec(3)), TupleSpec(3, (2,)))


def test_equality_attained_by_the_block_form(fast_options):
    """The block form above realizes equality in the fundamental inequality."""
    t = TupleSpec(3, (2,))
    h = SecondFundamentalForm(np.diag([0.7, -0.3, 0.4]))
    d = delta_invariant(curvature_via_gauss(h), t, fast_options)
    assert chen_inequality_check(d, mean_curvature(h).H2, t).margin == pytest.approx(0.0, abs=1e-8)


ELLIPSOID = [
    "cos(u1)",
    "1.5*sin(u1)*cos(u2)",
    "2*sin(u1)*sin(u2)*cos(u3)",
    "2.5*sin(u1)*sin(u2)*sin(u3)",
]
#: u = phi(v), a change of chart coordinates with unit Jacobian determinant.
CHART_CHANGE = {"u1": "(v1 + 0.1*sin(v2))", "u2": "v2", "u3": "(v3 + 0.3*v1)"}


def substitute(text: str, mapping: dict[str, str]) -> str:
    for name, replacement in mapping.items():
        text = text.replace(name, replacement)
    return text


class TestReparametrization:
    """Delta-invariants and the Chen check depend on the immersion, not on its chart."""

    @pytest.fixture
    def charts(self):
        f = ImmersionField.from_strings(ELLIPSOID, ["u1", "u2", "u3"], [[0, np.pi], [0, np.pi], [0, 2 * np.pi]])
        g = ImmersionField.from_strings(
            [substitute(text, CHART_CHANGE) for text in ELLIPSOID], ["v1", "v2", "v3"], [[0, 3], [0, 3], [0, 6]]
        )
        return f, g

    @pytest.mark.parametrize("v", [[1.0, 1.2, 0.7], [1.4, 2.0, 2.5], [2.0, 0.9, 4.0]])
    def test_same_invariants_in_both_charts(self, charts, v):
        f, g = charts
        u = [v[0] + 0.1 * np.sin(v[1]), v[1], v[2] + 0.3 * v[0]]
        h_f = second_fundamental_form(f, u)
        h_g = second_fundamental_form(g, v)
        assert mean_curvature(h_g).H2 == pytest.approx(mean_curvature(h_f).H2, abs=1e-10)
        original = delta_profile(curvature_via_gauss(h_f))
        changed = delta_profile(curvature_via_gauss(h_g))
        for t in enumerate_tuples(3):
            assert changed[t].delta == pytest.approx(original[t].delta, abs=1e-9)
        margins_f = [r.margin for r in chen_sweep_at_point(h_f)]
        margins_g = [r.margin for r in chen_sweep_at_point(h_g)]
        assert margins_g == pytest.approx(margins_f, abs=1e-9)
        assert all(m >= -1e-6 for m in margins_f)

    def test_substitution_is_not_the_identity(self, charts):
        f, g = charts
        v = [1.0, 1.2, 0.7]
        assert not np.allclose(f.jets(v)[1], g.jets(v)[1])
