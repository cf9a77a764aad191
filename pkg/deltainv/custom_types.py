from dataclasses import dataclass, field
from typing import Iterable, Optional

from deltainv.exceptions import InvalidTupleError


@dataclass(frozen=True)
class TupleSpec:
    """A canonical element (n_1, ..., n_k) of S(n).

    Parts are stored sorted; each lies in [2, n-1] and their sum is at most n.
    The empty tuple is allowed and stands for delta(empty) = tau.
    """

    n: int
    parts: tuple[int, ...] = field(default=())

    def __post_init__(self):
        parts = tuple(sorted(int(p) for p in self.parts))
        object.__setattr__(self, "parts", parts)
        if self.n < 2:
            raise InvalidTupleError(parts, self.n, "n must be at least 2")
        if any(p < 2 or p > self.n - 1 for p in parts):
            raise InvalidTupleError(parts, self.n, "parts must lie in [2, n-1]")
        if sum(parts) > self.n:
            raise InvalidTupleError(parts, self.n, "parts sum exceeds n")

    @classmethod
    def parse(cls, n: int, text: str | Iterable[int]) -> "TupleSpec":
        """Build from a comma-separated string (``"2,3"``; ``""`` or ``"()"`` for the empty tuple)."""
        if isinstance(text, str):
            cleaned = text.strip().strip("()[]").strip()
            parts = [int(p) for p in cleaned.split(",") if p.strip()] if cleaned else []
        else:
            parts = list(text)
        return cls(n, tuple(parts))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def pair_count(self) -> int:
        """Sum of n_j(n_j - 1) over the parts."""
        return sum(p * (p - 1) for p in self.parts)

    def blocks(self) -> list[range]:
        """Consecutive column ranges of the leading blocks in a frame."""
        out, start = [], 0
        for p in self.parts:
            out.append(range(start, start + p))
            start += p
        return out

    def trailing(self) -> range:
        return range(self.total, self.n)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.k, self.parts)

    def label(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    def __iter__(self):
        yield from self.parts

    def __len__(self):
        return len(self.parts)

    def to_tuple(self):
        return self.parts


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one theorem check at one point, before report context is attached.

    ``margin`` follows the report convention: ``rhs - lhs`` for inequalities and
    ``-residual`` for residual checks, so ``passed`` means ``margin >= -tolerance``.
    Verdict checks carry their conclusion in ``verdict``.
    """

    check: str
    passed: bool
    tolerance: float
    margin: Optional[float] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    tuple_spec: Optional[TupleSpec] = None
    certified: bool = True
    verdict: Optional[bool] = None
    details: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_margin(cls, check: str, lhs: float, rhs: float, tolerance: float, **kwargs) -> "CheckResult":
        margin = float(rhs) - float(lhs)
        return cls(
            check=check,
            passed=margin >= -tolerance,
            tolerance=tolerance,
            margin=margin,
            lhs=float(lhs),
            rhs=float(rhs),
            **kwargs,
        )

    @classmethod
    def from_residual(cls, check: str, residual: float, tolerance: float, **kwargs) -> "CheckResult":
        residual = float(residual)
        return cls(
            check=check,
            passed=residual <= tolerance,
            tolerance=tolerance,
            margin=-residual,
            lhs=residual,
            rhs=0.0,
            **kwargs,
        )

    @classmethod
    def inconclusive(cls, check: str, reason: str, **kwargs) -> "CheckResult":
        details = dict(kwargs.pop("details", {}))
        details["inconclusive"] = reason
        return cls(check=check, passed=False, tolerance=0.0, margin=-1.0, verdict=None, details=details, **kwargs)
