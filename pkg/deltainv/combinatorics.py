"""Tuple set S(n), its cardinality p(n) - 1, and the Nash embedding dimension."""

from __future__ import annotations

import math
import threading

from deltainv.custom_types import TupleSpec

_PARTITIONS: list[int] = [1]
_LOCK = threading.Lock()


def _require_n(n: int) -> None:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")


def partition_count(n: int) -> int:
    """Exact p(n) via Euler's pentagonal-number recurrence.

    The table only grows under a lock and entries never change once written.
    """
    if n < 0:
        return 0
    if n < len(_PARTITIONS):
        return _PARTITIONS[n]
    with _LOCK:
        table = _PARTITIONS
        for m in range(len(table), n + 1):
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                sign = 1 if k % 2 else -1
                total += sign * table[m - g1]
                g2 = g1 + k
                if g2 <= m:
                    total += sign * table[m - g2]
                k += 1
            table.append(total)
    return _PARTITIONS[n]


def cardinality(n: int) -> int:
    """Size of S(n), which is p(n) - 1."""
    _require_n(n)
    return partition_count(n) - 1


def asymptotic_cardinality(n: int) -> float:
    """Hardy-Ramanujan estimate exp(pi sqrt(2n/3)) / (4 n sqrt 3)."""
    _require_n(n)
    return math.exp(math.pi * math.sqrt(2.0 * n / 3.0)) / (4.0 * n * math.sqrt(3.0))


def nash_dimension(n: int) -> int:
    """Euclidean dimension n(n+1)(3n+11)/2 of the Nash embedding theorem."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return n * (n + 1) * (3 * n + 11) // 2


def _tuples_with(max_sum: int, smallest: int, largest: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for first in range(smallest, min(largest, max_sum) + 1):
        for rest in _tuples_with(max_sum - first, first, largest):
            out.append((first,) + rest)
    return out


def enumerate_tuples(n: int) -> list[TupleSpec]:
    """All canonical tuples of S(n), ordered by k then lexicographically."""
    _require_n(n)
    raw = _tuples_with(n, 2, n - 1)
    raw.sort(key=lambda parts: (len(parts), parts))
    return [TupleSpec(n, parts) for parts in raw]


def tuple_to_partition(t: TupleSpec) -> tuple[int, ...]:
    """Pad with ones up to n and sort, giving a partition of n other than {n}."""
    return tuple(sorted(t.parts + (1,) * (t.n - t.total), reverse=True))
