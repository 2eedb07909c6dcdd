"""Picard lattice of the degree-1 del Pezzo surface.

Classes are written in the basis (h, e_1, ..., e_8) with intersection
form diag(1, -1, ..., -1).  The canonical class is -3h + e_1 + ... + e_8.
"""
from __future__ import annotations

import operator
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

RANK = 9


class PicClass(tuple):
    """Integer vector (a_h, a_1, ..., a_8).

    Tuple subclass, so instances are hashable and sort lexicographically.
    ``+``, ``-`` and integer scaling act coordinatewise (not as tuple
    concatenation/repetition).
    """

    __slots__ = ()

    def __new__(cls, coeffs: Iterable[int] = ()) -> "PicClass":
        coeffs = tuple(coeffs)
        if not coeffs:
            coeffs = (0,) * RANK
        if len(coeffs) != RANK:
            raise ValueError(f"PicClass needs {RANK} coordinates, got {len(coeffs)}")
        if all(type(c) is int for c in coeffs):
            return super().__new__(cls, coeffs)
        out = []
        for c in coeffs:
            if isinstance(c, bool) or int(c) != c:
                raise TypeError(f"non-integer coordinate {c!r}")
            out.append(int(c))
        return super().__new__(cls, out)

    def __add__(self, other):  # type: ignore[override]
        return PicClass(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return PicClass(a - b for a, b in zip(self, other))

    def __neg__(self):
        return PicClass(-a for a in self)

    def __mul__(self, k):  # type: ignore[override]
        if not isinstance(k, int):
            return NotImplemented
        return PicClass(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"PicClass({list(self)})"

    def dot(self, other: "PicClass") -> int:
        return intersect(self, other)

    def square(self) -> int:
        return intersect(self, self)


def intersect(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] - sum(map(operator.mul, a[1:], b[1:]))


ZERO = PicClass()


def h() -> PicClass:
    return PicClass((1,) + (0,) * 8)


def e(i: int) -> PicClass:
    """Exceptional curve class e_i, 1 <= i <= 8."""
    if not 1 <= i <= 8:
        raise IndexError(f"e_{i} does not exist")
    coeffs = [0] * RANK
    coeffs[i] = 1
    return PicClass(coeffs)


def canonical_class() -> PicClass:
    return PicClass((-3, 1, 1, 1, 1, 1, 1, 1, 1))


K = canonical_class()


def is_root(v: Iterable[int]) -> bool:
    return intersect(v, v) == -2 and intersect(v, K) == 0


def is_exceptional_vector(v: Iterable[int]) -> bool:
    return intersect(v, v) == -1 and intersect(v, K) == -1


def _tails(n: int, sq: int, lin: int, bound: int) -> Iterator[tuple[int, ...]]:
    # integer n-tuples in [-bound, bound] with sum of squares sq and sum lin
    if n == 0:
        if sq == 0 and lin == 0:
            yield ()
        return
    if sq < 0 or lin * lin > n * sq:
        return
    for c in range(-bound, bound + 1):
        if c * c > sq:
            continue
        for rest in _tails(n - 1, sq - c * c, lin - c, bound):
            yield (c,) + rest


def _enumerate(self_square: int, k_product: int, h_bound: int, bound: int) -> list[PicClass]:
    # v = a h + sum c_i e_i: v.v = a^2 - sum c_i^2, v.K = -3a - sum c_i
    found = set()
    for a in range(-h_bound, h_bound + 1):
        sq = a * a - self_square
        lin = -k_product - 3 * a
        for tail in _tails(8, sq, lin, bound):
            found.add(PicClass((a,) + tail))
    return sorted(found)


# Cauchy-Schwarz on (sum c_i)^2 <= 8 sum c_i^2:
#   roots:       9a^2 <= 8(a^2 + 2)        ->  |a| <= 4, |c_i| <= 4
#   exceptional: (1 - 3a)^2 <= 8(a^2 + 1)  ->  -1 <= a <= 7, |c_i| <= 7
ROOT_BOUNDS = (4, 4)
EXCEPTIONAL_BOUNDS = (7, 7)


def enumerate_roots(h_bound: int = ROOT_BOUNDS[0], bound: int = ROOT_BOUNDS[1]) -> list[PicClass]:
    """All R with R.R = -2 and R.K = 0, sorted lexicographically."""
    if (h_bound, bound) == ROOT_BOUNDS:
        return list(_roots())
    return _enumerate(-2, 0, h_bound, bound)


def enumerate_exceptional_vectors(
    h_bound: int = EXCEPTIONAL_BOUNDS[0], bound: int = EXCEPTIONAL_BOUNDS[1]
) -> list[PicClass]:
    """All V with V.V = -1 and V.K = -1, sorted lexicographically."""
    if (h_bound, bound) == EXCEPTIONAL_BOUNDS:
        return list(_exceptional())
    return _enumerate(-1, -1, h_bound, bound)


@lru_cache(maxsize=None)
def _roots() -> tuple[PicClass, ...]:
    return tuple(_enumerate(-2, 0, *ROOT_BOUNDS))


@lru_cache(maxsize=None)
def _exceptional() -> tuple[PicClass, ...]:
    return tuple(_enumerate(-1, -1, *EXCEPTIONAL_BOUNDS))
