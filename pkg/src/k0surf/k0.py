"""Numerical K-theory of the degree-1 del Pezzo surface.

A class is stored as (x, y, z) meaning x + y + z/2 * p in the Chow ring with
1/2 inverted, where p is the point class.  Keeping ``z`` doubled keeps all
arithmetic in integers.  The Chern character image of K_0(S) is the
sublattice cut out by z = y_h + y_1 + ... + y_8 (mod 2); it has Z-basis

    1,  h + p/2,  e_1 - p/2, ..., e_8 - p/2,  p.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .pic import K, PicClass, ZERO, e, h, intersect

LATTICE_RANK = 11


class NonLatticeError(ValueError):
    """Raised when an Euler characteristic comes out non-integral."""


@dataclass(frozen=True, order=True)
class K0Class:
    x: int
    y: PicClass
    z: int

    def __post_init__(self):
        if not isinstance(self.y, PicClass):
            object.__setattr__(self, "y", PicClass(self.y))
        object.__setattr__(self, "x", int(self.x))
        object.__setattr__(self, "z", int(self.z))

    @property
    def in_lattice(self) -> bool:
        return (self.z - sum(self.y)) % 2 == 0

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "K0Class":
        return K0Class(-self.x, -self.y, -self.z)

    def __mul__(self, k: int) -> "K0Class":
        if not isinstance(k, int):
            return NotImplemented
        return K0Class(k * self.x, k * self.y, k * self.z)

    __rmul__ = __mul__

    def coords(self) -> tuple[int, ...]:
        """Flat 11-tuple (x, y_h, y_1, ..., y_8, z)."""
        return (self.x, *self.y, self.z)

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "K0Class":
        if len(coords) != LATTICE_RANK:
            raise ValueError(f"expected {LATTICE_RANK} integers, got {len(coords)}")
        return cls(coords[0], PicClass(coords[1:10]), coords[10])

    def to_json(self) -> dict:
        return {"x": self.x, "y": list(self.y), "z": self.z}

    @classmethod
    def from_json(cls, obj: dict) -> "K0Class":
        return cls(obj["x"], PicClass(obj["y"]), obj["z"])

    def __str__(self) -> str:
        return f"({self.x}, {list(self.y)}, {self.z})"


def _half(n: int) -> int:
    q, r = divmod(n, 2)
    if r:
        raise NonLatticeError(f"Euler characteristic {n}/2 is not an integer")
    return q


def ch_line_bundle(D: Iterable[int]) -> K0Class:
    D = PicClass(D)
    return K0Class(1, D, intersect(D, D))


def ch_curve_sheaf(C: Iterable[int]) -> K0Class:
    """Class of O_C from 0 -> O(-C) -> O -> O_C -> 0."""
    C = PicClass(C)
    return K0Class(0, C, -intersect(C, C))


def euler_chi(v: K0Class) -> int:
    """Riemann-Roch: chi = x - y.K/2 + z/2."""
    return v.x + _half(v.z - intersect(v.y, K))


def euler_pairing(v1: K0Class, v2: K0Class) -> int:
    """chi(v1, v2); bilinear, not symmetric."""
    twice = (
        2 * v1.x * v2.x
        - v1.x * intersect(v2.y, K)
        + v2.x * intersect(v1.y, K)
        + v1.x * v2.z
        + v2.x * v1.z
        - 2 * intersect(v1.y, v2.y)
    )
    return _half(twice)


def mult(v1: K0Class, v2: K0Class) -> K0Class:
    return K0Class(
        v1.x * v2.x,
        v1.x * v2.y + v2.x * v1.y,
        v1.x * v2.z + v2.x * v1.z + 2 * intersect(v1.y, v2.y),
    )


def dual(v: K0Class) -> K0Class:
    return K0Class(v.x, -v.y, v.z)


def twist(v: K0Class, D: Iterable[int]) -> K0Class:
    return mult(v, ch_line_bundle(D))


def gram(seq: Sequence[K0Class]) -> list[list[int]]:
    return [[euler_pairing(a, b) for b in seq] for a in seq]


def det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# Z-basis of ch(K_0(S)) in (x, y, z) coordinates.
def lattice_basis() -> list[K0Class]:
    basis = [K0Class(1, ZERO, 0), K0Class(0, h(), 1)]
    basis += [K0Class(0, e(i), -1) for i in range(1, 9)]
    basis.append(K0Class(0, ZERO, 2))
    return basis


def to_basis_coords(v: K0Class) -> tuple[int, ...]:
    """Coordinates of a lattice member with respect to ``lattice_basis()``."""
    if not v.in_lattice:
        raise NonLatticeError(f"{v} is not in ch(K_0(S))")
    y_h, *y_e = v.y
    # z = y_h - sum(y_e) + 2 * c_p
    c_p = (v.z - y_h + sum(y_e)) // 2
    return (v.x, y_h, *y_e, c_p)


def from_basis_coords(c: Sequence[int]) -> K0Class:
    if len(c) != LATTICE_RANK:
        raise ValueError(f"expected {LATTICE_RANK} coordinates")
    y = PicClass(c[1:10])
    z = c[1] - sum(c[2:10]) + 2 * c[10]
    return K0Class(c[0], y, z)


# Named classes used throughout.
O = ch_line_bundle(ZERO)
M10 = K0Class(0, -h(), 3)
M11 = K0Class(2, 2 * K + h() - 3 * e(1), -2)


def dumps_classes(seq: Iterable[K0Class]) -> str:
    return json.dumps([v.to_json() for v in seq])


def loads_classes(text: str) -> list[K0Class]:
    return [K0Class.from_json(obj) for obj in json.loads(text)]


def to_csv_row(v: K0Class) -> str:
    return ",".join(str(c) for c in v.coords())


def from_csv_row(row: str) -> K0Class:
    return K0Class.from_coords([int(c) for c in row.split(",")])
