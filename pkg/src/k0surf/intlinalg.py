"""Small exact integer linear algebra: unimodular row reduction, kernels,
rank and span membership.  Everything works on lists of Python ints."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def _echelon_with_transform(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, int]:
    """Row-reduce ``A`` by unimodular integer row operations.

    Returns (E, U, r) with E = U A in row echelon form, U unimodular and r the
    number of nonzero rows of E (the rank).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    E = [list(row) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivot = 0
    for col in range(n):
        if pivot == m:
            break
        while True:
            nz = [r for r in range(pivot, m) if E[r][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda r: abs(E[r][col]))
            E[pivot], E[best] = E[best], E[pivot]
            U[pivot], U[best] = U[best], U[pivot]
            p = E[pivot][col]
            done = True
            for r in range(pivot + 1, m):
                if E[r][col]:
                    q = E[r][col] // p
                    E[r] = [a - q * b for a, b in zip(E[r], E[pivot])]
                    U[r] = [a - q * b for a, b in zip(U[r], U[pivot])]
                    if E[r][col]:
                        done = False
            if done:
                pivot += 1
                break
    return E, U, pivot


def left_kernel(A: Sequence[Sequence[int]]) -> Matrix:
    """Z-basis of {u : u A = 0}.  The basis is saturated because it is made
    of rows of a unimodular matrix."""
    _, U, r = _echelon_with_transform(A)
    return [row for row in U[r:]]


def rank(A: Sequence[Sequence[int]]) -> int:
    if not A:
        return 0
    return _echelon_with_transform(A)[2]


def solve_rational(basis: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis[k] = target, or None.  ``basis``
    must be linearly independent."""
    k = len(basis)
    n = len(target)
    # augmented n x (k+1) system
    M = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((r for r in range(row, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("basis vectors are linearly dependent")
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [a * inv for a in M[row]]
        for r in range(n):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    if any(M[r][k] != 0 for r in range(row, n)):
        return None
    return [M[i][k] for i in range(k)]


def in_integer_span(basis: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    coeffs = solve_rational(basis, target)
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def same_integer_span(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return all(in_integer_span(b, v) for v in a) and all(in_integer_span(a, v) for v in b)
