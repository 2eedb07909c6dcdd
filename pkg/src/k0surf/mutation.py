"""Numerically semiorthonormal sequences and their mutation calculus.

Positions are 1-based throughout, matching the usual L_1, L_2, ...
notation for braid generators: ``left_mutate(seq, i)`` acts on the pair
(v_i, v_{i+1}).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .k0 import K0Class, O, ch_curve_sheaf, ch_line_bundle, dual, euler_pairing, twist
from .pic import K, e

Seq = tuple[K0Class, ...]


class SequenceError(ValueError):
    pass


def first_violation(seq: Sequence[K0Class]) -> tuple[int, int] | None:
    """Smallest (j, i), j >= i, 1-based, where the sequence fails to be
    numerically semiorthonormal; ``None`` if it is valid."""
    for j in range(len(seq)):
        for i in range(j + 1):
            want = 1 if i == j else 0
            if euler_pairing(seq[j], seq[i]) != want:
                return (j + 1, i + 1)
    return None


def validate(seq: Sequence[K0Class]) -> tuple[bool, tuple[int, int] | None]:
    bad = first_violation(seq)
    return bad is None, bad


def is_valid(seq: Sequence[K0Class]) -> bool:
    return first_violation(seq) is None


def _check_position(seq: Sequence[K0Class], i: int) -> None:
    if not 1 <= i < len(seq):
        raise IndexError(f"mutation position {i} outside 1..{len(seq) - 1}")


def left_mutate(seq: Sequence[K0Class], i: int) -> Seq:
    """(a, b) -> (b - chi(a, b) a, a) at positions i, i+1."""
    _check_position(seq, i)
    out = list(seq)
    a, b = seq[i - 1], seq[i]
    out[i - 1] = b - euler_pairing(a, b) * a
    out[i] = a
    return tuple(out)


def right_mutate(seq: Sequence[K0Class], i: int) -> Seq:
    """(a, b) -> (b, a - chi(a, b) b) at positions i, i+1."""
    _check_position(seq, i)
    out = list(seq)
    a, b = seq[i - 1], seq[i]
    out[i - 1] = b
    out[i] = a - euler_pairing(a, b) * b
    return tuple(out)


def dualize_reverse(seq: Sequence[K0Class]) -> Seq:
    return tuple(dual(v) for v in reversed(seq))


def normalize_sign(v: K0Class) -> K0Class:
    """Flip sign so the first nonzero of (x, y_h, y_1, ..., y_8, z) is positive."""
    for c in v.coords():
        if c:
            return v if c > 0 else -v
    return v


def normalize_signs(seq: Sequence[K0Class]) -> Seq:
    return tuple(normalize_sign(v) for v in seq)


def twist_all(seq: Sequence[K0Class], D) -> Seq:
    return tuple(twist(v, D) for v in seq)


def completely_orthogonal(items: Sequence[K0Class]) -> bool:
    return all(
        euler_pairing(a, b) == 0
        for p, a in enumerate(items)
        for q, b in enumerate(items)
        if p != q
    )


def reorder_block(seq: Sequence[K0Class], start: int, stop: int, order: Sequence[int]) -> Seq:
    """Permute the 1-based block seq[start..stop] by ``order`` (0-based
    offsets into the block).  Only allowed for completely orthogonal blocks,
    where any order is again semiorthonormal."""
    block = list(seq[start - 1 : stop])
    if sorted(order) != list(range(len(block))):
        raise ValueError("order is not a permutation of the block")
    if not completely_orthogonal(block):
        raise SequenceError(f"block {start}..{stop} is not completely orthogonal")
    return tuple(seq[: start - 1]) + tuple(block[k] for k in order) + tuple(seq[stop:])


def m_sequence() -> Seq:
    """(O(K), O(K+e_2), ..., O(K+e_8), O(K-2e_1))."""
    divisors = [K] + [K + e(i) for i in range(2, 9)] + [K - 2 * e(1)]
    return tuple(ch_line_bundle(D) for D in divisors)


def remark_start() -> Seq:
    """Classes of (O_S, O_S(-2e_1), O_{e_2}, ..., O_{e_8})."""
    return (O, ch_line_bundle(-2 * e(1))) + tuple(ch_curve_sheaf(e(i)) for i in range(2, 9))


@dataclass
class Step:
    op: str
    index: int | None
    sequence: Seq
    valid: bool = True

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "index": self.index,
            "valid": self.valid,
            "sequence": [v.to_json() for v in self.sequence],
        }


@dataclass
class Transcript:
    steps: list[Step] = field(default_factory=list)
    failed_step: str | None = None

    def record(self, op: str, index: int | None, seq: Seq) -> None:
        ok = is_valid(seq)
        self.steps.append(Step(op, index, seq, ok))
        if not ok and self.failed_step is None:
            self.failed_step = op if index is None else f"{op}[{index}]"

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def reproduce_remark(start: Sequence[K0Class] | None = None) -> tuple[Seq, Transcript]:
    """Turn the classes of (O, O(-2e_1), O_{e_2}, ..., O_{e_8}) into
    (m_1, ..., m_9).

    Steps: dualize and reverse; right-mutate each dual curve class across
    O(2e_1), which moves O(2e_1) to the front; forget shifts by sign
    normalization; twist by K - 2e_1; put the completely orthogonal middle
    block back in increasing order.
    """
    seq = tuple(start) if start is not None else remark_start()
    n = len(seq)
    log = Transcript()
    log.record("start", None, seq)

    seq = dualize_reverse(seq)
    log.record("dualize_reverse", None, seq)

    # O(2e_1) now sits at position n-1; walk it leftwards to position 1
    for i in range(n - 2, 0, -1):
        seq = right_mutate(seq, i)
        log.record("right_mutate", i, seq)

    seq = normalize_signs(seq)
    log.record("normalize_signs", None, seq)

    seq = twist_all(seq, K - 2 * e(1))
    log.record("twist", None, seq)

    try:
        seq = reorder_block(seq, 2, n - 1, list(reversed(range(n - 2))))
    except SequenceError:
        log.failed_step = log.failed_step or "reorder"
        return seq, log
    log.record("reorder", None, seq)
    return seq, log
