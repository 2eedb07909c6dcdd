import random

import pytest

from k0surf.extension import same_span
from k0surf.k0 import O, ch_curve_sheaf, ch_line_bundle, dual, euler_pairing, gram
from k0surf.mutation import (
    SequenceError,
    dualize_reverse,
    is_valid,
    left_mutate,
    m_sequence,
    normalize_sign,
    remark_start,
    reorder_block,
    reproduce_remark,
    right_mutate,
    twist_all,
    validate,
)
from k0surf.pic import K, PicClass, e, h


def standard_basis():
    return (O, ch_line_bundle(h()), ch_line_bundle(2 * h())) + tuple(
        ch_curve_sheaf(e(i)) for i in range(1, 9)
    )


def random_valid_sequence(rng: random.Random, moves: int = 6):
    seq = standard_basis()
    for _ in range(moves):
        i = rng.randrange(1, len(seq))
        seq = left_mutate(seq, i) if rng.random() < 0.5 else right_mutate(seq, i)
    D = PicClass(rng.randint(-2, 2) for _ in range(9))
    return twist_all(seq, D)


def random_triples(n, seed=7):
    rng = random.Random(seed)
    for _ in range(n):
        seq = random_valid_sequence(rng)
        k = rng.randrange(0, len(seq) - 2)
        yield seq[k : k + 3]


def test_validate_examples():
    assert validate((O,)) == (True, None)
    assert validate(m_sequence()) == (True, None)
    assert validate((O, ch_line_bundle(2 * e(1)))) == (False, (2, 1))
    # chi(O(2e_1), O) = chi(O(-2e_1)) = -2
    assert euler_pairing(ch_line_bundle(2 * e(1)), O) == -2


def test_validate_reports_diagonal():
    bad = (O, 2 * O)
    assert validate(bad) == (False, (2, 1))
    assert validate((2 * O,)) == (False, (1, 1))


def test_m_sequence_all_pairings():
    seq = m_sequence()
    assert len(seq) == 9
    g = gram(seq)
    checks = 0
    for j in range(9):
        for i in range(j + 1):
            assert g[j][i] == (1 if i == j else 0)
            checks += 1
    assert checks == 45


def test_mutation_index_errors():
    seq = m_sequence()
    for bad in (0, 9, -1):
        with pytest.raises(IndexError):
            left_mutate(seq, bad)
        with pytest.raises(IndexError):
            right_mutate(seq, bad)


def test_orthogonal_pair_mutation_is_swap():
    a, b = ch_curve_sheaf(e(2)), ch_curve_sheaf(e(3))
    assert left_mutate((a, b), 1) == (b, a)
    assert right_mutate((a, b), 1) == (b, a)


def test_mutations_inverse_and_valid():
    rng = random.Random(3)
    for _ in range(200):
        seq = random_valid_sequence(rng)
        assert is_valid(seq)
        i = rng.randrange(1, len(seq))
        L, R = left_mutate(seq, i), right_mutate(seq, i)
        assert is_valid(L) and is_valid(R)
        assert right_mutate(L, i) == seq
        assert left_mutate(R, i) == seq


def test_braid_relations_on_random_triples():
    n = 0
    for t in random_triples(200):
        assert is_valid(t)
        lhs = left_mutate(left_mutate(left_mutate(t, 1), 2), 1)
        rhs = left_mutate(left_mutate(left_mutate(t, 2), 1), 2)
        assert lhs == rhs
        lhs = right_mutate(right_mutate(right_mutate(t, 1), 2), 1)
        rhs = right_mutate(right_mutate(right_mutate(t, 2), 1), 2)
        assert lhs == rhs
        n += 1
    assert n == 200


def test_adjacent_braid_on_long_sequences():
    rng = random.Random(11)
    for _ in range(200):
        seq = random_valid_sequence(rng)
        i = rng.randrange(1, len(seq) - 1)
        lhs = left_mutate(left_mutate(left_mutate(seq, i), i + 1), i)
        rhs = left_mutate(left_mutate(left_mutate(seq, i + 1), i), i + 1)
        assert lhs == rhs


def test_mutations_preserve_span_and_triangularity():
    rng = random.Random(5)
    for _ in range(50):
        seq = random_valid_sequence(rng)
        i = rng.randrange(1, len(seq))
        out = left_mutate(seq, i)
        assert same_span(seq, out)
        g = gram(out)
        assert all(g[k][k] == 1 for k in range(len(out)))
        assert all(g[j][k] == 0 for j in range(len(out)) for k in range(j))


def test_dualize_reverse():
    rng = random.Random(9)
    for _ in range(50):
        seq = random_valid_sequence(rng)
        assert dualize_reverse(dualize_reverse(seq)) == seq
        assert is_valid(dualize_reverse(seq))


def test_dualize_reverse_remark_display():
    out = dualize_reverse(remark_start())
    expected = tuple(dual(ch_curve_sheaf(e(i))) for i in range(8, 1, -1)) + (
        ch_line_bundle(2 * e(1)),
        ch_line_bundle(PicClass()),
    )
    assert out == expected


def test_normalize_sign():
    assert normalize_sign(-O) == O
    assert normalize_sign(-ch_curve_sheaf(e(4))) == ch_curve_sheaf(e(4))


def test_reorder_requires_orthogonal_block():
    seq = m_sequence()
    out = reorder_block(seq, 2, 8, [6, 5, 4, 3, 2, 1, 0])
    assert is_valid(out)
    with pytest.raises(SequenceError):
        reorder_block(seq, 1, 2, [1, 0])


def test_reproduce_remark():
    final, log = reproduce_remark()
    assert final == m_sequence()
    assert log.failed_step is None
    assert all(step.valid for step in log.steps)
    assert all(is_valid(step.sequence) for step in log.steps)


def test_reproduce_remark_intermediate():
    _, log = reproduce_remark()
    after = [s for s in log.steps if s.op == "right_mutate"][-1].sequence
    L = 2 * e(1)
    expected = (ch_line_bundle(L),) + tuple(-ch_line_bundle(L + e(i)) for i in range(8, 1, -1)) + (O,)
    assert after == expected
    normalized = next(s for s in log.steps if s.op == "normalize_signs").sequence
    assert normalized == tuple(normalize_sign(v) for v in expected)


def test_reproduce_remark_idempotent():
    a, la = reproduce_remark()
    b, lb = reproduce_remark()
    assert a == b
    assert la.to_json() == lb.to_json()


def test_reproduce_remark_reports_failure():
    start = list(remark_start())
    start[3] = ch_line_bundle(e(3))
    _, log = reproduce_remark(start)
    assert log.failed_step == "start"


def test_twist_to_m_sequence():
    # twisting the mutated sequence by K - 2e_1 lands on line bundles O(K + ...)
    seq = twist_all((ch_line_bundle(2 * e(1)),), K - 2 * e(1))
    assert seq == (ch_line_bundle(K),)
