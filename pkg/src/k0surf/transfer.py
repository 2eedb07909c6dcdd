"""A8 subsystems of the root lattice, their partial-sum octads, and the
transfer of the Godeaux-side line-bundle sequence into Pic(S).

Pic(X)/tors is isometric to Pic(S), so Godeaux classes are represented
directly by PicClass vectors; an A8 system in that lattice determines
M_1 = O(K), M_i = O(A_1 + ... + A_i) for 2 <= i <= 8, M_9 = O(3K - 2A_1).
"""
from __future__ import annotations

import json
import random
from collections import deque
from typing import Sequence

from .k0 import K0Class, ch_line_bundle
from .pic import K, PicClass, e, enumerate_roots, intersect, is_root

A8System = tuple[PicClass, ...]


class A8Error(ValueError):
    pass


def check_a8(sys: Sequence[PicClass]) -> None:
    """Raise A8Error unless ``sys`` is eight roots with the (negative
    definite) A8 Cartan pattern."""
    if len(sys) != 8:
        raise A8Error(f"A8 system needs 8 roots, got {len(sys)}")
    for i, a in enumerate(sys):
        if not is_root(a):
            raise A8Error(f"A_{i + 1} = {list(a)} is not a root")
        for j in range(i + 1, 8):
            want = 1 if j == i + 1 else 0
            got = intersect(a, sys[j])
            if got != want:
                raise A8Error(f"A_{i + 1}.A_{j + 1} = {got}, expected {want}")


def is_a8(sys: Sequence[PicClass]) -> bool:
    try:
        check_a8(sys)
    except A8Error:
        return False
    return True


def canonical_a8() -> A8System:
    """(K + e_1, e_2 - e_1, ..., e_8 - e_7)."""
    sys = (K + e(1),) + tuple(e(i + 1) - e(i) for i in range(1, 8))
    check_a8(sys)
    return sys


def partial_sums(sys: Sequence[PicClass]) -> list[PicClass]:
    check_a8(sys)
    out, acc = [], PicClass()
    for a in sys:
        acc = acc + a
        out.append(acc)
    return out


def transfer_M_sequence(sys: Sequence[PicClass]) -> tuple[K0Class, ...]:
    s = partial_sums(sys)
    divisors = [K] + s[1:] + [3 * K - 2 * sys[0]]
    return tuple(ch_line_bundle(D) for D in divisors)


def weyl_reflect(root: PicClass, v: PicClass) -> PicClass:
    """Reflection in a (-2)-class: v -> v + (v.R) R."""
    if not is_root(root):
        raise A8Error(f"{list(root)} is not a root")
    return v + intersect(v, root) * root


def apply_word(word: Sequence[PicClass], v: PicClass) -> PicClass:
    for r in word:
        v = weyl_reflect(r, v)
    return v


def apply_word_to_system(word: Sequence[PicClass], sys: Sequence[PicClass]) -> A8System:
    return tuple(apply_word(word, a) for a in sys)


def _positive_roots() -> list[PicClass]:
    # one representative per +-pair; reflections only depend on the pair
    return [r for r in enumerate_roots() if r > -r]


def _orbit_path(alpha: PicClass, beta: PicClass, reflectors: list[PicClass], max_depth: int):
    """Shortest reflection word (BFS) taking alpha to beta, or None."""
    if alpha == beta:
        return []
    parent = {alpha: None}
    frontier = deque([(alpha, 0)])
    while frontier:
        v, depth = frontier.popleft()
        if depth >= max_depth:
            continue
        for r in reflectors:
            w = v + intersect(v, r) * r
            if w in parent:
                continue
            parent[w] = (v, r)
            if w == beta:
                word = []
                while parent[w] is not None:
                    w, r = parent[w]
                    word.append(r)
                return word[::-1]
            frontier.append((w, depth + 1))
    return None


def find_weyl_word(source: Sequence[PicClass], target: Sequence[PicClass], depth_bound: int = 64):
    """Reflection word mapping ``source`` to ``target`` elementwise, or None.

    Roots are matched one at a time.  Once A_1..A_{k-1} are in place, only
    reflections in roots orthogonal to them are used, so they stay fixed;
    the pointwise stabilizer of a set of vectors in a reflection group is
    generated by such reflections, so nothing is lost by this restriction.
    ``depth_bound`` caps the total word length.
    """
    check_a8(source)
    check_a8(target)
    source, target = tuple(source), tuple(target)
    if source == target:
        return []
    positive = _positive_roots()
    for r in positive:
        if apply_word_to_system([r], source) == target:
            return [r]

    word: list[PicClass] = []
    current = source
    for k in range(8):
        fixed = target[:k]
        reflectors = [r for r in positive if all(intersect(r, f) == 0 for f in fixed)]
        step = _orbit_path(current[k], target[k], reflectors, depth_bound - len(word))
        if step is None:
            return None
        word += step
        current = apply_word_to_system(step, current)
    if current != target:
        return None
    return word


def random_a8_system(rng_seed: int, length: int = 24) -> A8System:
    """Image of the canonical system under a random reflection word."""
    rng = random.Random(rng_seed)
    roots = enumerate_roots()
    word = [rng.choice(roots) for _ in range(length)]
    sys = apply_word_to_system(word, canonical_a8())
    check_a8(sys)
    return sys


def dumps_system(sys: Sequence[PicClass]) -> str:
    return json.dumps([list(a) for a in sys])


def loads_system(text: str) -> A8System:
    sys = tuple(PicClass(a) for a in json.loads(text))
    check_a8(sys)
    return sys
