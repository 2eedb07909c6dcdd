"""Orthogonal complements, induced binary forms, congruence certificates of
unextendability, and a randomized extension search.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import intlinalg
from .k0 import (
    LATTICE_RANK,
    K0Class,
    ch_curve_sheaf,
    ch_line_bundle,
    euler_pairing,
    from_basis_coords,
    lattice_basis,
    to_basis_coords,
)
from .mutation import completely_orthogonal, is_valid, normalize_sign
from .pic import K, PicClass, enumerate_exceptional_vectors, intersect, is_exceptional_vector

log = logging.getLogger(__name__)

DEFAULT_MODULI = (4, 8, 16, 3, 9, 5, 25, 7)


class ExtensionError(ValueError):
    pass


# --------------------------------------------------------------------------
# complements and forms


def right_orthogonal_complement(seq: Sequence[K0Class]) -> list[K0Class]:
    """Z-basis of {w in ch(K_0(S)) : chi(w, v) = 0 for every v in seq}."""
    seq = list(seq)
    if seq:
        coords = [to_basis_coords(v) for v in seq]
        if intlinalg.rank(coords) != len(seq):
            raise ExtensionError("sequence classes are linearly dependent")
    basis = lattice_basis()
    if not seq:
        return basis
    A = [[euler_pairing(b, v) for v in seq] for b in basis]
    return [from_basis_coords(u) for u in intlinalg.left_kernel(A)]


def same_span(a: Sequence[K0Class], b: Sequence[K0Class]) -> bool:
    return intlinalg.same_integer_span(
        [to_basis_coords(v) for v in a], [to_basis_coords(v) for v in b]
    )


@dataclass(frozen=True)
class BinaryForm:
    """q(s, t) = a s^2 + b s t + c t^2."""

    a: int
    b: int
    c: int

    def __call__(self, s: int, t: int) -> int:
        return self.a * s * s + self.b * s * t + self.c * t * t

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def induced_form(basis: Sequence[K0Class]) -> BinaryForm:
    if len(basis) != 2:
        raise ExtensionError(f"induced form needs a rank-2 basis, got rank {len(basis)}")
    w1, w2 = basis
    return BinaryForm(
        euler_pairing(w1, w1),
        euler_pairing(w1, w2) + euler_pairing(w2, w1),
        euler_pairing(w2, w2),
    )


# --------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    kind: str  # "non-representable" | "witness" | "inconclusive"
    modulus: int | None = None
    witness: tuple[int, int] | None = None
    residue_table: dict[int, list[int]] = field(default_factory=dict)

    @property
    def non_representable(self) -> bool:
        return self.kind == "non-representable"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "modulus": self.modulus,
            "witness": list(self.witness) if self.witness else None,
            "residue_table": {str(m): v for m, v in self.residue_table.items()},
        }


def residues(form: BinaryForm, modulus: int) -> list[int]:
    """Sorted values of q(s, t) mod M over all residue pairs."""
    return sorted({form(s, t) % modulus for s in range(modulus) for t in range(modulus)})


def recheck(form: BinaryForm, cert: Certificate) -> bool:
    """Independent re-verification of a certificate."""
    if cert.kind == "non-representable":
        M = cert.modulus
        return all(form(s, t) % M != 1 % M for s in range(M) for t in range(M))
    if cert.kind == "witness":
        return form(*cert.witness) == 1
    return True


def _signed_range(bound: int):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def represents_one(
    form: BinaryForm, moduli: Sequence[int] = DEFAULT_MODULI, search_bound: int = 50
) -> Certificate:
    """Try to decide whether q(s, t) = 1 has an integer solution.

    A modulus with no residue pair hitting 1 proves it does not; a bounded
    search may find a witness; otherwise the answer is "inconclusive".
    """
    table = {}
    for M in moduli:
        if M < 2:
            raise ValueError(f"modulus must be >= 2, got {M}")
        vals = residues(form, M)
        table[M] = vals
        if 1 not in vals:
            return Certificate("non-representable", modulus=M, residue_table=table)
    for r in range(1, search_bound + 1):
        for s in _signed_range(r):
            for t in _signed_range(r):
                if max(abs(s), abs(t)) == r and form(s, t) == 1:
                    return Certificate("witness", witness=(s, t), residue_table=table)
    return Certificate("inconclusive", residue_table=table)


@dataclass
class UnextendabilityResult:
    certificate: Certificate
    complement: list[K0Class]
    form: BinaryForm

    def to_json(self) -> dict:
        return {
            "certificate": self.certificate.to_json(),
            "complement": [w.to_json() for w in self.complement],
            "form": list(self.form.as_tuple()),
        }


def unextendability_certificate(
    seq: Sequence[K0Class], moduli: Sequence[int] = DEFAULT_MODULI, search_bound: int = 50
) -> UnextendabilityResult:
    comp = right_orthogonal_complement(seq)
    if len(comp) != 2:
        raise ExtensionError(f"complement has rank {len(comp)}; certificates need rank 2")
    form = induced_form(comp)
    return UnextendabilityResult(represents_one(form, moduli, search_bound), comp, form)


# --------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Shape:
    labels: tuple[str, ...]
    tail_orthogonal: bool

    def __str__(self) -> str:
        parts = []
        for label, group in itertools.groupby(self.labels):
            n = len(list(group))
            parts.extend([label] * n if n < 3 else [f"{label}*{n}"])
        tail = " | tail completely orthogonal" if self.tail_orthogonal else ""
        return "(" + ", ".join(parts) + ")" + tail


def element_label(v: K0Class) -> str:
    v = normalize_sign(v)
    if v.x == 1 and v.z == intersect(v.y, v.y):
        return "LB"
    if v.x == 0 and is_exceptional_vector(v.y) and v.z == 1:
        return "CURVE"
    return "OTHER"


def classify_shape(seq: Sequence[K0Class]) -> Shape:
    labels = tuple(element_label(v) for v in seq)
    k = 0
    while k < len(labels) and labels[k] == "LB":
        k += 1
    return Shape(labels, completely_orthogonal(list(seq[k:])))


# --------------------------------------------------------------------------
# randomized search


def _twice_pairing_matrix() -> np.ndarray:
    """G with 2 chi(u, w) = u^T G w in flat (x, y_h, y_1..y_8, z) coordinates."""
    kvec = [intersect(PicClass(np.eye(9, dtype=int)[j]), K) for j in range(9)]
    G = np.zeros((LATTICE_RANK, LATTICE_RANK), dtype=np.int64)
    G[0, 0] = 2
    G[0, 10] = G[10, 0] = 1
    for j in range(9):
        G[0, 1 + j] = -kvec[j]
        G[1 + j, 0] = kvec[j]
        G[1 + j, 1 + j] = -2 if j == 0 else 2
    return G


TWICE_CHI = _twice_pairing_matrix()


def _box(bound: int, dim: int) -> np.ndarray:
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def build_pool(
    line_bundle_bound: int = 1, curves: bool = True, general_bound: int = 0
) -> list[K0Class]:
    """Candidate classes with chi(w, w) = 1, sign-normalized and sorted.

    (i) O(D) for D in the box |D_k| <= line_bundle_bound;
    (ii) O_C for the 240 exceptional classes C (their negatives normalize
         to the same class);
    (iii) if general_bound > 0, every lattice class (x, y, z) in the box of
         that radius with x^2 + x z - y.y = 1.
    """
    pool: set[K0Class] = set()
    if line_bundle_bound >= 0:
        for D in _box(line_bundle_bound, 9):
            pool.add(ch_line_bundle(PicClass(D.tolist())))
    if curves:
        for C in enumerate_exceptional_vectors():
            pool.add(normalize_sign(ch_curve_sheaf(C)))
    if general_bound > 0:
        Y = _box(general_bound, 9)
        ysq = Y[:, 0] ** 2 - (Y[:, 1:] ** 2).sum(axis=1)
        ysum = Y.sum(axis=1)
        b = general_bound
        for x in range(-b, b + 1):
            for z in range(-b, b + 1):
                ok = (x * x + x * z - ysq == 1) & ((z - ysum) % 2 == 0)
                for y in Y[ok]:
                    pool.add(normalize_sign(K0Class(x, PicClass(y.tolist()), z)))
    return sorted(pool)


@dataclass
class SearchConfig:
    line_bundle_bound: int = 1
    curves: bool = True
    general_bound: int = 1
    trials: int = 10_000
    leaves_per_trial: int = 4
    rng_seed: int = 20130
    workers: int = 1

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SearchReport:
    seed_sequence: list[K0Class]
    pool_size: int
    trials: int
    max_length: int
    length_histogram: dict[int, int]
    shapes: dict[str, int]
    maximal_shapes: dict[str, int]
    maximal_sequences: list[list[K0Class]]
    n_maximal_sequences: int
    certificates: list[dict]
    config: SearchConfig

    def to_json(self) -> dict:
        return {
            "seed_sequence": [v.to_json() for v in self.seed_sequence],
            "pool_size": self.pool_size,
            "trials": self.trials,
            "max_length": self.max_length,
            "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
            "shapes": dict(sorted(self.shapes.items())),
            "maximal_shapes": dict(sorted(self.maximal_shapes.items())),
            "n_maximal_sequences": self.n_maximal_sequences,
            "maximal_sequences": [[v.to_json() for v in s] for s in self.maximal_sequences],
            "certificates": self.certificates,
            "config": self.config.to_json(),
        }


def _seed_candidates(P: np.ndarray, seed: Sequence[K0Class]) -> np.ndarray:
    cands = np.arange(len(P))
    for v in seed:
        col = TWICE_CHI @ np.array(v.coords(), dtype=np.int64)
        cands = cands[P[cands] @ col == 0]
    return cands


def _run_trials(P: np.ndarray, start: np.ndarray, rng_seed: int, trials: range, leaves_per_trial: int):
    leaves: set[tuple[int, ...]] = set()
    cols = P @ TWICE_CHI.T  # cols[w] = G w, so 2 chi(u, w) = P[u] . cols[w]
    for trial in trials:
        rng = np.random.default_rng([rng_seed, trial])
        budget = [leaves_per_trial]
        path: list[int] = []

        def dive(cands: np.ndarray) -> None:
            if len(cands) == 0:
                leaves.add(tuple(path))
                budget[0] -= 1
                return
            for w in rng.permutation(cands):
                if budget[0] <= 0:
                    return
                path.append(int(w))
                dive(cands[P[cands] @ cols[w] == 0])
                path.pop()

        dive(start)
    return leaves


def random_extension_search(
    seed_seq: Sequence[K0Class], config: SearchConfig | None = None, max_report: int = 20
) -> SearchReport:
    """Randomized depth-first extension of ``seed_seq`` by pool classes.

    Each trial draws its own RNG stream from (rng_seed, trial index), so the
    outcome does not depend on how trials are split across workers.  A trial
    runs a depth-first search with shuffled children until it has reached
    ``leaves_per_trial`` dead ends; every dead end is a sequence that no pool
    class extends.
    """
    config = config or SearchConfig()
    seed_seq = list(seed_seq)
    if not is_valid(seed_seq):
        raise ExtensionError("seed sequence is not numerically semiorthonormal")
    pool = build_pool(config.line_bundle_bound, config.curves, config.general_bound)
    if not pool:
        log.warning("empty candidate pool; increase the pool bounds")
    P = np.array([v.coords() for v in pool], dtype=np.int64).reshape(-1, LATTICE_RANK)
    start = _seed_candidates(P, seed_seq)

    workers = max(1, config.workers)
    if workers == 1 or config.trials < 2 * workers:
        leaves = _run_trials(P, start, config.rng_seed, range(config.trials), config.leaves_per_trial)
    else:
        chunks = np.array_split(np.arange(config.trials), workers)
        leaves = set()
        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [
                ex.submit(_run_trials, P, start, config.rng_seed,
                          range(int(c[0]), int(c[-1]) + 1), config.leaves_per_trial)
                for c in chunks if len(c)
            ]
            for f in futs:
                leaves |= f.result()

    ordered = sorted(leaves)
    seqs = [seed_seq + [pool[k] for k in leaf] for leaf in ordered]
    for s in seqs:
        assert is_valid(s), "search produced an invalid sequence"
    lengths = Counter(len(s) for s in seqs)
    max_length = max(lengths) if lengths else len(seed_seq)
    shapes = Counter(str(classify_shape(s)) for s in seqs)
    longest = [s for s in seqs if len(s) == max_length]
    maximal_shapes = Counter(str(classify_shape(s)) for s in longest)

    # the same maximal set shows up in many orders; report distinct sets
    distinct: dict[tuple, list[K0Class]] = {}
    for s in longest:
        distinct.setdefault(tuple(sorted(s)), s)
    reported = [distinct[k] for k in sorted(distinct)][:max_report]

    certificates = []
    for s in reported:
        try:
            res = unextendability_certificate(s)
            certificates.append(res.to_json())
        except ExtensionError as exc:
            certificates.append({"error": str(exc)})

    return SearchReport(
        seed_sequence=seed_seq,
        pool_size=len(pool),
        trials=config.trials,
        max_length=max_length,
        length_histogram=dict(lengths),
        shapes=dict(shapes),
        maximal_shapes=dict(maximal_shapes),
        maximal_sequences=reported,
        n_maximal_sequences=len(distinct),
        certificates=certificates,
        config=config,
    )
