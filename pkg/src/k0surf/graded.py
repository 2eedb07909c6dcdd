"""Exact graded linear algebra for homogeneous ideals in k[x1, ..., x4].

Dimensions of degree-d pieces are ranks of integer coefficient matrices
(rows: monomial multiples of generators, columns: degree-d monomials in
graded-lex order with x1 > x2 > x3 > x4).  Ranks are computed exactly by
fraction-free elimination and cross-checked modulo a large prime.
"""
from __future__ import annotations

import json
import logging
import math
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

log = logging.getLogger(__name__)

NVARS = 4
DEFAULT_WEIGHTS = (1, 2, 3, 4)
ORDER = 5

Exponent = tuple[int, ...]

# known primes near 2^31..2^61, drawn from at random for the modular cross-check
PRIMES = (
    2147483647,
    2305843009213693951,
    1000000007,
    998244353,
    4294967291,
    18446744073709551557,
    9223372036854775783,
)


class IdealParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class FermatMembershipError(ValueError):
    pass


@dataclass
class HomogPoly:
    degree: int
    terms: dict[Exponent, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            exp = tuple(int(a) for a in exp)
            if len(exp) != NVARS or min(exp) < 0:
                raise ValueError(f"bad exponent {exp}")
            if sum(exp) != self.degree:
                raise ValueError(f"term {exp} has degree {sum(exp)}, expected {self.degree}")
            if c:
                clean[exp] = clean.get(exp, 0) + int(c)
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def from_terms(cls, terms: Mapping[Exponent, int]) -> "HomogPoly":
        terms = {exp: c for exp, c in terms.items() if c}
        degrees = {sum(exp) for exp in terms}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
        return cls(degrees.pop() if degrees else 0, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self, w: Sequence[int] = DEFAULT_WEIGHTS) -> set[int]:
        return {monomial_weight(exp, w) for exp in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = [f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(exp) if a]
            body = " ".join(factors)
            if not body:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)} {body}"
            out.append(("- " if c < 0 else "+ ") + text)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]


@dataclass
class GradedIdeal:
    generators: list[HomogPoly]

    def __post_init__(self):
        self.generators = [g for g in self.generators if not g.is_zero()]


def fermat_quintic() -> HomogPoly:
    terms = {}
    for i in range(NVARS):
        exp = [0] * NVARS
        exp[i] = 5
        terms[tuple(exp)] = 1
    return HomogPoly(5, terms)


def variable(i: int) -> HomogPoly:
    """x_i for 1 <= i <= 4."""
    exp = [0] * NVARS
    exp[i - 1] = 1
    return HomogPoly(1, {tuple(exp): 1})


# --------------------------------------------------------------------------
# monomials and weights


@lru_cache(maxsize=None)
def monomials(d: int, nvars: int = NVARS) -> tuple[Exponent, ...]:
    """Degree-d exponent vectors, graded lex with x1 > x2 > ... (descending)."""
    if d < 0:
        return ()
    if nvars == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        out.extend((a,) + rest for rest in monomials(d - a, nvars - 1))
    return tuple(out)


def n_monomials(d: int, nvars: int = NVARS) -> int:
    return math.comb(d + nvars - 1, nvars - 1) if d >= 0 else 0


def monomial_weight(exp: Exponent, weights: Sequence[int] = DEFAULT_WEIGHTS) -> int:
    return sum(w * a for w, a in zip(weights, exp)) % ORDER


def reduce_weights(weights: Sequence[int]) -> tuple[int, ...]:
    if len(weights) != NVARS:
        raise ValueError(f"need {NVARS} weights, got {len(weights)}")
    return tuple(int(w) % ORDER for w in weights)


# --------------------------------------------------------------------------
# rank


Row = dict[int, int]


def _content_free(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def rank_exact(rows: Iterable[Row]) -> int:
    """Rank over Q of sparse integer rows.

    Rows are reduced one at a time against an echelon basis using only
    integer cross-multiplication (fraction-free) and content removal, so
    the result is exact.
    """
    basis: dict[int, Row] = {}
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            lead = min(row)
            piv = basis.get(lead)
            if piv is None:
                basis[lead] = _content_free(row)
                break
            a, b = piv[lead], row[lead]
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                new[k] = new.get(k, 0) - b * v
            row = _content_free({k: v for k, v in new.items() if v})
    return len(basis)


def rank_mod_p(rows: Iterable[Row], p: int) -> int:
    basis: dict[int, Row] = {}
    for row in rows:
        row = {k: v % p for k, v in row.items() if v % p}
        while row:
            lead = min(row)
            piv = basis.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                basis[lead] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[lead]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(basis)


def matrix_rank(rows: Sequence[Row], cross_check: bool = True, rng: random.Random | None = None) -> int:
    """Exact rank, optionally cross-checked modulo random large primes.

    A modular rank can only fall below the rational one (unlucky prime);
    any disagreement is logged and retried with another prime.
    """
    rows = list(rows)
    exact = rank_exact(rows)
    if cross_check:
        rng = rng or random.Random(len(rows))
        primes = list(PRIMES)
        rng.shuffle(primes)
        for p in primes:
            modular = rank_mod_p(rows, p)
            if modular == exact:
                break
            if modular > exact:
                raise ArithmeticError(f"rank mod {p} = {modular} exceeds exact rank {exact}")
            log.warning("unlucky prime %d: modular rank %d < exact rank %d", p, modular, exact)
        else:
            log.warning("modular cross-check never agreed with exact rank %d", exact)
    return exact


# --------------------------------------------------------------------------
# degree pieces


def product_rows(ideal: GradedIdeal, d: int) -> list[dict[Exponent, int]]:
    """All m * g with deg(m g) = d, as exponent -> coefficient maps."""
    out = []
    for g in ideal.generators:
        for m in monomials(d - g.degree):
            out.append({tuple(a + b for a, b in zip(m, exp)): c for exp, c in g.terms.items()})
    return out


def _index_rows(products: list[dict[Exponent, int]], d: int, keep=None) -> list[Row]:
    col = {m: k for k, m in enumerate(monomials(d))}
    rows = []
    for prod in products:
        row = {col[m]: c for m, c in prod.items() if keep is None or keep(m)}
        if row:
            rows.append(row)
    return rows


def degree_piece_dim(ideal: GradedIdeal, d: int, cross_check: bool = True) -> int:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return matrix_rank(_index_rows(product_rows(ideal, d), d), cross_check)


def character_piece_dim(
    ideal: GradedIdeal,
    d: int,
    c: int,
    weights: Sequence[int] = DEFAULT_WEIGHTS,
    cross_check: bool = True,
) -> int:
    """dim of (degree-d piece of the ideal) intersected with the weight-c span.

    Computed as dim I_d minus the rank of I_d projected onto the other
    weights.  For ideals stable under the Z/5 action this equals the rank of
    I_d projected onto weight c.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    w = reduce_weights(weights)
    c %= ORDER
    products = product_rows(ideal, d)
    full = matrix_rank(_index_rows(products, d), cross_check)
    others = matrix_rank(
        _index_rows(products, d, keep=lambda m: monomial_weight(m, w) != c), cross_check
    )
    return full - others


def character_dims(ideal: GradedIdeal, d: int, weights: Sequence[int] = DEFAULT_WEIGHTS) -> list[int]:
    return [character_piece_dim(ideal, d, c, weights) for c in range(ORDER)]


def contains(ideal: GradedIdeal, f: HomogPoly) -> bool:
    """Whether f lies in the degree-deg(f) piece of the ideal."""
    d = f.degree
    rows = _index_rows(product_rows(ideal, d), d)
    extra = _index_rows([f.terms], d)
    return matrix_rank(rows + extra) == matrix_rank(rows)


def check_only_fermat_multiples(ideal: GradedIdeal, d: int = 9) -> tuple[bool, tuple[int, int]]:
    """Whether the degree-d piece of the ideal is just the Fermat multiples.

    Returns (answer, (dim of ideal piece, dim of Fermat multiples)).
    """
    F = fermat_quintic()
    if not contains(ideal, F):
        raise FermatMembershipError("the Fermat quintic is not in the degree-5 piece of the ideal")
    mine = degree_piece_dim(ideal, d)
    fermat = degree_piece_dim(GradedIdeal([F]), d)
    return mine == fermat, (mine, fermat)


def count_sections_less_than(
    ideal: GradedIdeal, d: int, bound: int, c: int = 0, weights: Sequence[int] = DEFAULT_WEIGHTS
) -> bool:
    return character_piece_dim(ideal, d, c, weights) < bound


# --------------------------------------------------------------------------
# file formats

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^x([1-9][0-9]*)(?:\^([0-9]+))?$")


def parse_polynomial(text: str, line: int = 1) -> HomogPoly:
    """Parse ``3 x1^2 x2 - x3^3 + ...``; factors may also be joined by ``*``."""
    text = text.strip()
    if not text:
        raise IdealParseError(line, "empty polynomial")
    pieces = _TERM_SPLIT.split(text)
    # split yields [first, sign, term, sign, term, ...]
    signed = []
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    if len(pieces) % 2:
        raise IdealParseError(line, f"dangling sign in {text!r}")
    for k in range(0, len(pieces), 2):
        signed.append((pieces[k], pieces[k + 1]))

    terms: dict[Exponent, int] = {}
    for sign, body in signed:
        tokens = body.replace("*", " ").split()
        if not tokens:
            raise IdealParseError(line, f"missing term after {sign!r}")
        coeff = 1
        if re.fullmatch(r"[0-9]+", tokens[0]):
            coeff = int(tokens.pop(0))
        exp = [0] * NVARS
        for tok in tokens:
            m = _FACTOR.match(tok)
            if not m:
                raise IdealParseError(line, f"cannot parse factor {tok!r}")
            var = int(m.group(1))
            if not 1 <= var <= NVARS:
                raise IdealParseError(line, f"unknown variable x{var}")
            exp[var - 1] += int(m.group(2) or 1)
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + (coeff if sign == "+" else -coeff)
    try:
        return HomogPoly.from_terms(terms)
    except ValueError as exc:
        raise IdealParseError(line, str(exc)) from None


def parse_ideal_text(text: str) -> GradedIdeal:
    gens = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            gens.append(parse_polynomial(body, n))
    if not gens:
        raise IdealParseError(1, "no generators")
    return GradedIdeal(gens)


def parse_ideal_json(obj) -> GradedIdeal:
    """``{"generators": [[{"coeff": c, "exp": [a, b, c, d]}, ...], ...]}``;
    terms may also be written as ``[c, [a, b, c, d]]``."""
    gens = []
    raw_gens = obj["generators"] if isinstance(obj, dict) else obj
    for n, g in enumerate(raw_gens, start=1):
        terms: dict[Exponent, int] = {}
        for t in g:
            coeff, exp = (t["coeff"], t["exp"]) if isinstance(t, dict) else t
            if len(exp) != NVARS:
                raise IdealParseError(n, f"exponent {exp} needs {NVARS} entries")
            key = tuple(int(a) for a in exp)
            terms[key] = terms.get(key, 0) + int(coeff)
        try:
            gens.append(HomogPoly.from_terms(terms))
        except ValueError as exc:
            raise IdealParseError(n, str(exc)) from None
    return GradedIdeal(gens)


def load_ideal(path: str | Path) -> GradedIdeal:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise IdealParseError(exc.lineno, exc.msg) from None
        return parse_ideal_json(obj)
    return parse_ideal_text(text)


def dump_ideal_json(ideal: GradedIdeal) -> str:
    return json.dumps(
        {
            "generators": [
                [{"coeff": c, "exp": list(exp)} for exp, c in sorted(g.terms.items(), reverse=True)]
                for g in ideal.generators
            ]
        }
    )
