"""Ramachandra units of Q(zeta_q + zeta_q^-1) and their multiplicative independence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .cyclotomic import CycloElt, absolute_norm, embed_complex, galois_apply, lcm, zeta_power
from .errors import InvalidIndex, InvariantViolation, NonCoprimeModuli, PrecisionExhausted
from .numerics import Real, format_err, log_real


def unit_indices(q):
    """The index set {a : 1 < a < q/2, gcd(a, q) = 1}."""
    return [a for a in range(2, (q + 1) // 2) if 2 * a < q and math.gcd(a, q) == 1]


def qualifying_divisors(q):
    """Divisors d of q with d != q and gcd(d, q/d) = 1."""
    return [d for d in range(1, q) if q % d == 0 and math.gcd(d, q // d) == 1]


def _check_index(q, a):
    if q <= 4:
        raise InvalidIndex(f"Ramachandra units need q > 4, got q={q}")
    if not (1 < a and 2 * a < q and math.gcd(a, q) == 1):
        raise InvalidIndex(f"a={a} is not a unit index mod {q} (need 1 < a < q/2, gcd(a, q) = 1)")


def d_exponent(q, a):
    """The exponent (1 - a)/2 * sum(d) resolved in Z/qZ."""
    _check_index(q, a)
    total = (1 - a) * sum(qualifying_divisors(q))
    if total % 2 == 0:
        return (total // 2) % q
    # only reachable for odd q, where 2 is invertible
    return total * pow(2, -1, q) % q


def eta(q, a):
    """prod over qualifying d of (1 - zeta^(a d)) / (1 - zeta^d), built as geometric sums."""
    _check_index(q, a)
    out = CycloElt.rational(1, q)
    for d in qualifying_divisors(q):
        # (1 - x^a)/(1 - x) = 1 + x + ... + x^(a-1) with x = zeta_q^d != 1
        term = zeta_power(q, 0)
        for j in range(1, a):
            term = term + zeta_power(q, d * j)
        out = out * term
    return out


@dataclass(frozen=True)
class RamachandraUnit:
    q: int
    a: int
    elt: CycloElt
    d_exp: int

    @property
    def id(self):
        return f"xi{self.q}({self.a})"

    def embed(self, ctx, k=1):
        """Real image under zeta_q -> exp(2 pi i k / q)."""
        return embed_complex(self.elt, k, ctx).re

    def log_abs(self, ctx, k=1):
        return log_real(abs(self.embed(ctx, k)), ctx)


@lru_cache(maxsize=None)
def xi(q, a):
    """Ramachandra unit zeta_q^(d_a) * eta_a with its invariants checked exactly."""
    d = d_exponent(q, a)
    elt = zeta_power(q, d) * eta(q, a)
    if galois_apply(-1, elt) != elt:
        raise InvariantViolation(f"xi({q},{a}) is not real")
    norm = absolute_norm(elt)
    if norm not in (1, -1):
        raise InvariantViolation(f"xi({q},{a}) has norm {norm}, not a unit")
    return RamachandraUnit(q, a, elt, d)


def units_of(q):
    return [xi(q, a) for a in unit_indices(q)]


def _pooled_modulus(units):
    moduli = sorted({u.q for u in units})
    for i, m in enumerate(moduli):
        for n in moduli[i + 1 :]:
            if math.gcd(m, n) != 1:
                raise NonCoprimeModuli(f"moduli {m} and {n} are not coprime")
    return lcm(*moduli)


def embedding_columns(modulus):
    """One k per complex-conjugate pair of embeddings of Q(zeta_Q)."""
    return [k for k in range(1, (modulus + 1) // 2) if 2 * k < modulus and math.gcd(k, modulus) == 1] or [1]


def log_embedding_matrix(units, ctx):
    """Rows log|sigma_k(xi)| over the real embeddings of the pooled field."""
    if not units:
        raise ValueError("need at least one unit")
    modulus = _pooled_modulus(units)
    cols = embedding_columns(modulus)
    return [[u.log_abs(ctx, k % u.q) for k in cols] for u in units]


@dataclass
class RankCertificate:
    rank: int
    rows: int
    columns: int
    bits: int
    min_pivot: Real | None
    relation: object | None = None

    @property
    def full(self):
        return self.rank == self.rows

    def to_json(self):
        return {
            "rank": self.rank,
            "rows": self.rows,
            "columns": self.columns,
            "precision": self.bits,
            "min_pivot": format_err(self.min_pivot.mig()) if self.min_pivot is not None else None,
            "relation": self.relation.to_json() if self.relation is not None else None,
        }


def certified_rank(matrix):
    """(rank, smallest pivot) by full pivoting; stops at the first undecidable pivot."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0, None
    ncols = len(rows[0])
    rank, min_pivot = 0, None
    live = list(range(len(rows)))
    cols = list(range(ncols))
    while live and cols:
        best = max(((r, c) for r in live for c in cols), key=lambda rc: rows[rc[0]][rc[1]].mig())
        r0, c0 = best
        pivot = rows[r0][c0]
        if pivot.mig() <= 0:
            break
        rank += 1
        if min_pivot is None or pivot.mig() < min_pivot.mig():
            min_pivot = pivot
        live.remove(r0)
        cols.remove(c0)
        for r in live:
            factor = rows[r][c0] / pivot
            for c in cols:
                rows[r][c] = rows[r][c] - factor * rows[r0][c]
    return rank, min_pivot


def multiplicative_independence_rank(units, ctx):
    """Numerical rank of the log-embedding matrix with an error-aware pivot test.

    A full rank certifies independence. Otherwise an integer relation among the
    rows is searched for; if none is found the rank is undecided at this precision.
    """
    matrix = log_embedding_matrix(units, ctx)
    rank, min_pivot = certified_rank(matrix)
    cert = RankCertificate(rank, len(matrix), len(matrix[0]), ctx.bits, min_pivot)
    if rank == len(matrix):
        return rank, cert
    from .relations import RelationCertificate, find_vector_relation

    found = find_vector_relation(matrix, 2**20, ctx, ids=[u.id for u in units])
    if isinstance(found, RelationCertificate):
        cert.relation = found
        return rank, cert
    raise PrecisionExhausted(f"rank of {len(matrix)} units undecided at {ctx.bits} bits (certified {rank})")

