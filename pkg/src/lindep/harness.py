"""Theorem-level experiments: hypothesis checks, value pools, searches, reports."""

from __future__ import annotations

import datetime as _dt
import math
import time
from dataclasses import dataclass, field

from ._version import __version__
from .characters import (
    PeriodicFunction,
    enumerate_characters,
    is_odd_prime,
    iter_erdosian,
)
from .cyclotomic import (
    conjugate,
    cyclotomic_intersection_modulus,
    determinant,
    embed_complex,
    euler_phi,
    lcm,
    zeta_power,
)
from .errors import HypothesisFailed, PrecisionExhausted, PrecisionTooLow
from .lvalues import LValueRecord, l_one_digamma, verify_nonvanishing
from .numerics import GUARD_BITS, Complex, PrecisionContext, Real, cot_derivative, cot_pi, format_decimal, format_err, format_lower
from .relations import (
    DEFAULT_BOUND,
    NoRelationCertificate,
    certificate_from_json,
    find_field_relation,
    find_integer_relation,
)
from .units import multiplicative_independence_rank, units_of

START_BITS = 512
CEILING_BITS = 4096
ERDOS_SCAN_LIMIT = 13

CONSISTENT, ANOMALY, UNDECIDED = "consistent", "anomaly", "undecided"


@dataclass
class Check:
    """A named exact or numerical check with a tri-state outcome."""

    name: str
    passed: bool | None  # None: undecided at this precision
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class VerificationReport:
    experiment: str
    config: dict
    hypothesis: dict = field(default_factory=dict)
    subjects: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    verdict: str = CONSISTENT
    started: str = ""
    elapsed: float = 0.0

    def finish(self):
        self.verdict = verdict_from_evidence(self.to_json(timestamp=False))
        return self

    def to_json(self, timestamp=True):
        data = {
            "experiment": self.experiment,
            "config": dict(self.config),
            "hypothesis": dict(self.hypothesis),
            "subjects": list(self.subjects),
            "certificates": list(self.certificates),
            "checks": [c.to_json() if isinstance(c, Check) else c for c in self.checks],
            "notes": list(self.notes),
            "verdict": self.verdict,
            "version": __version__,
        }
        if timestamp:
            data["timestamp"] = {"started": self.started, "elapsed_seconds": round(self.elapsed, 3)}
        return data


def verdict_from_evidence(data):
    """Recompute the verdict from a serialised report's checks and certificates."""
    checks = data.get("checks", [])
    certs = data.get("certificates", [])
    if any(c.get("passed") is False for c in checks) or any(c.get("kind") == "relation" for c in certs):
        return ANOMALY
    if any(c.get("passed") is None for c in checks) or any(c.get("kind") == "undecided" for c in certs):
        return UNDECIDED
    return CONSISTENT


class _Run:
    """Timing and report bookkeeping shared by the experiments."""

    def __init__(self, experiment, config):
        self.report = VerificationReport(experiment, config)
        self.report.started = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        self._t0 = time.perf_counter()

    def done(self):
        self.report.elapsed = time.perf_counter() - self._t0
        return self.report.finish()


def _config(qs, m, B, bits, **extra):
    out = {"precision": bits, "bound": B, "m": m, "moduli": list(qs)}
    out.update(extra)
    return out


# -- hypotheses --------------------------------------------------------------


def check_hypothesis_coprime(qs):
    """(pairwise coprime, gcd(prod q, prod phi(q)) == 1)."""
    qs = list(qs)
    if any(q <= 2 for q in qs):
        raise ValueError(f"all moduli must exceed 2, got {qs}")
    pairwise = all(math.gcd(a, b) == 1 for i, a in enumerate(qs) for b in qs[i + 1 :])
    gcd_condition = pairwise and math.gcd(math.prod(qs), math.prod(euler_phi(q) for q in qs)) == 1
    return pairwise, gcd_condition


def coefficient_intersection(qs, m):
    """Conductor of Q(zeta_lcm(m, prod phi)) ∩ Q(zeta_prod q); 1 means the intersection is Q."""
    return cyclotomic_intersection_modulus(lcm(m, math.prod(euler_phi(q) for q in qs)), math.prod(qs))


def _require_pairwise(qs, report):
    pairwise, gcd_condition = check_hypothesis_coprime(qs)
    report.hypothesis.update({"pairwise": pairwise, "gcd": gcd_condition})
    if not pairwise:
        raise HypothesisFailed(f"moduli {list(qs)} are not pairwise coprime", report.hypothesis)
    return gcd_condition


def _require_disjoint(qs, m, report):
    g = coefficient_intersection(qs, m)
    report.hypothesis["intersection"] = g
    if g != 1:
        raise HypothesisFailed(
            f"Q(zeta_{lcm(m, math.prod(euler_phi(q) for q in qs))}) meets Q(zeta_{math.prod(qs)}) in Q(zeta_{g})",
            report.hypothesis,
        )


# -- value pools and searches --------------------------------------------------


def _pool_characters(qs, parity):
    out = []
    for q in qs:
        for chi in enumerate_characters(q):
            if chi.is_trivial():
                continue
            if parity is None or chi.parity() == parity:
                out.append(chi)
    return out


def _lvalue(subject, ctx, cache=None):
    if cache is not None:
        hit = cache.lookup(subject.id, "digamma", ctx.bits)
        if hit is not None:
            return hit
    record = l_one_digamma(subject, ctx)
    if cache is not None:
        cache.store(record)
    return record


def _injected(records, inject):
    """Synthetic dependent values: the sum of the two pooled values at each index pair."""
    extra = []
    for i, j in inject:
        if not (0 <= i < len(records) and 0 <= j < len(records)):
            raise IndexError(f"injection index out of range: {i},{j} (pool has {len(records)} values)")
        a, b = records[i], records[j]
        extra.append(LValueRecord(f"inject({a.subject}+{b.subject})", "sum", a.value + b.value, a.bits, "injected"))
    return extra


def _escalate(search, ctx, ceiling):
    """Run search(ctx), doubling precision on PrecisionTooLow or an undecided outcome."""
    bits = ctx.bits
    ceiling = max(ceiling, bits)
    last = None
    while bits <= ceiling:
        try:
            outcome = search(PrecisionContext(bits))
        except (PrecisionTooLow, PrecisionExhausted) as exc:
            last = exc
            bits *= 2
            continue
        cert = outcome[0]
        if isinstance(cert, NoRelationCertificate) and not cert.conclusive:
            last = outcome
            bits *= 2
            continue
        return outcome
    return last


def _run_pool(run, subjects, m, B, ctx, ceiling, cache=None, inject=()):
    """Evaluate the pool, then either search for a relation or test non-vanishing."""
    report = run.report

    def search(c):
        records = [_lvalue(s, c, cache) for s in subjects]
        records += _injected(records, inject)
        if len(records) >= 2:
            ids = [r.subject for r in records]
            return find_field_relation([r.value for r in records], m, B, c, ids=ids), records
        return None, records

    if not subjects:
        report.notes.append("empty value pool: nothing to test")
        return
    if len(subjects) + len(inject) == 1:
        record = _lvalue(subjects[0], ctx, cache)
        nonzero, margin = verify_nonvanishing(subjects[0], ctx)
        report.subjects.append(record.to_json())
        report.checks.append(
            Check(f"nonvanishing {record.subject}", True if nonzero else None, f"|L| >= {format_lower(margin.value)}" if nonzero else "")
        )
        report.notes.append("single value: independence reduces to non-vanishing")
        return
    outcome = _escalate(search, ctx, ceiling)
    if isinstance(outcome, Exception):
        report.checks.append(Check("relation search", None, str(outcome)))
        return
    cert, records = outcome
    report.config["precision"] = cert.bits
    report.subjects.extend(r.to_json() for r in records)
    report.certificates.append(cert.to_json())
    if isinstance(cert, NoRelationCertificate) and not cert.conclusive:
        report.notes.append(f"no decision up to the {ceiling}-bit ceiling")


def _context(ctx):
    return ctx if ctx is not None else PrecisionContext(START_BITS)


def _field_note(m):
    if m == 1:
        return "coefficients restricted to Q"
    return f"coefficients restricted to Q(zeta_{m}) (a finite stand-in for the algebraic closure / number field K)"


def verify_theorem_odd(qs, m=1, B=DEFAULT_BOUND, ctx=None, ceiling=CEILING_BITS, cache=None, inject=()):
    """Odd-character values over Q(zeta_m), with the field-disjointness hypothesis checked first."""
    ctx = _context(ctx)
    run = _Run("thm4-odd", _config(qs, m, B, ctx.bits))
    _require_pairwise(qs, run.report)
    _require_disjoint(qs, m, run.report)
    run.report.notes.append(_field_note(m))
    _run_pool(run, _pool_characters(qs, "odd"), m, B, ctx, ceiling, cache, inject)
    return run.done()


def verify_theorem_even(qs, m=1, B=DEFAULT_BOUND, ctx=None, ceiling=CEILING_BITS, cache=None, inject=()):
    """Even nontrivial characters over Q(zeta_m), plus the pooled unit rank."""
    ctx = _context(ctx)
    run = _Run("thm3-even", _config(qs, m, B, ctx.bits))
    _require_pairwise(qs, run.report)
    run.report.notes.append(_field_note(m))
    _run_pool(run, _pool_characters(qs, "even"), m, B, ctx, ceiling, cache, inject)
    _unit_rank_check(run.report, [q for q in qs if q > 4], ctx, ceiling)
    return run.done()


def _unit_rank_check(report, qs, ctx, ceiling):
    units = [u for q in qs for u in units_of(q)]
    if not units:
        report.notes.append("no Ramachandra units for these moduli")
        return
    bits, last = ctx.bits, "precision above ceiling"
    while bits <= ceiling:
        try:
            rank, cert = multiplicative_independence_rank(units, PrecisionContext(bits))
        except PrecisionExhausted as exc:
            bits *= 2
            last = str(exc)
            continue
        data = cert.to_json()
        data["kind"] = "rank"
        report.certificates.append(data)
        report.checks.append(Check("unit rank", rank == len(units), f"rank {rank} of {len(units)} units"))
        return
    report.checks.append(Check("unit rank", None, last))


def verify_theorem_all(qs, m=1, B=DEFAULT_BOUND, ctx=None, ceiling=CEILING_BITS, cache=None, inject=()):
    """All nontrivial characters, even and odd, in a single pooled search."""
    ctx = _context(ctx)
    run = _Run("thm1-all", _config(qs, m, B, ctx.bits))
    if not _require_pairwise(qs, run.report):
        raise HypothesisFailed(
            f"gcd({math.prod(qs)}, {math.prod(euler_phi(q) for q in qs)}) != 1", run.report.hypothesis
        )
    _require_disjoint(qs, m, run.report)
    run.report.notes.append(_field_note(m))
    run.report.notes.append(
        "even values are algebraic combinations of logs of units, odd values are pi times algebraic numbers"
    )
    _run_pool(run, _pool_characters(qs, None), m, B, ctx, ceiling, cache, inject)
    return run.done()


def okada_values(qs, k, ctx):
    out = []
    for q in qs:
        for a in range(1, q):
            if 2 * a < q and math.gcd(a, q) == 1:
                out.append((f"cot{k}({a}/{q})", cot_derivative(k, a, q, ctx)))
    return out


def verify_okada(qs, k=1, B=DEFAULT_BOUND, ctx=None, ceiling=CEILING_BITS):
    """Derivatives of cot(pi z) at a/q for a in the half system of residues."""
    ctx = _context(ctx)
    run = _Run("okada", _config(qs, 1, B, ctx.bits, k=k))
    if any(q <= 2 for q in qs):
        raise HypothesisFailed(f"all moduli must exceed 2, got {list(qs)}", {"pairwise": False, "gcd": False})
    _require_pairwise(qs, run.report)

    def search(c):
        vals = okada_values(qs, k, c)
        if len(vals) < 2:
            return None, vals
        return find_integer_relation([v for _, v in vals], B, c, ids=[i for i, _ in vals]), vals

    vals = okada_values(qs, k, ctx)
    if len(vals) == 1:
        ident, v = vals[0]
        run.report.subjects.append(_real_subject(ident, "cot-derivative", v))
        run.report.checks.append(Check(f"nonvanishing {ident}", not v.contains_zero()))
        return run.done()
    outcome = _escalate(search, ctx, ceiling)
    if isinstance(outcome, Exception):
        run.report.checks.append(Check("relation search", None, str(outcome)))
        return run.done()
    cert, vals = outcome
    run.report.config["precision"] = cert.bits
    run.report.subjects.extend(_real_subject(i, "cot-derivative", v) for i, v in vals)
    run.report.certificates.append(cert.to_json())
    return run.done()


def _real_subject(ident, kind, x):
    digits = max(8, int((x.bits + GUARD_BITS) * math.log10(2)) + 2)
    return {
        "id": ident,
        "kind": kind,
        "method": "closed-form",
        "value": format_decimal(x.value, digits),
        "imag": "0",
        "err": format_err(x.err),
        "precision": x.bits,
    }


# -- exact identity suites -----------------------------------------------------


def verify_cot_identity(q, ctx=None):
    """(zeta^a + 1)/(zeta^a - 1) is purely imaginary and embeds to -i cot(pi a/q), for a in T_q."""
    if q <= 2:
        raise ValueError(f"q must exceed 2, got {q}")
    ctx = ctx or PrecisionContext(128)
    details = []
    ok = True
    for a in range(1, q):
        if not (2 * a < q and math.gcd(a, q) == 1):
            continue
        z = zeta_power(q, a)
        e = (z + 1) / (z - 1)
        exact = conjugate(e) == -e
        image = embed_complex(e, 1, ctx)
        numeric = image.re.contains_zero() and (image.im + cot_pi(a, q, ctx)).contains_zero()
        ok = ok and exact and numeric
        details.append(f"a={a}:{'ok' if exact and numeric else 'FAIL'}")
    return Check(f"cot identity q={q}", ok, " ".join(details))


def _quotient_representatives(q):
    return [a for a in range(1, q) if math.gcd(a, q) == 1 and 2 * a <= q]


def group_lemma_matrix(q, parity_quotient=False):
    """[chi(g)] over nontrivial chi and g != 1 of (Z/qZ)^x, or of its quotient by +-1."""
    if parity_quotient:
        chars = [c for c in enumerate_characters(q) if c.is_even() and not c.is_trivial()]
        elements = [a for a in _quotient_representatives(q) if a != 1]
    else:
        chars = [c for c in enumerate_characters(q) if not c.is_trivial()]
        elements = [a for a in range(2, q) if math.gcd(a, q) == 1]
    return [[chi.value(g) for g in elements] for chi in chars]


def verify_group_lemma(q, parity_quotient=False):
    """Exact determinant of the nontrivial character table is nonzero."""
    if q <= 2:
        raise ValueError(f"q must exceed 2, got {q}")
    matrix = group_lemma_matrix(q, parity_quotient)
    variant = "quotient" if parity_quotient else "full"
    if not matrix:
        return Check(f"group lemma q={q} {variant}", True, "trivial group: empty matrix")
    det = determinant(matrix)
    nonzero = not (det == 0)
    return Check(f"group lemma q={q} {variant}", nonzero, f"{len(matrix)}x{len(matrix)} det {'!=' if nonzero else '=='} 0")


# -- Erdosian functions ---------------------------------------------------------


def choose_erdosian(p):
    """A non-odd Erdosian function mod p with period sum 0, or None (only p = 3).

    f(1) = f(p-1) = 1 breaks oddness, f(2) = f(p-2) = -1 restores the balance and
    every remaining pair (a, p-a) gets opposite signs.
    """
    if p < 5:
        return None
    signs = [0] * (p - 1)
    signs[0] = signs[p - 2] = 1
    signs[1] = signs[p - 3] = -1
    for a in range(3, (p - 1) // 2 + 1):
        signs[a - 1], signs[p - a - 1] = 1, -1
    return PeriodicFunction.from_signs(signs)


def erdos_scan(p, ctx):
    """Non-vanishing checks for every non-odd Erdosian function mod p.

    Functions with a nonzero period sum have a pole at s = 1 and pass trivially.
    """
    checks = []
    for f in iter_erdosian(p, exclude_odd=True):
        if f.period_sum != 0:
            checks.append(Check(f"nonvanishing {f.id}", True, f"pole at s=1 (period sum {f.period_sum})"))
            continue
        nonzero, margin = verify_nonvanishing(f, ctx)
        checks.append(Check(f"nonvanishing {f.id}", True if nonzero else None, f"|L| >= {format_lower(margin.value)}"))
    return checks


def erdos_survey(ps, B=DEFAULT_BOUND, ctx=None, ceiling=CEILING_BITS, m=1):
    """Non-vanishing scan over non-odd Erdosian functions, then one relation search across primes."""
    ctx = _context(ctx)
    ps = list(ps)
    run = _Run("erdos", _config(ps, m, B, ctx.bits))
    if len(set(ps)) != len(ps) or not all(is_odd_prime(p) for p in ps):
        raise ValueError(f"need distinct odd primes, got {ps}")
    for p in ps:
        if p <= ERDOS_SCAN_LIMIT:
            checks = erdos_scan(p, ctx)
            run.report.checks.extend(checks)
            run.report.notes.append(f"p={p}: scanned {len(checks)} non-odd Erdosian functions")
        else:
            run.report.notes.append(f"p={p}: exhaustive scan skipped (p > {ERDOS_SCAN_LIMIT})")
    gcd_condition = math.gcd(math.prod(ps), math.prod(p - 1 for p in ps)) == 1
    run.report.hypothesis.update({"pairwise": True, "gcd": gcd_condition})
    if not gcd_condition:
        run.report.notes.append("independence leg skipped: gcd hypothesis fails")
        report = run.done()
        raise HypothesisFailed(
            f"gcd({math.prod(ps)}, {math.prod(p - 1 for p in ps)}) != 1", report.hypothesis, report=report
        )
    chosen = []
    for p in ps:
        f = choose_erdosian(p)
        if f is None:
            run.report.notes.append(f"p={p}: no non-odd Erdosian function has period sum 0; left out of the search")
        else:
            chosen.append(f)
    _run_pool(run, chosen, m, B, ctx, ceiling)
    return run.done()


# -- Sophie Germain chain ------------------------------------------------------------


def _prime_sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[: min(2, limit + 1)] = b"\x00" * min(2, limit + 1)
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return flags


def sophie_germain_chain(limit):
    """(B, C): primes p <= limit with (p-1)/2 prime, and the greedy chain with p' > 2p + 1."""
    if limit < 5:
        raise ValueError(f"limit must be >= 5, got {limit}")
    flags = _prime_sieve(limit)
    b_set = [p for p in range(5, limit + 1) if flags[p] and flags[(p - 1) // 2] and p % 2 == 1]
    c_set = []
    for p in b_set:
        if not c_set or p > 2 * c_set[-1] + 1:
            c_set.append(p)
    return b_set, c_set


# -- re-verification from serialised reports -------------------------------------------


def subject_value(entry, bits):
    """Rebuild a subject's value as a Complex from its decimal strings."""
    re = Real.from_decimal(entry["value"], entry["err"], bits)
    im = Real.from_decimal(entry.get("imag", "0"), entry["err"], bits)
    return Complex(re, im)


def reverify_certificates(data):
    """Re-check each relation certificate in a report against its serialised values.

    Returns a list of (ids, holds) pairs; nothing is recomputed from scratch.
    """
    from .relations import verify_relation

    by_id = {s["id"]: s for s in data.get("subjects", [])}
    out = []
    for cert in data.get("certificates", []):
        if cert.get("kind") != "relation":
            continue
        bits = int(cert.get("precision", data["config"]["precision"]))
        xs = [subject_value(by_id[i], bits) for i in cert["ids"]]
        coeffs = certificate_from_json(cert)
        holds = verify_relation(xs, coeffs, PrecisionContext(bits)).contains_zero()
        out.append((cert["ids"], holds))
    return out
