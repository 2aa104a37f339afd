"""Dirichlet characters mod q and periodic arithmetic functions.

Characters are exponent vectors against a fixed CRT generating set of
(Z/qZ)^x; their values are exact roots of unity in Q(zeta_phi(q)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .cyclotomic import CycloElt, euler_phi, factorize, normalize_modulus, zeta_power
from .errors import NotDirichletType, TooLarge


def _order_mod(g, m, group_order):
    order = group_order
    for p, _ in factorize(group_order):
        while order % p == 0 and pow(g, order // p, m) == 1:
            order //= p
    return order


def _primitive_root(pe, p):
    group_order = pe - pe // p
    for g in range(2, pe):
        if g % p and _order_mod(g, pe, group_order) == group_order:
            return g
    raise ArithmeticError(f"no primitive root mod {pe}")


@lru_cache(maxsize=None)
def _bsgs_table(g, m, order):
    step = math.isqrt(order) + 1
    baby = {}
    x = 1
    for j in range(step):
        baby.setdefault(x, j)
        x = x * g % m
    return step, baby, pow(g, -step, m)


def discrete_log(a, g, m, order):
    """Smallest e >= 0 with g^e = a (mod m), by baby-step giant-step."""
    step, baby, giant = _bsgs_table(g, m, order)
    gamma = a % m
    for i in range(step + 1):
        j = baby.get(gamma)
        if j is not None:
            return (i * step + j) % order
        gamma = gamma * giant % m
    raise ValueError(f"{a} is not a power of {g} mod {m}")


@dataclass(frozen=True)
class _Component:
    modulus: int  # prime power factor of q
    base: int  # generator mod the prime power
    order: int
    kind: str  # "cyclic", "sign" (-1 mod 2^k) or "five" (5 mod 2^k)


@dataclass(frozen=True)
class UnitGroupStructure:
    """Generators of (Z/qZ)^x as (residue mod q, order) pairs."""

    q: int
    generators: tuple
    components: tuple = field(repr=False, compare=False)

    @property
    def order(self):
        return math.prod(o for _, o in self.generators)

    def coordinates(self, a):
        """Exponent of each generator in a (a must be a unit mod q)."""
        out = []
        for comp in self.components:
            r = a % comp.modulus
            if comp.kind == "cyclic":
                out.append(discrete_log(r, comp.base, comp.modulus, comp.order))
            elif comp.kind == "sign":
                out.append(0 if r % 4 == 1 else 1)
            else:
                r = r if r % 4 == 1 else (-r) % comp.modulus
                out.append(discrete_log(r, 5, comp.modulus, comp.order))
        return tuple(out)

    def element(self, coords):
        x = 1
        for (g, _), e in zip(self.generators, coords):
            x = x * pow(g, e, self.q) % self.q
        return x


def _crt_lift(residue, pe, q):
    rest = q // pe
    if rest == 1:
        return residue % q
    # x = residue (mod pe), x = 1 (mod rest)
    return (residue * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % q


@lru_cache(maxsize=None)
def unit_group_structure(q):
    if q < 2:
        raise ValueError(f"modulus must be > 1, got {q}")
    generators, components = [], []
    for p, e in factorize(q):
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            components.append(_Component(pe, pe - 1, 2, "sign"))
            generators.append((_crt_lift(pe - 1, pe, q), 2))
            if e >= 3:
                order = pe // 4
                components.append(_Component(pe, 5, order, "five"))
                generators.append((_crt_lift(5, pe, q), order))
        else:
            g = _primitive_root(pe, p)
            order = pe - pe // p
            components.append(_Component(pe, g, order, "cyclic"))
            generators.append((_crt_lift(g, pe, q), order))
    return UnitGroupStructure(q, tuple(generators), tuple(components))


@dataclass(frozen=True)
class DirichletCharacter:
    q: int
    exponents: tuple

    @cached_property
    def structure(self):
        return unit_group_structure(self.q)

    @property
    def phi(self):
        return euler_phi(self.q)

    @property
    def id(self):
        return f"chi{self.q}({','.join(map(str, self.exponents))})"

    def is_trivial(self):
        return not any(self.exponents)

    def log_value(self, a):
        """Integer t with chi(a) = exp(2 pi i t / phi(q)), or None when gcd(a, q) > 1."""
        if math.gcd(a, self.q) != 1:
            return None
        phi = self.phi
        coords = self.structure.coordinates(a)
        t = 0
        for (_, order), e, c in zip(self.structure.generators, self.exponents, coords):
            t += e * c * (phi // order)
        return t % phi

    def value(self, a):
        t = self.log_value(a)
        if t is None:
            return CycloElt.rational(0, normalize_modulus(self.phi))
        return zeta_power(self.phi, t)

    __call__ = value

    @property
    def order(self):
        return math.lcm(*(o // math.gcd(e, o) for (_, o), e in zip(self.structure.generators, self.exponents)))

    def conj(self):
        return DirichletCharacter(
            self.q, tuple((-e) % o for (_, o), e in zip(self.structure.generators, self.exponents))
        )

    def parity(self):
        return "even" if self.log_value(self.q - 1) == 0 else "odd"

    def is_even(self):
        return self.parity() == "even"

    def is_odd(self):
        return self.parity() == "odd"

    def __repr__(self):
        return f"DirichletCharacter({self.id})"


def enumerate_characters(q):
    """All phi(q) characters mod q, trivial first, in lexicographic exponent order."""
    orders = [o for _, o in unit_group_structure(q).generators]
    return [DirichletCharacter(q, exps) for exps in itertools.product(*(range(o) for o in orders))]


def char_value(chi, a):
    return chi.value(a)


def parity(chi):
    return chi.parity()


def _as_exact(v):
    if isinstance(v, CycloElt):
        return v.rational_value() if v.is_rational() else v
    return Fraction(v)


class PeriodicFunction:
    """f : Z -> Qbar with period q; ``values[i]`` is f(i + 1) for i = 0..q-1."""

    def __init__(self, q, values, label=None):
        if q < 1 or len(values) != q:
            raise ValueError(f"need exactly q={q} values")
        self.q = q
        self.values = tuple(_as_exact(v) for v in values)
        self.label = label

    @classmethod
    def from_character(cls, chi):
        return cls(chi.q, [chi.value(a) for a in range(1, chi.q + 1)], label=chi.id)

    @classmethod
    def from_signs(cls, signs, label=None):
        """Erdosian function from the signs f(1..q-1); f(q) = 0."""
        signs = [int(s) for s in signs]
        if any(s not in (1, -1) for s in signs):
            raise ValueError("Erdosian signs must be +1 or -1")
        q = len(signs) + 1
        return cls(q, signs + [0], label=label or erdos_label(signs))

    def __call__(self, n):
        return self.values[(n - 1) % self.q]

    @property
    def id(self):
        return self.label or f"f{self.q}[{','.join(str(v) for v in self.values)}]"

    @cached_property
    def period_sum(self):
        return sum(self.values, Fraction(0))

    @property
    def dirichlet_type(self):
        return all(self(a) == 0 for a in range(1, self.q + 1) if math.gcd(a, self.q) != 1)

    @property
    def erdosian(self):
        return self(self.q) == 0 and all(self(a) in (1, -1) for a in range(1, self.q))

    def is_even(self):
        return all(self(a) == self(-a) for a in range(1, self.q + 1))

    def is_odd(self):
        return all(self(a) == -self(-a) for a in range(1, self.q + 1))

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def value_modulus(self):
        """Smallest common cyclotomic modulus holding every value."""
        return normalize_modulus(math.lcm(1, *(v.n for v in self.values if isinstance(v, CycloElt))))

    def __add__(self, other):
        if not isinstance(other, PeriodicFunction) or other.q != self.q:
            return NotImplemented
        return PeriodicFunction(self.q, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        if not isinstance(other, PeriodicFunction) or other.q != self.q:
            return NotImplemented
        return PeriodicFunction(self.q, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c):
        return PeriodicFunction(self.q, [c * v for v in self.values])

    def __eq__(self, other):
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        return self.q == other.q and all(a == b for a, b in zip(self.values, other.values))

    def __hash__(self):
        return hash((self.q, self.values))

    def __repr__(self):
        return f"PeriodicFunction({self.id})"


def erdos_label(signs):
    return f"erdos{len(signs) + 1}[{''.join('+' if s > 0 else '-' for s in signs)}]"


def decompose_parity(f):
    """Split f into its even and odd parts, f = f_e + f_o."""
    half = Fraction(1, 2)
    even = [(f(a) + f(-a)) * half for a in range(1, f.q + 1)]
    odd = [(f(a) - f(-a)) * half for a in range(1, f.q + 1)]
    return PeriodicFunction(f.q, even), PeriodicFunction(f.q, odd)


def character_expansion(f):
    """Coefficients c_chi with f = sum c_chi chi, for a Dirichlet-type f."""
    if not f.dirichlet_type:
        raise NotDirichletType(f"{f.id} does not vanish off the units mod {f.q}")
    q = f.q
    phi = euler_phi(q)
    units = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
    out = {}
    for chi in enumerate_characters(q):
        total = CycloElt.rational(0, normalize_modulus(phi))
        for a in units:
            v = f(a)
            if v != 0:
                total = total + zeta_power(phi, -chi.log_value(a)) * v
        out[chi] = total * Fraction(1, phi)
    return out


def reconstruct(coefficients, q):
    """Inverse of character_expansion: the function sum_chi c_chi chi."""
    values = []
    for a in range(1, q + 1):
        total = Fraction(0)
        for chi, c in coefficients.items():
            t = chi.log_value(a)
            if t is not None and c != 0:
                total = total + c * zeta_power(chi.phi, t)
        values.append(total)
    return PeriodicFunction(q, values)


def is_odd_prime(p):
    return p > 2 and p % 2 == 1 and all(p % d for d in range(3, math.isqrt(p) + 1, 2))


ERDOS_LIMIT = 31


def iter_erdosian(p, exclude_odd=False):
    if not is_odd_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if p > ERDOS_LIMIT:
        raise TooLarge(f"2^{p - 1} Erdosian functions mod {p} exceeds the p <= {ERDOS_LIMIT} guard")
    for signs in itertools.product((1, -1), repeat=p - 1):
        if exclude_odd and all(signs[a - 1] == -signs[p - a - 1] for a in range(1, p)):
            continue
        yield PeriodicFunction.from_signs(signs)


def erdos_enumerate(p, exclude_odd=False):
    """All Erdosian functions of period p (optionally without the odd ones)."""
    return list(iter_erdosian(p, exclude_odd))
