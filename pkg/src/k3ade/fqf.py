"""Finite quadratic forms (discriminant forms) with exact rational arithmetic.

A :class:`FiniteQuadraticForm` is the group ``Z/d_1 + ... + Z/d_k`` (the
standard generators are independent by construction) together with a
quadratic form ``q`` valued in Q/2Z and its bilinear form ``b`` valued in
Q/Z. Elements are integer vectors of length ``k``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from . import intlin
from .lattice import AdeConfiguration, AdeType

__all__ = [
    "FiniteQuadraticForm",
    "LengthProfile",
    "JordanBlock",
    "NonIsotropicError",
    "DegenerateFormError",
    "ade_discriminant_form",
    "summand_discriminant_form",
    "length_profile",
    "isotropic_quotient",
    "p_primary_part",
    "square_class_discriminant",
    "gauss_sum_signature",
    "jordan_blocks",
]

Vector = Sequence[int]


class NonIsotropicError(ValueError):
    """Raised when a subgroup passed to a quotient is not isotropic."""


class DegenerateFormError(ValueError):
    pass


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * math.floor(x / 2)


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _factor(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in factorint(n).items()}


@dataclass(frozen=True)
class LengthProfile:
    total_length: int
    per_prime: dict[int, int]

    def at(self, p: int) -> int:
        return self.per_prime.get(p, 0)


@dataclass(frozen=True)
class JordanBlock:
    """One block of a Jordan splitting of a p-primary form.

    ``size`` is 1 (cyclic) or 2 (even 2x2 block, only for p = 2); ``scale``
    is the exponent k of the block's order p**k; ``unit`` is the unit part of
    the determinant of the block's value matrix, as an integer residue
    (mod p for odd p, mod 8 for p = 2).
    """

    p: int
    scale: int
    size: int
    unit: int
    odd: bool


class FiniteQuadraticForm:
    """Quadratic form on a finite abelian group given by independent generators."""

    __slots__ = ("orders", "q_values", "pairing", "__dict__")

    def __init__(
        self,
        orders: Sequence[int],
        q_values: Sequence[Fraction | int],
        pairing: Sequence[Sequence[Fraction | int]] | None = None,
        *,
        check: bool = True,
    ):
        k = len(orders)
        if len(q_values) != k:
            raise ValueError("need one q-value per generator")
        self.orders = tuple(int(d) for d in orders)
        self.q_values = tuple(_mod2(Fraction(v)) for v in q_values)
        if pairing is None:
            pairing = [[Fraction(0)] * k for _ in range(k)]
            for i, v in enumerate(self.q_values):
                pairing[i][i] = v
        self.pairing = tuple(tuple(_mod1(Fraction(v)) for v in row) for row in pairing)
        if check:
            self.check()

    def check(self) -> None:
        k = len(self.orders)
        if any(d < 1 for d in self.orders):
            raise ValueError("generator orders must be positive")
        for i in range(k):
            if len(self.pairing[i]) != k:
                raise ValueError("pairing must be square")
            if self.pairing[i][i] != _mod1(self.q_values[i]):
                raise ValueError("b(x, x) must equal q(x) mod 1")
            if _mod2(self.orders[i] ** 2 * self.q_values[i]) != 0:
                raise ValueError("q(ord(x) x) must vanish")
            for j in range(k):
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise ValueError("pairing must be symmetric")
                if _mod1(self.orders[i] * self.pairing[i][j]) != 0:
                    raise ValueError("ord(x) b(x, y) must be integral")

    # -- basic structure -------------------------------------------------

    def __repr__(self) -> str:
        return f"FiniteQuadraticForm(orders={list(self.orders)}, q={[str(v) for v in self.q_values]})"

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @cached_property
    def order(self) -> int:
        return math.prod(self.orders)

    def is_trivial(self) -> bool:
        return self.order == 1

    def q(self, x: Vector) -> Fraction:
        total = Fraction(0)
        k = self.ngens
        for i in range(k):
            xi = x[i]
            if not xi:
                continue
            total += xi * xi * self.q_values[i]
            row = self.pairing[i]
            for j in range(i + 1, k):
                if x[j]:
                    total += 2 * xi * x[j] * row[j]
        return _mod2(total)

    def b(self, x: Vector, y: Vector) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.pairing[i]
            for j, yj in enumerate(y):
                if yj:
                    total += xi * yj * row[j]
        return _mod1(total)

    def reduce(self, x: Vector) -> tuple[int, ...]:
        return tuple(int(v) % d for v, d in zip(x, self.orders))

    def element_order(self, x: Vector) -> int:
        out = 1
        for v, d in zip(x, self.orders):
            v %= d
            if v:
                out = intlin.lcm(out, d // math.gcd(v, d))
        return out

    def elements(self) -> Iterable[tuple[int, ...]]:
        return product(*(range(d) for d in self.orders))

    def direct_sum(self, other: "FiniteQuadraticForm") -> "FiniteQuadraticForm":
        k, m = self.ngens, other.ngens
        pairing = [[Fraction(0)] * (k + m) for _ in range(k + m)]
        for i in range(k):
            for j in range(k):
                pairing[i][j] = self.pairing[i][j]
        for i in range(m):
            for j in range(m):
                pairing[k + i][k + j] = other.pairing[i][j]
        return FiniteQuadraticForm(
            self.orders + other.orders, self.q_values + other.q_values, pairing, check=False
        )

    __add__ = direct_sum

    def with_generators(self, gens: Sequence[Vector], orders: Sequence[int]) -> "FiniteQuadraticForm":
        """Form on the subgroup spanned by independent ``gens`` of given orders."""
        qs = [self.q(g) for g in gens]
        pairing = [[self.b(g, h) for h in gens] for g in gens]
        return FiniteQuadraticForm(orders, qs, pairing, check=False)

    def permuted(self, perm: Sequence[int]) -> "FiniteQuadraticForm":
        """Same form with generators listed in the order ``perm``."""
        return FiniteQuadraticForm(
            [self.orders[i] for i in perm],
            [self.q_values[i] for i in perm],
            [[self.pairing[i][j] for j in perm] for i in perm],
            check=False,
        )

    def is_nondegenerate(self) -> bool:
        if self.is_trivial():
            return True
        gens = [[int(i == j) for j in range(self.ngens)] for i in range(self.ngens)]
        radical = self._subquotient(self._perp_lattice(gens), self._diag_rows())
        return not radical[0]

    # -- lattice-level machinery -------------------------------------------

    def _diag_rows(self) -> intlin.Matrix:
        k = self.ngens
        return [[self.orders[i] * int(i == j) for j in range(k)] for i in range(k)]

    def _span_lattice(self, gens: Sequence[Vector]) -> intlin.Matrix:
        rows = [list(map(int, g)) for g in gens] + self._diag_rows()
        return intlin.lattice_basis(rows, self.ngens)

    def _perp_lattice(self, gens: Sequence[Vector]) -> intlin.Matrix:
        k = self.ngens
        cols = [[self.b([int(i == j) for j in range(k)], h) for i in range(k)] for h in gens]
        den = intlin.lcm(*(v.denominator for row in cols for v in row)) if cols else 1
        m = [[int(v * den) for v in row] for row in cols]
        return intlin.kernel_mod(m, den, k)

    def _subquotient(self, big: intlin.Matrix, small: intlin.Matrix) -> tuple[list[int], intlin.Matrix]:
        return intlin.quotient_structure(big, small)

    def subgroup(self, gens: Sequence[Vector]) -> tuple["FiniteQuadraticForm", list[list[int]]]:
        """Restriction to the subgroup generated by ``gens``.

        Returns the restricted form (with normalized independent generators)
        and those generators as vectors in this form's coordinates.
        """
        if self.ngens == 0:
            return self, []
        orders, new = self._subquotient(self._span_lattice(gens), self._diag_rows())
        new = [list(self.reduce(g)) for g in new]
        return self.with_generators(new, orders), new

    def normalized(self) -> "FiniteQuadraticForm":
        gens = [[int(i == j) for j in range(self.ngens)] for i in range(self.ngens)]
        return self.subgroup(gens)[0]

    def orthogonal_complement(self, gens: Sequence[Vector]) -> tuple["FiniteQuadraticForm", list[list[int]]]:
        if self.ngens == 0:
            return self, []
        orders, new = self._subquotient(self._perp_lattice(gens), self._diag_rows())
        new = [list(self.reduce(g)) for g in new]
        return self.with_generators(new, orders), new

    def isotropic_quotient(self, gens: Sequence[Vector]) -> "FiniteQuadraticForm":
        """The induced form on ``H^perp / H`` for the isotropic subgroup ``H = <gens>``."""
        gens = [list(map(int, g)) for g in gens]
        for i, g in enumerate(gens):
            if len(g) != self.ngens:
                raise ValueError("glue element has wrong length")
            if self.q(g) != 0:
                raise NonIsotropicError(f"q(h) = {self.q(g)} is not 0 mod 2 for h = {g}")
            for h in gens[i + 1:]:
                if self.b(g, h) != 0:
                    raise NonIsotropicError("subgroup is not isotropic")
        if not gens or all(not any(self.reduce(g)) for g in gens):
            return self
        big = self._perp_lattice(gens)
        small = self._span_lattice(gens)
        orders, new = self._subquotient(big, small)
        new = [list(self.reduce(g)) for g in new]
        return self.with_generators(new, orders)

    # -- invariants ------------------------------------------------------

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant factors d_1 | d_2 | ... (trivial ones dropped)."""
        out = []
        by_prime: dict[int, list[int]] = {}
        for d in self.orders:
            for p, e in _factor(d).items():
                by_prime.setdefault(p, []).append(p**e)
        length = max((len(v) for v in by_prime.values()), default=0)
        for v in by_prime.values():
            v.sort(reverse=True)
        for i in range(length):
            out.append(math.prod(v[i] for v in by_prime.values() if i < len(v)))
        return tuple(sorted(out))

    def length_profile(self) -> LengthProfile:
        per_prime: dict[int, int] = {}
        for d in self.orders:
            for p in _factor(d):
                per_prime[p] = per_prime.get(p, 0) + 1
        per_prime = dict(sorted(per_prime.items()))
        return LengthProfile(max(per_prime.values(), default=0), per_prime)

    @property
    def length(self) -> int:
        return self.length_profile().total_length

    def primes(self) -> list[int]:
        return sorted(_factor(self.order))

    def p_primary_part(self, p: int) -> "FiniteQuadraticForm":
        gens, orders = [], []
        k = self.ngens
        for i, d in enumerate(self.orders):
            e = _factor(d).get(p, 0)
            if e:
                pe = p**e
                gens.append([(d // pe) * int(i == j) for j in range(k)])
                orders.append(pe)
        return self.with_generators(gens, orders)

    def exponent(self) -> int:
        return intlin.lcm(*self.orders) if self.orders else 1


# -- ADE data ----------------------------------------------------------------


def summand_discriminant_form(t: AdeType) -> FiniteQuadraticForm:
    """Discriminant form of a single ADE root lattice."""
    n = t.index
    if t.family == "A":
        return FiniteQuadraticForm([n + 1], [Fraction(-n, n + 1)])
    if t.family == "D":
        if n % 2:
            return FiniteQuadraticForm([4], [Fraction(-n, 4)])
        m = n // 2
        half = Fraction(-1, 2)
        return FiniteQuadraticForm(
            [2, 2], [Fraction(-m, 2), Fraction(-1)], [[Fraction(-m, 2), half], [half, Fraction(-1)]]
        )
    if n == 8:
        return FiniteQuadraticForm([], [])
    if n == 7:
        return FiniteQuadraticForm([2], [Fraction(-3, 2)])
    return FiniteQuadraticForm([3], [Fraction(-4, 3)])


def ade_discriminant_form(config: AdeConfiguration) -> FiniteQuadraticForm:
    """Orthogonal sum of the summands' discriminant forms (canonical order)."""
    out = FiniteQuadraticForm([], [])
    for t in config.summands:
        out = out + summand_discriminant_form(t)
    return out


def length_profile(form: FiniteQuadraticForm) -> LengthProfile:
    return form.length_profile()


def isotropic_quotient(form: FiniteQuadraticForm, gens: Sequence[Vector]) -> FiniteQuadraticForm:
    return form.isotropic_quotient(gens)


def p_primary_part(form: FiniteQuadraticForm, p: int) -> FiniteQuadraticForm:
    return form.p_primary_part(p)


# -- Jordan splitting and square classes ---------------------------------------


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("not a unit")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _negative_lift(v: Fraction) -> Fraction:
    """Representative of v mod 2 in (-2, 0]."""
    v = _mod2(v)
    return v - 2 if v else v


def jordan_blocks(form: FiniteQuadraticForm, p: int) -> list[JordanBlock]:
    """Split the p-primary part orthogonally into cyclic and 2x2 blocks.

    Blocks of the highest remaining scale are split off first. For p = 2 a
    cyclic block is only used when some generator of maximal order has odd
    type; otherwise a 2x2 even block is split off.
    """
    cur = form.p_primary_part(p)
    blocks: list[JordanBlock] = []
    while cur.ngens:
        cur = cur.normalized()
        if not cur.ngens:
            break
        top = max(cur.orders)
        k = _valuation(top, p)
        idx = [i for i, d in enumerate(cur.orders) if d == top]
        unit_vec = None
        for i in idx:
            if (cur.pairing[i][i] * top).denominator == 1 and (cur.pairing[i][i] * top) % p:
                unit_vec = [int(i == j) for j in range(cur.ngens)]
                break
        if unit_vec is None and p != 2:
            for a in idx:
                for c in idx:
                    if c <= a:
                        continue
                    v = [int(j in (a, c)) for j in range(cur.ngens)]
                    if (cur.b(v, v) * top) % p:
                        unit_vec = v
                        break
                if unit_vec is not None:
                    break
        if unit_vec is not None:
            val = _negative_lift(cur.q(unit_vec)) if p == 2 else cur.q(unit_vec)
            num = val * top
            if num.denominator != 1:
                raise DegenerateFormError("unexpected denominator in Jordan block")
            num = int(num)
            unit = num % 8 if p == 2 else num % p
            blocks.append(JordanBlock(p, k, 1, unit, odd=True))
            cur = cur.orthogonal_complement([unit_vec])[0]
            continue
        if p != 2:
            raise DegenerateFormError(f"form is degenerate at p={p}")
        pair = None
        for a in idx:
            for c in idx:
                if c > a and (cur.pairing[a][c] * top) % 2:
                    pair = (a, c)
                    break
            if pair:
                break
        if pair is None:
            raise DegenerateFormError("form is degenerate at p=2")
        x = [int(j == pair[0]) for j in range(cur.ngens)]
        y = [int(j == pair[1]) for j in range(cur.ngens)]
        alpha = cur.q(x) * top / 2
        beta = cur.q(y) * top / 2
        if alpha.denominator != 1 or beta.denominator != 1:
            raise DegenerateFormError("2x2 block is not of even type")
        unit = 3 if (int(alpha) * int(beta)) % 2 else 7
        blocks.append(JordanBlock(2, k, 2, unit, odd=False))
        cur = cur.orthogonal_complement([x, y])[0]
    return blocks


def square_class_discriminant(form: FiniteQuadraticForm, p: int) -> int:
    """Unit square class of the determinant of the p-part's Jordan splitting.

    For odd p returns the Legendre symbol (+1 or -1) of the unit part; for
    p = 2 returns the unit part as an odd residue mod 8. A trivial p-part
    gives the class of 1. Cyclic blocks of order 2 only determine their unit
    mod 4; the value of the representative in (-2, 0] is used for them.
    """
    blocks = jordan_blocks(form, p)
    if p == 2:
        out = 1
        for b in blocks:
            out = (out * b.unit) % 8
        return out
    out = 1
    for b in blocks:
        out *= _legendre(b.unit, p)
    return out


def has_odd_order_two_summand(form: FiniteQuadraticForm) -> Fraction | None:
    """q-value of an orthogonal Z/2 summand with q = +-1/2 (mod 2), if any.

    Returns 1/2 or 3/2 (the q-value of the summand that was found) or None.
    """
    for b in jordan_blocks(form, 2):
        if b.scale == 1 and b.size == 1:
            return _mod2(Fraction(b.unit - 8, 2))
    return None


# -- Gauss sums --------------------------------------------------------------


def _q_value_counts(form: FiniteQuadraticForm) -> tuple[int, dict[int, int]]:
    """Histogram of 2N q(x) mod 2N over all x, with N the common denominator."""
    den = intlin.lcm(*(v.denominator for v in form.q_values), *(v.denominator for r in form.pairing for v in r))
    mod = 2 * den
    qs = [int(v * den) for v in form.q_values]
    bs = [[int(v * den) for v in r] for r in form.pairing]
    k = form.ngens
    if k == 0:
        return den, {0: 1}
    grids = np.meshgrid(*(np.arange(d, dtype=np.int64) for d in form.orders), indexing="ij")
    xs = [g.ravel() for g in grids]
    acc = np.zeros(xs[0].shape, dtype=np.int64)
    for i in range(k):
        acc = (acc + (xs[i] * xs[i] % mod) * qs[i]) % mod
        for j in range(i + 1, k):
            if bs[i][j]:
                acc = (acc + (2 * xs[i] * xs[j] % mod) * bs[i][j]) % mod
    vals, counts = np.unique(acc, return_counts=True)
    return den, {int(v): int(c) for v, c in zip(vals, counts)}


GAUSS_LIMIT = 10**6


def gauss_sum(form: FiniteQuadraticForm) -> complex:
    """Normalised Gauss sum  sum_x exp(pi i q(x)) / sqrt(|A|)."""
    if form.order > GAUSS_LIMIT:
        raise ValueError("Gauss sums are only evaluated for |A| <= 10**6")
    total_re, total_im = [], []
    den, counts = _q_value_counts(form)
    for v, c in counts.items():
        ang = math.pi * v / den
        total_re.append(c * math.cos(ang))
        total_im.append(c * math.sin(ang))
    return complex(math.fsum(total_re), math.fsum(total_im)) / math.sqrt(form.order)


def gauss_sum_signature(form: FiniteQuadraticForm, tol: float = 1e-6) -> int:
    """Signature mod 8 read off the phase of the Gauss sum (Milgram)."""
    total = complex(1, 0)
    # the sum is multiplicative over the orthogonal p-primary parts
    for p in form.primes():
        total *= gauss_sum(form.p_primary_part(p))
    if abs(abs(total) - 1) > tol:
        raise DegenerateFormError(f"Gauss sum has modulus {abs(total)}, form is degenerate")
    phase = cmath.phase(total)
    sig = round(phase * 4 / math.pi)
    if abs(phase - sig * math.pi / 4) > tol:
        raise DegenerateFormError("Gauss sum phase is not a multiple of pi/4")
    return sig % 8
