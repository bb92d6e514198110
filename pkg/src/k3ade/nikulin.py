"""Primitive embeddings of negative definite even lattices into the K3 lattice.

The K3 lattice is the even unimodular lattice of signature (3, 19). A
negative definite even lattice M of rank r, known through its discriminant
form q_M, embeds primitively when

1. r <= 19 and the length l(M) <= 22 - r, and
2. for every odd prime p with l(M_p) = 22 - r, the unit part of -|A_M|
   and the determinant of the p-part's Jordan splitting lie in the same
   square class of Z_p, and
3. if l(M_2) = 22 - r, either q_M splits off a Z/2 summand with
   q = +-1/2 (mod 2), or |A_M| = +-det(q_{M_2}) modulo 2-adic unit squares.

When l(M) <= 21 - r the conditions on the primes are vacuous and the
embedding exists outright.

Square classes are compared on unit parts only: for odd p through the
Legendre symbol, for p = 2 as odd residues mod 8. The powers of p on both
sides always agree because |A_{M_p}| is exactly the p-part of |A_M|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fqf import (
    FiniteQuadraticForm,
    _legendre,
    _valuation,
    has_odd_order_two_summand,
    square_class_discriminant,
)

__all__ = [
    "EmbeddingTarget",
    "K3_LATTICE",
    "EmbeddingVerdict",
    "PreconditionResult",
    "BoundaryContractError",
    "length_precondition",
    "embeds_by_corollary",
    "boundary_primes",
    "boundary_test",
    "embedding_verdict",
]


@dataclass(frozen=True)
class EmbeddingTarget:
    rank: int = 22
    signature: tuple[int, int] = (3, 19)

    @property
    def max_rank(self) -> int:
        """Largest rank of a negative definite lattice that can embed primitively."""
        return self.signature[1]


K3_LATTICE = EmbeddingTarget()


class BoundaryContractError(ValueError):
    """boundary_test was called on a lattice that is not on the boundary."""


EMBEDS_BY_COROLLARY = "EmbedsByCorollary"
EMBEDS_BOUNDARY = "EmbedsBoundary"
FAILS_RANK = "FailsRank"
FAILS_LENGTH = "FailsLength"
FAILS_ODD_PRIME = "FailsOddPrime"
FAILS_TWO_ADIC = "FailsTwoAdic"


@dataclass(frozen=True)
class EmbeddingVerdict:
    """Outcome of the embedding test.

    ``kind`` is one of EmbedsByCorollary, EmbedsBoundary, FailsRank,
    FailsLength, FailsOddPrime, FailsTwoAdic. ``primes`` lists the boundary
    primes that were checked, ``prime`` names the failing one. For p = 2,
    ``two_adic`` records which rule settled it: ``"split+1/2"`` or
    ``"split+3/2"`` when a Z/2 summand with that q-value was split off,
    ``"square-class"`` when the determinant identity was used.
    """

    kind: str
    primes: tuple[int, ...] = ()
    prime: int | None = None
    two_adic: str | None = None
    detail: str = field(default="", compare=False)

    @property
    def embeds(self) -> bool:
        return self.kind in (EMBEDS_BY_COROLLARY, EMBEDS_BOUNDARY)

    def __bool__(self) -> bool:
        return self.embeds

    def __str__(self) -> str:
        if self.kind == EMBEDS_BOUNDARY:
            return f"{self.kind}({','.join(map(str, self.primes))})"
        if self.kind == FAILS_ODD_PRIME:
            return f"{self.kind}({self.prime})"
        return self.kind


@dataclass(frozen=True)
class PreconditionResult:
    passed: bool
    verdict: EmbeddingVerdict | None = None

    def __bool__(self) -> bool:
        return self.passed


def _check_rank(rank: int) -> None:
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 0:
        raise ValueError(f"rank must be a non-negative int, got {rank!r}")


def length_precondition(rank: int, form: FiniteQuadraticForm) -> PreconditionResult:
    _check_rank(rank)
    if rank > K3_LATTICE.max_rank:
        return PreconditionResult(False, EmbeddingVerdict(FAILS_RANK, detail=f"rank {rank} > 19"))
    ell = form.length
    if ell > 22 - rank:
        return PreconditionResult(
            False, EmbeddingVerdict(FAILS_LENGTH, detail=f"length {ell} > {22 - rank}")
        )
    return PreconditionResult(True)


def embeds_by_corollary(rank: int, form: FiniteQuadraticForm) -> bool:
    _check_rank(rank)
    return rank <= K3_LATTICE.max_rank and form.length <= 21 - rank


def boundary_primes(rank: int, form: FiniteQuadraticForm) -> list[int]:
    """Primes p whose p-part has length exactly 22 - rank."""
    prof = form.length_profile()
    return sorted(p for p, ell in prof.per_prime.items() if ell == 22 - rank)


def _unit_part(n: int, p: int) -> int:
    return n // p ** _valuation(n, p)


def _odd_prime_ok(form: FiniteQuadraticForm, p: int) -> bool:
    lhs = _legendre(_unit_part(-form.order, p), p)
    return lhs == square_class_discriminant(form, p)


def _two_adic_rule(form: FiniteQuadraticForm) -> str | None:
    """Name of the rule that lets the 2-part pass, or None."""
    part = form.p_primary_part(2)
    split = has_odd_order_two_summand(part)
    if split is not None:
        return "split+1/2" if split == Fraction(1, 2) else "split+3/2"
    u = _unit_part(form.order, 2) % 8
    d = square_class_discriminant(part, 2)
    if u == d or u == (-d) % 8:
        return "square-class"
    return None


def boundary_test(rank: int, form: FiniteQuadraticForm) -> EmbeddingVerdict:
    """Decide the boundary case l(M_p) = 22 - rank for some prime p."""
    _check_rank(rank)
    if rank > K3_LATTICE.max_rank or form.length > 22 - rank:
        raise BoundaryContractError("lattice fails the length precondition")
    primes = boundary_primes(rank, form)
    if not primes:
        raise BoundaryContractError("no prime has length 22 - rank")
    two_adic = None
    for p in primes:
        if p == 2:
            two_adic = _two_adic_rule(form)
            if two_adic is None:
                return EmbeddingVerdict(FAILS_TWO_ADIC, tuple(primes), prime=2)
        elif not _odd_prime_ok(form, p):
            return EmbeddingVerdict(FAILS_ODD_PRIME, tuple(primes), prime=p)
    return EmbeddingVerdict(EMBEDS_BOUNDARY, tuple(primes), two_adic=two_adic)


def embedding_verdict(rank: int, form: FiniteQuadraticForm) -> EmbeddingVerdict:
    pre = length_precondition(rank, form)
    if not pre:
        return pre.verdict
    if embeds_by_corollary(rank, form):
        return EmbeddingVerdict(EMBEDS_BY_COROLLARY)
    return boundary_test(rank, form)
