import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3ade.fqf import ade_discriminant_form
from k3ade.lattice import AdeConfiguration, enumerate_configurations, gram_matrix
from k3ade.nikulin import (
    BoundaryContractError,
    K3_LATTICE,
    boundary_primes,
    boundary_test,
    embedding_verdict,
    embeds_by_corollary,
    length_precondition,
)
from oracles import gram_embedding_test


def _form(name):
    c = AdeConfiguration.parse(name)
    return c.rank, ade_discriminant_form(c)


def test_target():
    assert K3_LATTICE.rank == 22 and K3_LATTICE.max_rank == 19


@pytest.mark.parametrize(
    "name,kind",
    [
        ("A1", "EmbedsByCorollary"),
        ("A1^13", "FailsLength"),
        ("A1^4+A2^3+A4^2", "EmbedsBoundary(2)"),
        ("A1+A2^3+A4^2+D4", "EmbedsBoundary(2,3)"),
        ("A1^3+A2^2+A4^3", "FailsOddPrime(5)"),
        ("A1^2+A2^3+A3+A4^2", "FailsOddPrime(3)"),
        ("A15+D4", "FailsTwoAdic"),
        ("A1^5+A2^3+A4^2", "FailsLength"),
        ("A1+A2^9", "FailsLength"),
    ],
)
def test_verdict_examples(name, kind):
    rank, f = _form(name)
    assert str(embedding_verdict(rank, f)) == kind


def test_rank_limit():
    _, f = _form("A1")
    assert embedding_verdict(20, f).kind == "FailsRank"
    with pytest.raises(ValueError):
        embedding_verdict(-1, f)


def test_length_precondition():
    rank, f = _form("A1^12")
    assert not length_precondition(rank, f)
    rank, f = _form("A1^11")
    assert length_precondition(rank, f)
    assert boundary_primes(rank, f) == [2]
    assert not embeds_by_corollary(rank, f)


def test_boundary_contract():
    rank, f = _form("A1")
    with pytest.raises(BoundaryContractError):
        boundary_test(rank, f)
    rank, f = _form("A1^13")
    with pytest.raises(BoundaryContractError):
        boundary_test(rank, f)


def test_failing_prime_recorded():
    rank, f = _form("A1^3+A2^2+A4^3")
    v = embedding_verdict(rank, f)
    assert not v and v.prime == 5 and v.primes == (2, 5)


def test_two_adic_rule_recorded():
    rank, f = _form("A1^11")
    v = embedding_verdict(rank, f)
    assert v.embeds and v.two_adic == "split+3/2"


CONFIGS = enumerate_configurations(19)


@given(st.sampled_from(CONFIGS))
def test_trivial_verdict_matches_gram_oracle(c):
    """Verdict from the discriminant form equals the Gram-matrix p-adic test."""
    f = ade_discriminant_form(c)
    assert embedding_verdict(c.rank, f).embeds == gram_embedding_test(
        gram_matrix(c).tolist(), c.rank, f.order
    )


@pytest.mark.parametrize(
    "name",
    ["A1^3+A2^3+A4^2+A5", "A1^3+D4^4", "A1^2+A3^3+D4^2", "A2^4+A3^2+A5", "A1+A3^6", "E8^2+A3"],
)
def test_rank19_gram_oracle(name):
    c = AdeConfiguration.parse(name)
    f = ade_discriminant_form(c)
    assert embedding_verdict(c.rank, f).embeds == gram_embedding_test(
        gram_matrix(c).tolist(), c.rank, f.order
    )
