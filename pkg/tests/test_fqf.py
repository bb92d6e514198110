from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3ade.fqf import (
    DegenerateFormError,
    FiniteQuadraticForm,
    NonIsotropicError,
    ade_discriminant_form,
    gauss_sum_signature,
    has_odd_order_two_summand,
    jordan_blocks,
    square_class_discriminant,
    summand_discriminant_form,
)
from k3ade.lattice import AdeConfiguration, ade_types, enumerate_configurations, gram_matrix
from oracles import coset_minima, odd_nonunimodular_part, two_adic_nonunimodular_part

CONFIGS = enumerate_configurations(19)


def _mod2(x):
    return x - 2 * (x // 2)


@pytest.mark.parametrize("t", ade_types(10), ids=str)
def test_summand_form_matches_gram(t):
    """q-values over the whole group agree with -(coset norm) from the Gram matrix."""
    form = summand_discriminant_form(t)
    G = gram_matrix(AdeConfiguration((t,))).tolist()
    bound = max(3.0, t.index / 4 + 0.5, (t.index + 1) / 4 + 0.5)
    minima = coset_minima(G, bound)
    assert len(minima) == form.order
    from_gram = Counter(_mod2(-m) for m in minima.values())
    from_form = Counter(form.q(x) for x in form.elements())
    assert from_gram == from_form


@pytest.mark.parametrize(
    "name,orders,qs",
    [
        ("A1", (2,), [Fraction(3, 2)]),
        ("A4", (5,), [Fraction(6, 5)]),
        ("D5", (4,), [Fraction(3, 4)]),
        ("E6", (3,), [Fraction(2, 3)]),
        ("E7", (2,), [Fraction(1, 2)]),
        ("E8", (), []),
    ],
)
def test_summand_forms(name, orders, qs):
    f = ade_discriminant_form(AdeConfiguration.parse(name))
    assert f.orders == orders
    assert list(f.q_values) == qs


def test_d_even_form():
    f = ade_discriminant_form(AdeConfiguration.parse("D6"))
    assert f.orders == (2, 2)
    # -m/2 and -1 with m = 3, cross term -1/2
    assert f.q_values == (Fraction(1, 2), Fraction(1))
    assert f.pairing[0][1] == Fraction(1, 2)


def test_milgram_small():
    for name in ["A1", "A2^9", "D4^4+A1^3", "E6+A4+A2^3+A1^3", "A1^16"]:
        c = AdeConfiguration.parse(name)
        assert gauss_sum_signature(ade_discriminant_form(c)) == (-c.rank) % 8


def test_degenerate_form_detected():
    # Z/2 with trivial form is degenerate
    with pytest.raises(DegenerateFormError):
        gauss_sum_signature(FiniteQuadraticForm([2], [0]))


def test_isotropic_quotient_nikulin():
    f = ade_discriminant_form(AdeConfiguration.parse("A1^8"))
    g = f.isotropic_quotient([[1] * 8])
    assert g.order * 4 == f.order
    assert g.length == 6


def test_non_isotropic_rejected():
    f = ade_discriminant_form(AdeConfiguration.parse("A1^4"))
    with pytest.raises(NonIsotropicError):
        f.isotropic_quotient([[1, 1, 0, 0]])


def test_length_profile():
    f = ade_discriminant_form(AdeConfiguration.parse("A1^3+A2^2+A5"))
    prof = f.length_profile()
    assert prof.at(2) == 4 and prof.at(3) == 3 and prof.total_length == 4


def test_two_adic_split():
    f = ade_discriminant_form(AdeConfiguration.parse("A1"))
    assert has_odd_order_two_summand(f) == Fraction(3, 2)
    f = ade_discriminant_form(AdeConfiguration.parse("E7"))
    assert has_odd_order_two_summand(f) == Fraction(1, 2)
    assert has_odd_order_two_summand(ade_discriminant_form(AdeConfiguration.parse("D4"))) is None


config_strategy = st.sampled_from(CONFIGS)


@given(config_strategy)
def test_odd_square_class_matches_gram(c):
    f = ade_discriminant_form(c)
    G = gram_matrix(c).tolist()
    for p in f.primes():
        if p == 2:
            continue
        ell, leg = odd_nonunimodular_part(G, p)
        assert ell == f.length_profile().at(p)
        assert leg == square_class_discriminant(f, p)


@given(config_strategy)
def test_two_adic_blocks_match_gram(c):
    f = ade_discriminant_form(c)
    if 2 not in f.primes():
        return
    blocks = two_adic_nonunimodular_part(gram_matrix(c).tolist())
    assert sum(s for _, s, _ in blocks) == f.length_profile().at(2)
    split_gram = any(v == 1 and s == 1 for v, s, _ in blocks)
    assert split_gram == (has_odd_order_two_summand(f) is not None)
    if not split_gram:
        d = 1
        for _, _, u in blocks:
            d = d * u % 8
        assert d == square_class_discriminant(f, 2)


@given(config_strategy)
def test_jordan_blocks_cover_p_parts(c):
    f = ade_discriminant_form(c)
    for p in f.primes():
        blocks = jordan_blocks(f, p)
        size = 1
        for b in blocks:
            size *= (p**b.scale) ** b.size
        assert size == f.p_primary_part(p).order
