import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3ade.fqf import ade_discriminant_form
from k3ade.glue import (
    GlueElement,
    NotAdmissibleError,
    SearchIncomplete,
    admissible_elements,
    class_order,
    class_q,
    contains_class,
    glue_element,
    is_admissible,
    min_coset_norm,
    orbit_size,
    overlattice_candidates,
    search_isotropic_subgroups,
    subgroup_from_generators,
)
from k3ade.lattice import AdeConfiguration, ade_types, enumerate_configurations, gram_matrix
from oracles import coset_minima

SMALL = [c for c in enumerate_configurations(12) if c.rank <= 12]


@pytest.mark.parametrize("t", ade_types(8), ids=str)
def test_coset_minima_against_shortest_vectors(t):
    """Closed-form coset minima equal exhaustive shortest dual vectors, class by class."""
    G = gram_matrix(AdeConfiguration((t,))).tolist()
    minima = coset_minima(G, 3.0)
    assert len(minima) == t.discriminant_order
    oracle = Counter()
    for key, norm in minima.items():
        order = math.lcm(*(x.denominator for x in key))
        oracle[(order, norm)] += 1
    closed = Counter(
        (class_order(t, c), min_coset_norm(t, c)) for c in range(t.discriminant_order)
    )
    assert oracle == closed


@pytest.mark.parametrize("t", ade_types(19), ids=str)
def test_class_q_is_minus_norm(t):
    for c in range(t.discriminant_order):
        q = class_q(t, c)
        assert 0 <= q < 2
        assert (q + min_coset_norm(t, c)) % 2 == 0


def test_glue_element_basics():
    e = glue_element("A1^8", [1] * 8)
    assert e.order == 2 and e.min_coset_norm == 4 and e.q_value == 0
    assert is_admissible(e)
    assert not is_admissible(glue_element("A1^4", [1] * 4))  # norm 2 is a root
    assert str(e) == "(1,1,1,1,1,1,1,1)"
    with pytest.raises(ValueError):
        glue_element("A1^2", [2, 0])


def test_order_bound():
    # order 9 class in A8 has norm 20/9; combined elements of order > 8 are never admissible
    c = AdeConfiguration.parse("A8^2")
    assert all(e.order <= 8 for e, _ in admissible_elements(c))


def test_admissible_elements_nikulin():
    assert admissible_elements("A1^7") == []
    elems = admissible_elements("A1^8")
    assert len(elems) == 1 and elems[0][1] == 1


def test_search_a1_8():
    res = search_isotropic_subgroups("A1^8")
    assert [h.describe() for h in res.subgroups] == ["trivial", "Z/2"]
    assert res.subgroups[1].maximal


def test_search_a1_16_maximal():
    res = search_isotropic_subgroups("A1^16")
    top = max(res.subgroups, key=lambda h: h.order)
    assert top.order == 32 and top.maximal


def test_budget_overflow():
    with pytest.raises(SearchIncomplete):
        search_isotropic_subgroups("A1^12", budget=5)


def test_from_generators_checks_admissibility():
    with pytest.raises(NotAdmissibleError):
        subgroup_from_generators("A1^4", [[1, 1, 1, 1]])


def test_contains_class_up_to_symmetry():
    res = search_isotropic_subgroups("A1^9")
    h = subgroup_from_generators("A1^9", [[0, 1, 1, 1, 1, 1, 1, 1, 1]])
    assert contains_class(res, h)
    assert orbit_size(h) == 9


config_strategy = st.sampled_from(SMALL)


@given(config_strategy)
def test_subgroups_are_isotropic_and_admissible(c):
    form = ade_discriminant_form(c)
    for h in search_isotropic_subgroups(c).subgroups:
        gens = h.fqf_generators()
        for i, g in enumerate(gens):
            assert form.q(g) == 0
            for k in gens[i:]:
                assert form.b(g, k) == 0
        for e in h.elements:
            assert is_admissible(e)
        assert h.order == math.prod(h.invariants)


@given(config_strategy)
def test_index_formula(c):
    """|A'| * |H|^2 = |A| for every overlattice candidate."""
    order = ade_discriminant_form(c).order
    for cand in overlattice_candidates(c):
        assert cand.induced_form.order * cand.index**2 == order


@given(st.sampled_from([c for c in SMALL if c.rank <= 9]))
def test_symmetry_off_equivalence_sample(c):
    on = search_isotropic_subgroups(c)
    off = search_isotropic_subgroups(c, symmetry=False)
    assert sum(orbit_size(h) for h in on.subgroups) == len(off.subgroups)
    for h in off.subgroups:
        assert contains_class(on, h)


def test_candidates_trivial_first():
    cands = overlattice_candidates("A2^6")
    assert cands[0].is_trivial and cands[0].index == 1
    assert [c.index for c in cands] == [1, 3]
