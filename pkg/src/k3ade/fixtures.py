"""Built-in reference fixtures and the runner behind ``verify-fixtures``.

Each fixture is a named check with a short description of what it pins
down. Checks return ``(ok, message)``; a budget overrun is reported as an
incomplete search rather than as a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .classify import (
    DEFAULT_REFERENCE,
    FUJIKI_LIST,
    IRREDUCIBLE,
    PRIMITIVE_ONLY,
    T_SET,
    a1_family_report,
    classify,
)
from .fqf import ade_discriminant_form
from .glue import (
    DEFAULT_BUDGET,
    SearchIncomplete,
    contains_class,
    overlattice_candidates,
    search_isotropic_subgroups,
    NotAdmissibleError,
    subgroup_from_generators,
)
from .lattice import AdeConfiguration
from .nikulin import embedding_verdict

# The thirteen rank-19 configurations containing the A5 configuration that do
# not embed; followed in the full list by the five members of T_SET.
RANK19_FAILING = (
    "A4^2+A2^3+A1^5",
    "A4^2+A2^4+A1^3",
    "A4^2+A3+A2^2+A1^4",
    "A5+A4+A2^3+A1^4",
    "D5+A4+A2^3+A1^4",
    "A4^2+A3+A2^3+A1^2",
    "A4^3+A2^2+A1^3",
    "A6+A4+A2^3+A1^3",
    "E6+A4+A2^3+A1^3",
    "A5+A4^2+A2+A1^4",
    "A7+A4+A2^2+A1^4",
    "E7+A4+A2^2+A1^4",
    "A9+A2^3+A1^4",
)
RANK19_LIST = RANK19_FAILING + T_SET


class FixtureIncomplete(RuntimeError):
    """A fixture could not be decided because a search ran out of budget."""


def pattern(config: str, *blocks: tuple[str, list[int]]) -> tuple[int, ...]:
    """Components of a glue element given per summand type.

    ``pattern("A1^2+A3^4", ("A3", [1, 1, 1, 1]), ("A1", [1, 1]))`` places the
    classes in canonical summand order; types not mentioned get zeros.
    """
    c = AdeConfiguration.parse(config)
    given = {}
    for name, classes in blocks:
        t = AdeConfiguration.parse(name).summands[0]
        if len(classes) != c.count(t.family, t.index):
            raise ValueError(f"{name} needs {c.count(t.family, t.index)} classes in {config}")
        given[t] = list(classes)
    comps = []
    for t in c.summands:
        comps.append(given[t].pop(0) if t in given else 0)
    return tuple(comps)


def _ones(n: int, support) -> list[int]:
    return [1 if i + 1 in support else 0 for i in range(n)]


@dataclass(frozen=True)
class OverlatticeRow:
    """A divisible-class pattern: the lattice, the glue group and its generators."""

    config: str
    group: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]


def _a1_row(k: int, supports) -> OverlatticeRow:
    cfg = f"A1^{k}"
    gens = tuple(pattern(cfg, ("A1", _ones(k, s))) for s in supports)
    return OverlatticeRow(cfg, (2,) * len(supports), gens)


_W1 = range(1, 9)
_W2 = [1, 2, 3, 4, 9, 10, 11, 12]
_W3 = [1, 2, 5, 6, 9, 10, 13, 14]
_W4 = [1, 3, 5, 7, 9, 11, 13, 15]

OVERLATTICE_TABLE: tuple[OverlatticeRow, ...] = (
    _a1_row(8, [_W1]),
    _a1_row(12, [_W1, _W2]),
    _a1_row(14, [_W1, _W2, _W3]),
    _a1_row(15, [_W1, _W2, _W3, _W4]),
    _a1_row(16, [_W1, _W2, _W3, _W4, range(1, 17)]),
    OverlatticeRow("A2^6", (3,), (pattern("A2^6", ("A2", [1] * 6)),)),
    OverlatticeRow(
        "A2^8",
        (3, 3),
        (
            pattern("A2^8", ("A2", [1, 1, 1, 1, 1, 1, 0, 0])),
            pattern("A2^8", ("A2", [0, 0, 1, 1, 2, 2, 1, 1])),
        ),
    ),
    OverlatticeRow(
        "A2^9",
        (3, 3, 3),
        (
            pattern("A2^9", ("A2", [1, 1, 1, 1, 1, 1, 0, 0, 0])),
            pattern("A2^9", ("A2", [2, 2, 2, 0, 0, 0, 1, 1, 1])),
            pattern("A2^9", ("A2", [0, 2, 1, 0, 1, 2, 0, 2, 1])),
        ),
    ),
    OverlatticeRow("A4^4", (5,), (pattern("A4^4", ("A4", [1, 2, 1, 2])),)),
    OverlatticeRow("A6^3", (7,), (pattern("A6^3", ("A6", [1, 2, 3])),)),
    OverlatticeRow(
        "A1^2+A3^4", (4,), (pattern("A1^2+A3^4", ("A3", [1, 1, 1, 1]), ("A1", [1, 1])),)
    ),
    OverlatticeRow(
        "A1^4+A3^4",
        (2, 4),
        (
            pattern("A1^4+A3^4", ("A3", [1, 1, 1, 1]), ("A1", [1, 1, 0, 0])),
            pattern("A1^4+A3^4", ("A3", [2, 2, 0, 0]), ("A1", [1, 1, 1, 1])),
        ),
    ),
    OverlatticeRow(
        "A3^6",
        (4, 4),
        (
            pattern("A3^6", ("A3", [1, 1, 1, 1, 2, 0])),
            pattern("A3^6", ("A3", [0, 2, 3, 1, 1, 1])),
        ),
    ),
    OverlatticeRow(
        "A1^6+A3^4",
        (2, 2, 4),
        (
            pattern("A1^6+A3^4", ("A3", [1, 1, 1, 1]), ("A1", [1, 1, 0, 0, 0, 0])),
            pattern("A1^6+A3^4", ("A3", [2, 2, 0, 0]), ("A1", [1, 1, 1, 1, 0, 0])),
            pattern("A1^6+A3^4", ("A3", [0, 2, 2, 0]), ("A1", [1, 1, 0, 0, 1, 1])),
        ),
    ),
    OverlatticeRow(
        "A1+A3+A7^2",
        (8,),
        (pattern("A1+A3+A7^2", ("A7", [1, 3]), ("A3", [1]), ("A1", [1])),),
    ),
)

# Expected families of A1^k: the indices of the embeddable overlattices.
A1_FAMILY_INDICES = {k: (1,) for k in range(1, 8)}
A1_FAMILY_INDICES.update({k: (1, 2) for k in range(8, 12)})
A1_FAMILY_INDICES.update({12: (2, 4), 13: (4,), 14: (8,), 15: (16,), 16: (32,)})
A1_TOTALS = (21, 20, 11)


def check_overlattice_row(row: OverlatticeRow, budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    try:
        h = subgroup_from_generators(row.config, row.generators)
    except NotAdmissibleError as exc:
        return False, f"{row.config}: {exc}"
    if h.invariants != tuple(sorted(row.group)):
        return False, f"generators span {h.describe()}, expected group {row.group}"
    result = search_isotropic_subgroups(row.config, budget)
    if not contains_class(result, h):
        return False, f"search on {row.config} misses the {h.describe()} glue"
    return True, f"{row.config}: {h.describe()} found"


def check_rank19(budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    bad = []
    for i, name in enumerate(RANK19_LIST):
        c = AdeConfiguration.parse(name)
        v = embedding_verdict(c.rank, ade_discriminant_form(c))
        if v.embeds != (i >= len(RANK19_FAILING)):
            bad.append(f"{name}: {v}")
    return (not bad, "; ".join(bad) or "13 fail, 5 embed")


def check_a2_9_a1(budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    cands = overlattice_candidates("A2^9+A1", budget)
    top = max(cands, key=lambda c: c.index)
    v = embedding_verdict(top.rank, top.induced_form)
    ok = top.subgroup.invariants == (3, 3, 3) and not v.embeds
    return ok, f"maximal glue {top.subgroup.describe()}: {v}"


def check_a1_families(budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    rows, totals = a1_family_report(DEFAULT_REFERENCE, budget)
    bad = []
    for row in rows:
        if row.status == "Incomplete":
            raise FixtureIncomplete(f"A1^{row.k} did not finish")
        if tuple(sorted(row.indices)) != A1_FAMILY_INDICES[row.k]:
            bad.append(f"k={row.k}: indices {row.indices}")
    expected_status = {k: IRREDUCIBLE for k in range(1, 16)} | {16: PRIMITIVE_ONLY}
    for row in rows:
        if row.status != expected_status[row.k]:
            bad.append(f"k={row.k}: status {row.status}")
    if totals != A1_TOTALS:
        bad.append(f"totals {totals} != {A1_TOTALS}")
    return (not bad, "; ".join(bad) or f"totals {totals}")


def check_nikulin_lattice(budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    form = ade_discriminant_form(AdeConfiguration.parse("A1^8")).isotropic_quotient([[1] * 8])
    return form.order == 64 and form.length == 6, f"order {form.order}, length {form.length}"


def check_torus_list(budget: int = DEFAULT_BUDGET) -> tuple[bool, str]:
    bad = []
    for name in FUJIKI_LIST:
        rec = classify(name, budget=budget)
        if rec.status == "Incomplete":
            raise FixtureIncomplete(rec.error)
        if rec.status != PRIMITIVE_ONLY:
            bad.append(f"{name}: {rec.status}")
    return (not bad, "; ".join(bad) or "all ten realizable and torus-covered")


@dataclass(frozen=True)
class Fixture:
    name: str
    about: str
    check: Callable[[int], tuple[bool, str]]


def _row_fixture(row: OverlatticeRow) -> Fixture:
    return Fixture(
        f"overlattice-table:{row.config}",
        "root-free glue group and generators of a divisible-class pattern",
        lambda budget, row=row: check_overlattice_row(row, budget),
    )


FIXTURES: tuple[Fixture, ...] = tuple(_row_fixture(r) for r in OVERLATTICE_TABLE) + (
    Fixture("nikulin-lattice", "index-2 overlattice of A1^8 has length 6", check_nikulin_lattice),
    Fixture("rank19-list", "rank-19 configurations containing A4^2+A2^3+A1^4", check_rank19),
    Fixture("a2^9+a1", "maximal glue of A2^9+A1 does not embed", check_a2_9_a1),
    Fixture("a1-families", "families of A1^k for k = 1..16", check_a1_families),
    Fixture("torus-list", "the ten torus-cover configurations", check_torus_list),
)


@dataclass(frozen=True)
class FixtureOutcome:
    name: str
    status: str  # "pass", "fail" or "incomplete"
    message: str


def run_fixtures(budget: int = DEFAULT_BUDGET, fixtures=FIXTURES) -> list[FixtureOutcome]:
    out = []
    for f in fixtures:
        try:
            ok, msg = f.check(budget)
            out.append(FixtureOutcome(f.name, "pass" if ok else "fail", msg))
        except SearchIncomplete as exc:
            out.append(FixtureOutcome(f.name, "incomplete", str(exc)))
        except FixtureIncomplete as exc:
            out.append(FixtureOutcome(f.name, "incomplete", f"search incomplete: {exc}"))
    return out
