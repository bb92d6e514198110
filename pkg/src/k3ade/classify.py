"""Classification of ADE configurations on K3 surfaces.

For each configuration L of rank at most 19 the pipeline

1. finds every admissible isotropic subgroup H of A_L up to symmetry, i.e.
   every root-free overlattice L' of finite index,
2. tests each L' (rank and induced discriminant form) for a primitive
   embedding into the K3 lattice,
3. keeps the overlattices that embed as the configuration's families.

A configuration is realizable when at least one family exists. Realizable
configurations equal to one of the ten torus-quotient branch configurations
are only primitive symplectic; the others are irreducible. An irreducible
configuration is simple when L itself (no glue) embeds and it is none of the
eight exceptional configurations whose complements still carry a Galois
cover.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

from .glue import DEFAULT_BUDGET, SearchIncomplete, overlattice_candidates
from .lattice import AdeConfiguration, enumerate_configurations
from .nikulin import embedding_verdict

__all__ = [
    "NOT_REALIZABLE",
    "PRIMITIVE_ONLY",
    "IRREDUCIBLE",
    "INCOMPLETE",
    "FUJIKI_LIST",
    "S_SET",
    "T_SET",
    "BUILTIN_COVER_CONFIGS",
    "ReferenceData",
    "XiaoTableError",
    "load_xiao_table",
    "Family",
    "ClassificationRecord",
    "Partition",
    "IncompleteClassification",
    "classify",
    "is_fujiki",
    "simple_test",
    "partition",
    "a1_family_report",
    "tag_smooth_cover_configs",
]

NOT_REALIZABLE = "NotRealizable"
PRIMITIVE_ONLY = "PrimitiveOnly"
IRREDUCIBLE = "Irreducible"
INCOMPLETE = "Incomplete"

MULTIPLICITY_NOTE = "embedding multiplicity unknown"

# Branch configurations of covers of K3 surfaces by surfaces birational to tori.
FUJIKI_LIST = (
    "A1^16",
    "A2^9",
    "A1^6+A3^4",
    "A1^5+A2^4+A5",
    "A1^2+A3^3+D4^2",
    "A1^3+D4^4",
    "A1+A2^2+A3^3+D5",
    "A1+A2^4+D4+E6",
    "A1+A3^6",
    "A2^4+A3^2+A5",
)

# Configurations B_G = M_G without divisible classes (groups A5, A6, L2(7), M20).
S_SET = {
    "A5": "A1^4+A2^3+A4^2",
    "A6": "A1+A2^2+A3^2+A4^2",
    "L2(7)": "A1+A2^3+A3^2+A6",
    "M20": "A1+A2^3+A4^2+D4",
}

# Rank-19 configurations containing the A5 configuration that still embed.
T_SET = (
    "A1+A2^3+A4^2+D4",
    "A1^2+A2^2+A4^2+D5",
    "A1^2+A2^3+A4+D7",
    "A1^3+A2+A4^2+E6",
    "A1^3+A2^2+A4+E8",
)

# Xiao's B_{Z/2}: the Nikulin configuration of eight curves.
B_Z2 = "A1^8"

BUILTIN_COVER_CONFIGS = tuple(sorted(set(S_SET.values()) | {B_Z2}))


def _canon(name: str) -> str:
    return AdeConfiguration.parse(name).canonical_name


class XiaoTableError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


def load_xiao_table(path) -> tuple[tuple[str, str | None], ...]:
    """Read a table of cover configurations, one canonical name per line.

    A trailing ``# label`` names the group; blank lines and lines starting
    with ``#`` are skipped. Returns ``(canonical name, label)`` pairs in file
    order.
    """
    out = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, _, label = line.partition("#")
        name = name.strip()
        if re.search(r"\s", name):
            raise XiaoTableError(path, lineno, f"whitespace inside configuration {name!r}")
        try:
            config = AdeConfiguration.parse(name)
        except (ValueError, TypeError) as exc:
            raise XiaoTableError(path, lineno, str(exc)) from None
        out.append((config.canonical_name, label.strip() or None))
    return tuple(out)


@dataclass(frozen=True)
class ReferenceData:
    fujiki_list: tuple[str, ...] = FUJIKI_LIST
    s_set: tuple[str, ...] = tuple(S_SET.values())
    t_set: tuple[str, ...] = T_SET
    xiao_table: tuple[tuple[str, str | None], ...] | None = None
    xiao_digest: str | None = None

    def __post_init__(self):
        for attr in ("fujiki_list", "s_set", "t_set"):
            object.__setattr__(self, attr, tuple(_canon(n) for n in getattr(self, attr)))
        if len(self.fujiki_list) != 10 or len(set(self.fujiki_list)) != 10:
            raise ValueError("the torus-cover list must have ten distinct entries")
        ranks = [AdeConfiguration.parse(n).rank for n in self.fujiki_list]
        if not all(16 <= r <= 18 for r in ranks[:4]) or not all(r == 19 for r in ranks[4:]):
            raise ValueError("unexpected ranks in the torus-cover list")
        if len(set(self.s_set)) != len(self.s_set) or len(set(self.t_set)) != len(self.t_set):
            raise ValueError("exceptional sets must not repeat entries")
        # B_{M20} is also the first member of T, so the union has 8 entries.
        if len(self.exceptional) != 8:
            raise ValueError("expected 8 distinct exceptional configurations")

    @classmethod
    def with_xiao_table(cls, path) -> "ReferenceData":
        table = load_xiao_table(path)
        digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
        return cls(xiao_table=table, xiao_digest=digest)

    @property
    def exceptional(self) -> frozenset[str]:
        return frozenset(self.s_set) | frozenset(self.t_set)

    @property
    def cover_configs(self) -> frozenset[str]:
        if self.xiao_table is not None:
            return frozenset(name for name, _ in self.xiao_table)
        return frozenset(BUILTIN_COVER_CONFIGS)


DEFAULT_REFERENCE = ReferenceData()


@dataclass(frozen=True)
class Family:
    """One embeddable overlattice: its index, glue group and induced length."""

    index: int
    subgroup: str
    length: int
    verdict: str

    def as_dict(self) -> dict:
        return {"index": self.index, "subgroup": self.subgroup, "length": self.length, "verdict": self.verdict}


@dataclass(frozen=True)
class ClassificationRecord:
    config: AdeConfiguration
    status: str
    simple: bool
    families: tuple[Family, ...]
    candidates: int = 0
    trivial_embeds: bool = False
    error: str | None = None
    tags: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return self.config.canonical_name

    @property
    def rank(self) -> int:
        return self.config.rank

    @property
    def b2_surface(self) -> int:
        return 22 - self.rank

    @property
    def b2_hilb2(self) -> int:
        return self.b2_surface + 1

    @property
    def moduli_dim(self) -> int:
        return 20 - self.rank

    @property
    def realizable(self) -> bool:
        return self.status in (PRIMITIVE_ONLY, IRREDUCIBLE)

    def as_dict(self) -> dict:
        out = {
            "config": self.name,
            "rank": self.rank,
            "status": self.status,
            "simple": self.simple,
            "families": [f.as_dict() for f in self.families],
            "b2_surface": self.b2_surface,
            "b2_hilb2": self.b2_hilb2,
            "moduli_dim": self.moduli_dim,
            "tags": list(self.tags),
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.error:
            out["error"] = self.error
        return out


def is_fujiki(config: AdeConfiguration | str, refs: ReferenceData = DEFAULT_REFERENCE) -> bool:
    name = config if isinstance(config, str) else config.canonical_name
    return _canon(name) in refs.fujiki_list


def simple_test(record: ClassificationRecord, refs: ReferenceData = DEFAULT_REFERENCE) -> bool:
    """Irreducible with a glue-free embedding, outside the exceptional eight."""
    return (
        record.status == IRREDUCIBLE
        and record.trivial_embeds
        and record.name not in refs.exceptional
    )


def classify(
    config: AdeConfiguration | str,
    refs: ReferenceData = DEFAULT_REFERENCE,
    budget: int = DEFAULT_BUDGET,
) -> ClassificationRecord:
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    if config.rank > 19:
        raise ValueError(f"rank {config.rank} exceeds 19")
    try:
        candidates = overlattice_candidates(config, budget)
    except SearchIncomplete as exc:
        return ClassificationRecord(config, INCOMPLETE, False, (), error=str(exc))
    families = []
    trivial = False
    for cand in candidates:
        verdict = embedding_verdict(cand.rank, cand.induced_form)
        if verdict.embeds:
            trivial = trivial or cand.is_trivial
            families.append(
                Family(cand.index, cand.subgroup.describe(), cand.induced_form.length, str(verdict))
            )
    if not families:
        status = NOT_REALIZABLE
    elif is_fujiki(config, refs):
        status = PRIMITIVE_ONLY
    else:
        status = IRREDUCIBLE
    notes = (MULTIPLICITY_NOTE,) if families else ()
    rec = ClassificationRecord(
        config, status, False, tuple(families), len(candidates), trivial, notes=notes
    )
    return _replace(rec, simple=simple_test(rec, refs))


def _replace(rec: ClassificationRecord, **changes) -> ClassificationRecord:
    from dataclasses import replace

    return replace(rec, **changes)


class IncompleteClassification(RuntimeError):
    """Headline counts were requested from a run with failed configurations."""

    def __init__(self, names: list[str]):
        shown = ", ".join(names[:10]) + (" ..." if len(names) > 10 else "")
        super().__init__(f"{len(names)} configurations did not finish: {shown}")
        self.names = names


@dataclass(frozen=True)
class Partition:
    l_real: tuple[str, ...]
    l_kum: tuple[str, ...]
    l_irr: tuple[str, ...]
    l_simple: tuple[str, ...]
    incomplete: tuple[str, ...] = ()

    @property
    def counts(self) -> dict[str, int]:
        return {
            "real": len(self.l_real),
            "kum": len(self.l_kum),
            "irr": len(self.l_irr),
            "simple": len(self.l_simple),
        }

    def summary(self) -> str:
        c = self.counts
        return f"real={c['real']} kum={c['kum']} irr={c['irr']} simple={c['simple']}"


def partition(
    records, refs: ReferenceData = DEFAULT_REFERENCE, allow_incomplete: bool = False
) -> Partition:
    """Split records into realizable / torus-cover / irreducible / simple.

    Refuses to produce counts when any record is incomplete unless
    ``allow_incomplete`` is set, in which case the names are listed.
    """
    records = sorted(records, key=lambda r: r.name)
    bad = [r.name for r in records if r.status == INCOMPLETE]
    if bad and not allow_incomplete:
        raise IncompleteClassification(bad)
    real = tuple(r.name for r in records if r.realizable)
    kum = tuple(n for n in real if n in refs.fujiki_list)
    irr = tuple(n for n in real if n not in refs.fujiki_list)
    by_name = {r.name: r for r in records}
    simple = tuple(n for n in irr if simple_test(by_name[n], refs))
    return Partition(real, kum, irr, simple, tuple(bad))


def tag_smooth_cover_configs(records, refs: ReferenceData = DEFAULT_REFERENCE):
    """Tag realizable records whose configuration is a smooth-cover branch locus.

    Returns ``(records, partial)``. Without an external table only the
    built-in configurations are known and ``partial`` is True.
    """
    known = refs.cover_configs
    partial = refs.xiao_table is None
    out = []
    for r in records:
        if r.realizable and r.name in known:
            r = _replace(r, tags=tuple(sorted(set(r.tags) | {"smooth-cover"})))
        out.append(r)
    return out, partial


@dataclass(frozen=True)
class A1Row:
    k: int
    status: str
    families: tuple[Family, ...]
    simple: bool

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(f.index for f in self.families)


def a1_family_report(refs: ReferenceData = DEFAULT_REFERENCE, budget: int = DEFAULT_BUDGET):
    """Families of A1^k for k = 1..16 and the totals (all, irreducible, simple).

    A family is one embeddable overlattice class; it is simple when it is the
    glue-free one of a simple configuration.
    """
    rows = []
    total = irreducible = simple = 0
    for k in range(1, 17):
        rec = classify(f"A1^{k}" if k > 1 else "A1", refs, budget)
        rows.append(A1Row(k, rec.status, rec.families, rec.simple))
        total += len(rec.families)
        if rec.status == IRREDUCIBLE:
            irreducible += len(rec.families)
        if rec.simple:
            simple += 1
    return rows, (total, irreducible, simple)


def classify_all(
    max_rank: int = 19,
    refs: ReferenceData = DEFAULT_REFERENCE,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    progress=None,
) -> list[ClassificationRecord]:
    """Classify every configuration up to ``max_rank``; sorted by name."""
    configs = enumerate_configurations(max_rank)
    if jobs <= 1:
        out = []
        for i, c in enumerate(configs):
            out.append(classify(c, refs, budget))
            if progress:
                progress(i + 1, len(configs))
    else:
        from concurrent.futures import ProcessPoolExecutor

        names = [c.canonical_name for c in configs]
        # big discriminant groups first so that stragglers start early
        names.sort(key=lambda n: -AdeConfiguration.parse(n).rank)
        out = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, rec in enumerate(pool.map(_classify_name, names, [refs] * len(names), [budget] * len(names), chunksize=8)):
                out.append(rec)
                if progress:
                    progress(i + 1, len(names))
    out.sort(key=lambda r: r.name)
    return out


def _classify_name(name: str, refs: ReferenceData, budget: int) -> ClassificationRecord:
    return classify(AdeConfiguration.parse(name), refs, budget)
