"""Glue elements, admissible isotropic subgroups and overlattice candidates.

Everything happens on the discriminant group A = L^v / L of an ADE lattice L.
An element of A is stored as one class index per summand:

* A_n: the residue j mod n+1;
* D_n: 0, 1 (spinor), 2 (vector), 3 (cospinor).  For odd n this is the
  residue mod 4 of the cyclic group; for even n the group is (Z/2)^2 and
  addition is bitwise xor, so 1 and 2 are the two generators;
* E_6: residue mod 3; E_7: residue mod 2; E_8: always 0.

Because the summands are orthogonal, the minimal norm of a coset and its
q-value are sums of per-summand contributions, and q = -(minimal norm) mod 2.
A glue element is admissible when the overlattice it generates acquires no
vector of norm -2: its total minimal norm must be an even integer at least 4,
and its order at most 8.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import pynauty
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .fqf import FiniteQuadraticForm, ade_discriminant_form
from .lattice import AdeConfiguration, AdeType

__all__ = [
    "GlueElement",
    "IsotropicSubgroup",
    "OverlatticeCandidate",
    "SearchIncomplete",
    "SearchResult",
    "DEFAULT_BUDGET",
    "MAX_GLUE_ORDER",
    "min_coset_norm",
    "class_order",
    "class_automorphisms",
    "glue_element",
    "is_admissible",
    "admissible_elements",
    "search_isotropic_subgroups",
    "overlattice_candidates",
    "subgroup_from_generators",
    "contains_class",
    "orbit_size",
    "NotAdmissibleError",
]

DEFAULT_BUDGET = 10**7
MAX_GLUE_ORDER = 8
# groups up to this size get a precomputed addition table (at most 128 MiB)
ADD_TABLE_LIMIT = 2**13


class SearchIncomplete(RuntimeError):
    """The subgroup search ran out of budget before finishing."""

    def __init__(self, config: AdeConfiguration, nodes: int, budget: int):
        super().__init__(
            f"search incomplete for {config.canonical_name}: "
            f"{nodes} nodes exceeded the budget of {budget}"
        )
        self.config = config
        self.nodes = nodes
        self.budget = budget


# ---------------------------------------------------------------------------
# per-summand data


def _group_size(t: AdeType) -> int:
    return t.discriminant_order


def _is_xor(t: AdeType) -> bool:
    return t.family == "D" and t.index % 2 == 0


def _check_class(t: AdeType, cls: int) -> None:
    if isinstance(cls, bool) or not isinstance(cls, (int, np.integer)):
        raise TypeError("class must be an int")
    if not 0 <= cls < _group_size(t):
        raise ValueError(f"class {cls} out of range for {t}")


def min_coset_norm(summand: AdeType, cls: int) -> Fraction:
    """Least |v.v| over the coset of ``cls`` in the dual of ``summand``."""
    _check_class(summand, cls)
    if cls == 0:
        return Fraction(0)
    n = summand.index
    if summand.family == "A":
        return Fraction(cls * (n + 1 - cls), n + 1)
    if summand.family == "D":
        return Fraction(1) if cls == 2 else Fraction(n, 4)
    return Fraction(4, 3) if n == 6 else Fraction(3, 2)


def class_order(summand: AdeType, cls: int) -> int:
    _check_class(summand, cls)
    if cls == 0:
        return 1
    if _is_xor(summand):
        return 2
    m = _group_size(summand)
    return m // math.gcd(cls, m)


def class_q(summand: AdeType, cls: int) -> Fraction:
    """q-value of a class in [0, 2); equals minus the coset minimum mod 2."""
    v = -min_coset_norm(summand, cls)
    return v - 2 * math.floor(v / 2) if v else Fraction(0)


def class_automorphisms(summand: AdeType) -> list[tuple[int, ...]]:
    """Diagram symmetries of ``summand`` as permutations of its classes."""
    m = _group_size(summand)
    ident = tuple(range(m))
    if m == 1:
        return [ident]
    if _is_xor(summand):
        if summand.index == 4:
            perms = []
            for p in itertools.permutations((1, 2, 3)):
                perms.append((0,) + p)
            return perms
        return [ident, (0, 3, 2, 1)]
    neg = tuple((-c) % m for c in range(m))
    return [ident] if neg == ident else [ident, neg]


def _class_orbits(summand: AdeType) -> list[tuple[int, int]]:
    """(least representative, orbit size) of each class orbit."""
    autos = class_automorphisms(summand)
    seen, out = set(), []
    for c in range(_group_size(summand)):
        if c in seen:
            continue
        orb = {a[c] for a in autos}
        seen |= orb
        out.append((c, len(orb)))
    return out


def _fqf_coords(t: AdeType, cls: int) -> list[int]:
    """Coordinates of a class in the generators used by the fqf module."""
    if t.family == "E" and t.index == 8:
        return []
    if _is_xor(t):
        return [cls & 1, cls >> 1]
    return [cls]


# ---------------------------------------------------------------------------
# glue elements


@dataclass(frozen=True)
class GlueElement:
    config: AdeConfiguration
    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if len(comps) != len(self.config.summands):
            raise ValueError("one component per summand is required")
        for t, c in zip(self.config.summands, comps):
            _check_class(t, c)
        object.__setattr__(self, "components", comps)

    @cached_property
    def order(self) -> int:
        return math.lcm(*(class_order(t, c) for t, c in zip(self.config.summands, self.components)))

    @cached_property
    def min_coset_norm(self) -> Fraction:
        return sum(
            (min_coset_norm(t, c) for t, c in zip(self.config.summands, self.components)),
            Fraction(0),
        )

    @cached_property
    def q_value(self) -> Fraction:
        v = -self.min_coset_norm
        return v - 2 * math.floor(v / 2)

    @property
    def is_zero(self) -> bool:
        return not any(self.components)

    def fqf_vector(self) -> list[int]:
        out: list[int] = []
        for t, c in zip(self.config.summands, self.components):
            out += _fqf_coords(t, c)
        return out

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.components)) + ")"


def glue_element(config: AdeConfiguration | str, components) -> GlueElement:
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    return GlueElement(config, tuple(components))


def is_admissible(e: GlueElement) -> bool:
    """q vanishes, the coset minimum exceeds 2, and the order is at most 8."""
    norm = e.min_coset_norm
    return (
        not e.is_zero
        and norm.denominator == 1
        and norm.numerator % 2 == 0
        and norm > 2
        and e.order <= MAX_GLUE_ORDER
    )


def _type_blocks(config: AdeConfiguration) -> list[tuple[AdeType, int, int]]:
    """(type, first position, multiplicity) for each distinct summand type."""
    out, pos = [], 0
    for t, m in config.multiplicities.items():
        out.append((t, pos, m))
        pos += m
    return out


def admissible_elements(config: AdeConfiguration | str) -> list[tuple[GlueElement, int]]:
    """Admissible elements up to symmetry, each with the size of its orbit.

    The symmetry group permutes isomorphic summands and applies diagram
    automorphisms inside each summand. Representatives are the
    lexicographically least members of their orbits.
    """
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    blocks = _type_blocks(config)
    per_type = []
    for t, _, m in blocks:
        orbs = _class_orbits(t)
        choices = []
        for combo in itertools.combinations_with_replacement(range(len(orbs)), m):
            classes = tuple(orbs[i][0] for i in combo)
            counts = Counter(combo)
            size = math.factorial(m)
            for i, k in counts.items():
                size //= math.factorial(k)
                size *= orbs[i][1] ** k
            norm = sum((min_coset_norm(t, c) for c in classes), Fraction(0))
            order = math.lcm(*(class_order(t, c) for c in classes))
            choices.append((classes, size, norm, order))
        per_type.append(choices)
    out = []
    for combo in itertools.product(*per_type):
        norm = sum((c[2] for c in combo), Fraction(0))
        if norm.denominator != 1 or norm.numerator % 2 or norm <= 2:
            continue
        order = math.lcm(*(c[3] for c in combo))
        if order > MAX_GLUE_ORDER:
            continue
        comps = tuple(itertools.chain.from_iterable(c[0] for c in combo))
        size = math.prod(c[1] for c in combo)
        out.append((GlueElement(config, comps), size))
    out.sort(key=lambda es: (es[0].order, es[0].min_coset_norm, es[0].components))
    return out


# ---------------------------------------------------------------------------
# the discriminant group as numpy arrays


class _Group:
    """Vectorised arithmetic on the discriminant group of a configuration.

    Only summands with a nontrivial group get a column. Elements are rows
    of small ints; keys are mixed-radix integers so that ``elements[key]``
    recovers a row.
    """

    def __init__(self, config: AdeConfiguration):
        self.config = config
        self.positions = [i for i, t in enumerate(config.summands) if _group_size(t) > 1]
        self.types = [config.summands[i] for i in self.positions]
        self.k = len(self.types)
        self.radix = np.array([_group_size(t) for t in self.types], dtype=np.int64)
        self.xor = np.array([_is_xor(t) for t in self.types], dtype=bool)
        self.size = int(np.prod(self.radix)) if self.k else 1
        w = np.ones(self.k, dtype=np.int64)
        for i in range(self.k - 2, -1, -1):
            w[i] = w[i + 1] * self.radix[i + 1]
        self.weights = w
        self.scale = math.lcm(*(min_coset_norm(t, 1).denominator for t in self.types)) if self.k else 1
        width = int(self.radix.max()) if self.k else 1
        self.norm_table = np.zeros((self.k, width), dtype=np.int64)
        self.order_table = np.ones((self.k, width), dtype=np.int64)
        for i, t in enumerate(self.types):
            for c in range(_group_size(t)):
                self.norm_table[i, c] = int(min_coset_norm(t, c) * self.scale)
                self.order_table[i, c] = class_order(t, c)

    def keys(self, x: np.ndarray) -> np.ndarray:
        return x.astype(np.int64) @ self.weights

    @cached_property
    def elements(self) -> np.ndarray:
        idx = np.arange(self.size, dtype=np.int64)
        cols = np.unravel_index(idx, tuple(self.radix)) if self.k else ()
        return np.stack(cols, axis=1).astype(np.int16) if self.k else np.zeros((1, 0), np.int16)

    def add(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        s = (x.astype(np.int64) + y) % self.radix
        if self.xor.any():
            s[..., self.xor] = np.bitwise_xor(x[..., self.xor], y[..., self.xor])
        return s

    def scale_by(self, a: int, x: np.ndarray) -> np.ndarray:
        s = (a * x.astype(np.int64)) % self.radix
        if self.xor.any():
            s[..., self.xor] = x[..., self.xor] if a % 2 else 0
        return s

    @cached_property
    def add_table(self) -> np.ndarray | None:
        """key(a + b) for all pairs of keys, for groups of modest size.

        Built one column at a time: the table of a product of groups is
        the outer combination of the factor tables.
        """
        if self.size > ADD_TABLE_LIMIT:
            return None
        dtype = np.int16 if self.size <= 2**15 else np.int32
        table = np.zeros((1, 1), dtype=dtype)
        for m, xor in zip(self.radix.tolist(), self.xor.tolist()):
            c = np.arange(m)
            col = (c[:, None] ^ c[None, :]) if xor else (c[:, None] + c[None, :]) % m
            n = len(table)
            table = (table[:, None, :, None] * m + col[None, :, None, :].astype(dtype)).reshape(n * m, n * m)
        return table

    def sums(self, x: np.ndarray, hkeys: np.ndarray, hrows: np.ndarray) -> np.ndarray:
        """Keys of x_i + h_j as a (len(x), len(H)) matrix."""
        table = self.add_table
        if table is not None:
            return table[self.keys(x)[:, None], hkeys[None, :]].astype(np.int64)
        return self.keys(self.add(x[:, None, :], hrows[None, :, :]))

    def key_sums(self, xkeys: np.ndarray, hkeys: np.ndarray) -> np.ndarray:
        """Like :meth:`sums`, for elements given by key."""
        table = self.add_table
        if table is not None:
            return table[xkeys[:, None], hkeys[None, :]]
        rows = self.elements
        return self.keys(self.add(rows[xkeys][:, None, :], rows[hkeys][None, :, :]))

    def translation(self, z: int) -> np.ndarray:
        """Keys of every element plus the element with key ``z``."""
        table = self.add_table
        if table is not None:
            return table[z]
        return self.keys(self.add(self.elements, self.elements[z][None, :]))

    @cached_property
    def multiples(self) -> np.ndarray:
        """multiples[a, key] = key of a * element, for 0 <= a <= MAX_GLUE_ORDER."""
        return np.stack([self.keys(self.scale_by(a, self.elements)) for a in range(MAX_GLUE_ORDER + 1)])

    def _lookup(self, table: np.ndarray, x: np.ndarray) -> np.ndarray:
        return table[np.arange(self.k), x.astype(np.int64)]

    @cached_property
    def scaled_norms(self) -> np.ndarray:
        if not self.k:
            return np.zeros(1, dtype=np.int64)
        return self._lookup(self.norm_table, self.elements).sum(axis=1)

    @cached_property
    def orders(self) -> np.ndarray:
        if not self.k:
            return np.ones(1, dtype=np.int64)
        return np.lcm.reduce(self._lookup(self.order_table, self.elements), axis=1)

    @cached_property
    def admissible(self) -> np.ndarray:
        s, L = self.scaled_norms, self.scale
        return (s % (2 * L) == 0) & (s > 2 * L) & (self.orders <= MAX_GLUE_ORDER)

    @cached_property
    def ok(self) -> np.ndarray:
        """Admissible or zero: the condition every member of H must meet."""
        out = self.admissible.copy()
        out[0] = True
        return out

    def full_components(self, row) -> tuple[int, ...]:
        comps = [0] * len(self.config.summands)
        for p, c in zip(self.positions, row):
            comps[p] = int(c)
        return tuple(comps)

    def glue(self, key: int) -> GlueElement:
        return GlueElement(self.config, self.full_components(self.elements[key]))


# ---------------------------------------------------------------------------
# canonical forms through nauty


class _Gadget:
    """Coloured graph whose automorphism group is the symmetry group.

    One vertex per column and one per nonzero class of each column; cyclic
    groups are closed into a cycle through the column vertex (so the only
    symmetry fixing that vertex is negation), (Z/2)^2 columns are stars,
    with the vector class coloured apart except for D4. Subgroups are
    encoded by one extra vertex per nonzero member joined to its classes.
    """

    def __init__(self, g: _Group):
        self.g = g
        off = g.k
        self.class_off = []
        adj: dict[int, list[int]] = {}
        colours: dict[tuple, set[int]] = {}
        for i, t in enumerate(g.types):
            m = _group_size(t)
            self.class_off.append(off)
            verts = [i] + [off + c - 1 for c in range(1, m)]
            colours.setdefault((t.sort_key, 0), set()).add(i)
            if _is_xor(t):
                adj.setdefault(i, []).extend(verts[1:])
                for c in (1, 2, 3):
                    tag = 1 if (c != 2 or t.index == 4) else 2
                    colours.setdefault((t.sort_key, tag), set()).add(off + c - 1)
            else:
                for c in range(m):
                    a, b = verts[c], verts[(c + 1) % m]
                    if m == 2 and c == 1:
                        break
                    adj.setdefault(a, []).append(b)
                for c in range(1, m):
                    colours.setdefault((t.sort_key, 1), set()).add(off + c - 1)
            off += m - 1
        self.nbase = off
        self.adj = adj
        self.partition = [colours[key] for key in sorted(colours)]

    def graph(self, hrows: np.ndarray) -> pynauty.Graph:
        adj = {v: list(ns) for v, ns in self.adj.items()}
        n = self.nbase
        elems = set()
        for row in hrows:
            if not row.any():
                continue
            nb = [self.class_off[i] + int(c) - 1 for i, c in enumerate(row) if c]
            adj[n] = nb
            elems.add(n)
            n += 1
        part = list(self.partition) + ([elems] if elems else [])
        return pynauty.Graph(n, directed=False, adjacency_dict=adj, vertex_coloring=part)

    def column_maps(self, perm) -> tuple[np.ndarray, np.ndarray]:
        """Translate a vertex permutation into (column target, class table)."""
        g = self.g
        target = np.array([perm[i] for i in range(g.k)], dtype=np.int64)
        width = self.g.norm_table.shape[1]
        table = np.zeros((g.k, width), dtype=np.int64)
        for i, t in enumerate(g.types):
            j = target[i]
            for c in range(1, _group_size(t)):
                table[i, c] = perm[self.class_off[i] + c - 1] - self.class_off[j] + 1
        return target, table

    def apply(self, perm, rows: np.ndarray) -> np.ndarray:
        target, table = self.column_maps(perm)
        out = np.empty_like(rows)
        out[:, target] = table[np.arange(self.g.k), rows.astype(np.int64)]
        return out

    @cached_property
    def group_size(self) -> int:
        return _nauty_size(pynauty.autgrp(self.graph(np.zeros((0, self.g.k), np.int16))))


def _nauty_size(aut) -> int:
    mantissa, exponent = aut[1], aut[2]
    return round(mantissa * 10**exponent)


# ---------------------------------------------------------------------------
# subgroups


def _invariant_factors(orders: np.ndarray) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element orders."""
    total = len(orders)
    if total == 1:
        return ()
    factors: list[int] = []
    primes = [p for p in (2, 3, 5, 7) if total % p == 0]
    per_prime: dict[int, list[int]] = {}
    for p in primes:
        # count of elements killed by p^k gives the p-part structure
        exps = []
        k = 1
        prev = 1
        ranks = []
        while True:
            killed = int(np.sum((p**k) % orders == 0))
            r = round(math.log(killed / prev, p)) if killed > prev else 0
            if r == 0:
                break
            ranks.append(r)
            prev = killed
            k += 1
        # ranks[k-1] = number of cyclic factors of order >= p^k
        for k, r in enumerate(ranks, start=1):
            nxt = ranks[k] if k < len(ranks) else 0
            exps += [p**k] * (r - nxt)
        per_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    for i in range(width):
        f = 1
        for p in primes:
            if i < len(per_prime[p]):
                f *= per_prime[p][i]
        factors.append(f)
    return tuple(sorted(factors))


@dataclass(frozen=True)
class IsotropicSubgroup:
    config: AdeConfiguration
    keys: tuple[int, ...]
    generators: tuple[GlueElement, ...]
    invariants: tuple[int, ...]
    maximal: bool = False
    certificate: bytes = field(default=b"", compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.keys)

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @cached_property
    def _group(self) -> _Group:
        return _Group(self.config)

    @property
    def elements(self) -> list[GlueElement]:
        """The nonzero members."""
        return [self._group.glue(k) for k in self.keys if k]

    def fqf_generators(self) -> list[list[int]]:
        return [g.fqf_vector() for g in self.generators]

    def describe(self) -> str:
        if not self.invariants:
            return "trivial"
        return "x".join(f"Z/{d}" for d in self.invariants)


def _min_generators(g: _Group, keys: np.ndarray) -> list[int]:
    """A small generating set, built greedily from elements of largest order."""
    orders = g.orders[keys]
    ordered = keys[np.lexsort((keys, -orders))]
    span = {0}
    gens = []
    rows = g.elements
    for k in ordered:
        k = int(k)
        if k in span:
            continue
        gens.append(k)
        x = rows[k]
        new = set(span)
        frontier = list(span)
        mult = x.astype(np.int64)
        while True:
            added = []
            kk = g.keys(g.add(rows[np.array(frontier)], mult[None, :]))
            for v in kk.tolist():
                if v not in new:
                    new.add(v)
                    added.append(v)
            if not added:
                break
            frontier = added
        span = new
        if len(span) == len(keys):
            break
    return gens


@dataclass
class SearchResult:
    config: AdeConfiguration
    subgroups: list[IsotropicSubgroup]
    nodes: int
    symmetry: bool

    @property
    def maximal(self) -> list[IsotropicSubgroup]:
        return [h for h in self.subgroups if h.maximal]


def _chunk(g: _Group, nh: int) -> int:
    return max(1, 2_000_000 // max(1, nh * max(1, g.k)))


def _coset_ok(g: _Group, hkeys: np.ndarray, hrows: np.ndarray, x: np.ndarray, p: int) -> np.ndarray:
    """For each row of ``x``: are all a*x + h (0 < a < p, h in H) admissible?"""
    good = np.ones(len(x), dtype=bool)
    chunk = _chunk(g, len(hkeys))
    for a in range(1, p):
        ax = g.scale_by(a, x)
        for s in range(0, len(x), chunk):
            keys = g.sums(ax[s:s + chunk], hkeys, hrows)
            good[s:s + chunk] &= g.ok[keys].all(axis=1)
    return good


def _extensions(g: _Group, hkeys, hrows, x, idx, p):
    """Yield (index, sorted keys of <H, x>) once per distinct extension."""
    parts = [np.broadcast_to(hkeys, (len(x), len(hkeys)))]
    for a in range(1, p):
        parts.append(g.sums(g.scale_by(a, x), hkeys, hrows))
    table = np.sort(np.concatenate(parts, axis=1), axis=1)
    _, first = np.unique(table, axis=0, return_index=True)
    for j in np.sort(first):
        yield idx[j], table[j]


def _orbit_reps(gadget: _Gadget, gens, rows: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Indices of one (least-key) representative per orbit of ``keys``."""
    n = len(keys)
    if n == 0 or not gens:
        return np.arange(n)
    order = np.argsort(keys)
    sk = keys[order]
    cols = np.ascontiguousarray(rows.T, dtype=np.intp)
    weights = gadget.g.weights
    src, dst = [], []
    for perm in gens:
        # image key = sum over columns of (mapped class) * (weight of target column)
        target, table = gadget.column_maps(perm)
        contrib = table * weights[target][:, None]
        img = np.zeros(n, dtype=np.int64)
        for i in range(gadget.g.k):
            img += contrib[i][cols[i]]
        pos = np.searchsorted(sk, img)
        src.append(np.arange(n))
        dst.append(order[pos])
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    mat = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(mat, directed=False)
    best = {}
    for i in np.argsort(keys, kind="stable"):
        best.setdefault(int(labels[i]), int(i))
    return np.array(sorted(best.values(), key=lambda i: keys[i]), dtype=np.int64)


def _closure_ok(g: _Group, ok_shift: np.ndarray, y: np.ndarray) -> np.ndarray:
    """For each key in ``y``: is <H, y> admissible, given the mask of z with z + H admissible?"""
    good = np.ones(len(y), dtype=bool)
    orders = g.orders[y]
    for a in range(1, MAX_GLUE_ORDER):
        good &= (orders <= a) | ok_shift[g.multiples[a][y]]
    return good


def _labelled_search(g: _Group, charge) -> list[tuple[np.ndarray, list[int], bool]]:
    """Every admissibility-closed subgroup, labelled, each produced once.

    A subgroup H has a unique greedy generating sequence g_1 < g_2 < ...
    with g_i the least key in H outside <g_1, ..., g_{i-1}>. The search
    only extends H by x when x exceeds the last generator and is the least
    new key of <H, x>, so it walks each sequence exactly once and needs no
    duplicate table.

    Alongside H it carries S(H), the mask of z with z + H admissible (zero
    allowed). Then <H, y> is admissible iff a*y lies in S(H) for all a,
    and S(<H, x>) is the intersection of the translates S(H) - b*x.
    Candidates for a child come from the parent's, as the condition only
    gets stronger going down.
    """
    mult = g.multiples
    root = np.array([0], dtype=np.int64)
    in_h = np.zeros(g.size, dtype=bool)
    in_h[0] = True
    shift = g.ok.copy()
    adm = np.flatnonzero(g.admissible)
    stack = [(root, in_h, shift, adm[_closure_ok(g, shift, adm)], [])]
    out = []
    while stack:
        hkeys, in_h, shift, cand, chain = stack.pop()
        out.append((hkeys, chain, len(cand) == 0))
        last = chain[-1] if chain else -1
        for x in cand[cand > last].tolist():
            charge(1)
            steps = [int(mult[1][x])]
            while not in_h[mult[len(steps) + 1][x]]:
                steps.append(int(mult[len(steps) + 1][x]))
            rows = [g.translation(bx) for bx in steps]
            cosets = [t[hkeys] for t in rows]
            # x must be the least new key, so that H is reached only via its greedy sequence
            if cosets[0].min() != x or any(c.min() < x for c in cosets[1:]):
                continue
            child = np.sort(np.concatenate([hkeys, *cosets]))
            in_c = in_h.copy()
            in_c[child] = True
            sub = shift.copy()
            for t in rows:
                sub &= shift[t]
            rest = cand[~in_c[cand]]
            stack.append((child, in_c, sub, rest[_closure_ok(g, sub, rest)], chain + [x]))
    return out


def search_isotropic_subgroups(
    config: AdeConfiguration | str,
    budget: int = DEFAULT_BUDGET,
    symmetry: bool = True,
) -> SearchResult:
    """Every admissibility-closed isotropic subgroup, up to symmetry.

    Subgroups grow one prime step at a time: H' = <H, x> where p*x lies in
    H and every new member is admissible. Each isomorphism class appears
    once (keyed by a nauty certificate). With ``symmetry=False`` every
    labelled subgroup is returned instead, found by an independent
    depth-first walk (see ``_labelled_search``). The trivial subgroup comes
    first. Raises :class:`SearchIncomplete` when more than ``budget`` nodes
    (candidate extensions plus subgroups) would be visited.
    """
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    if budget < 1:
        raise ValueError("budget must be positive")
    g = _Group(config)
    trivial_key = (0,)
    nodes = 1

    def charge(n):
        nonlocal nodes
        nodes += n
        if nodes > budget:
            raise SearchIncomplete(config, nodes, budget)
    if symmetry and not admissible_elements(config):
        h = IsotropicSubgroup(config, trivial_key, (), (), maximal=True)
        return SearchResult(config, [h], nodes, symmetry)

    if not symmetry:
        results = [(h, chain, maximal, b"") for h, chain, maximal in _labelled_search(g, charge)]
        return _finish(config, g, results, nodes, symmetry)

    gadget = _Gadget(g)
    adm_keys = np.flatnonzero(g.admissible)
    adm_rows = g.elements[adm_keys]
    multiples = {}
    for p in (2, 3, 5, 7):
        multiples[p] = g.keys(g.scale_by(p, adm_rows))

    found: dict[object, tuple[np.ndarray, list[int]]] = {}
    level = [(np.array([0], dtype=np.int64), [])]
    results: list[tuple[np.ndarray, list[int], bool, bytes]] = []

    while level:
        nxt: dict[object, tuple[np.ndarray, list[int], bytes]] = {}
        for hkeys, chain in level:
            hrows = g.elements[hkeys]
            in_h = np.zeros(g.size, dtype=bool)
            in_h[hkeys] = True
            outside = ~in_h[adm_keys]
            prime_of = np.zeros(len(adm_keys), dtype=np.int64)
            for p, mk in multiples.items():
                prime_of[outside & in_h[mk] & (prime_of == 0)] = p
            cand = np.flatnonzero(prime_of)
            extended = False
            if len(cand):
                ckeys = adm_keys[cand]
                crows = adm_rows[cand]
                aut = pynauty.autgrp(gadget.graph(hrows))
                reps = _orbit_reps(gadget, aut[0], crows, ckeys)
                charge(len(reps))
                for p in sorted(set(prime_of[cand[reps]].tolist())):
                    sel = reps[prime_of[cand[reps]] == p]
                    good = sel[_coset_ok(g, hkeys, hrows, crows[sel], p)]
                    if not len(good):
                        continue
                    extended = True
                    for i, newkeys in _extensions(g, hkeys, hrows, crows[good], good, p):
                        cert = pynauty.certificate(gadget.graph(g.elements[newkeys]))
                        if cert not in nxt:
                            charge(1)
                            nxt[cert] = (newkeys, chain + [int(ckeys[i])], cert)
            cert = pynauty.certificate(gadget.graph(hrows)) if len(hkeys) > 1 else b""
            results.append((hkeys, chain, not extended, cert))
        level = [(v[0], v[1]) for _, v in sorted(nxt.items(), key=lambda kv: kv[0])]
    return _finish(config, g, results, nodes, symmetry)


def _finish(config, g: _Group, results, nodes: int, symmetry: bool) -> SearchResult:
    subgroups = []
    for hkeys, chain, maximal, cert in results:
        # labelled runs keep their greedy chain, which already generates H
        gens = chain if not symmetry else (_min_generators(g, hkeys) if len(hkeys) > 1 else [])
        subgroups.append(
            IsotropicSubgroup(
                config,
                tuple(int(k) for k in hkeys),
                tuple(g.glue(k) for k in gens),
                _invariant_factors(g.orders[hkeys]),
                maximal=maximal,
                certificate=cert,
            )
        )
    subgroups.sort(key=lambda h: (h.order, h.invariants, h.certificate, h.keys))
    return SearchResult(config, subgroups, nodes, symmetry)


class NotAdmissibleError(ValueError):
    """A generated subgroup has a member that is not admissible."""


def subgroup_from_generators(
    config: AdeConfiguration | str, generators, check: bool = True
) -> IsotropicSubgroup:
    """The subgroup spanned by explicit glue elements (component tuples).

    With ``check`` set, every nonzero member must be admissible; the result
    carries the same kind of certificate as the search output, so it can be
    compared against it.
    """
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    g = _Group(config)
    gens = [gen if isinstance(gen, GlueElement) else GlueElement(config, tuple(gen)) for gen in generators]
    rows = [[e.components[p] for p in g.positions] for e in gens]
    span = np.array([0], dtype=np.int64)
    for row in rows:
        x = np.array(row, dtype=np.int64)
        while True:
            prev = len(span)
            shifted = g.keys(g.add(g.elements[span], x[None, :]))
            span = np.union1d(span, shifted)
            if len(span) == prev:
                break
    if check and not g.ok[span].all():
        bad = g.glue(int(span[~g.ok[span]][0]))
        raise NotAdmissibleError(f"member {bad} of the generated subgroup is not admissible")
    cert = pynauty.certificate(_Gadget(g).graph(g.elements[span])) if len(span) > 1 else b""
    return IsotropicSubgroup(
        config,
        tuple(int(k) for k in span),
        tuple(gens),
        _invariant_factors(g.orders[span]),
        certificate=cert,
    )


def contains_class(result: "SearchResult", h: IsotropicSubgroup) -> bool:
    """Does the search output contain the symmetry class of ``h``?"""
    if not result.symmetry:
        return any(set(s.keys) == set(h.keys) for s in result.subgroups)
    if h.order == 1:
        return True
    cert = h.certificate
    if not cert:
        g = _Group(h.config)
        cert = pynauty.certificate(_Gadget(g).graph(g.elements[np.array(h.keys)]))
    return any(s.order == h.order and s.certificate == cert for s in result.subgroups)


def orbit_size(h: IsotropicSubgroup) -> int:
    """Number of labelled subgroups in the symmetry orbit of ``h``."""
    g = _Group(h.config)
    gadget = _Gadget(g)
    stab = _nauty_size(pynauty.autgrp(gadget.graph(g.elements[np.array(h.keys)])))
    return gadget.group_size // stab


# ---------------------------------------------------------------------------
# overlattices


@dataclass(frozen=True)
class OverlatticeCandidate:
    base: AdeConfiguration
    subgroup: IsotropicSubgroup
    induced_form: FiniteQuadraticForm

    @property
    def index(self) -> int:
        return self.subgroup.order

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def is_trivial(self) -> bool:
        return self.subgroup.order == 1


def overlattice_candidates(
    config: AdeConfiguration | str,
    budget: int = DEFAULT_BUDGET,
    search: SearchResult | None = None,
) -> list[OverlatticeCandidate]:
    """One candidate per subgroup class; the trivial overlattice comes first."""
    if isinstance(config, str):
        config = AdeConfiguration.parse(config)
    if search is None:
        search = search_isotropic_subgroups(config, budget)
    form = ade_discriminant_form(config)
    out = []
    for h in search.subgroups:
        induced = form if h.order == 1 else form.isotropic_quotient(h.fqf_generators())
        out.append(OverlatticeCandidate(config, h, induced))
    return out
