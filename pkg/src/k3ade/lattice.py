"""ADE root lattices: types, configurations, Gram matrices and enumeration.

All lattices are negative definite: simple roots have square -2 and
adjacent nodes of the Dynkin diagram pair to +1.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np

__all__ = [
    "AdeType",
    "AdeConfiguration",
    "ade_types",
    "enumerate_configurations",
    "gram_matrix",
    "discriminant_order",
    "MAX_RANK",
]

MAX_RANK = 19

_FAMILY_ORDER = {"A": 0, "D": 1, "E": 2}


@dataclass(frozen=True)
class AdeType:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in _FAMILY_ORDER:
            raise ValueError(f"unknown ADE family {self.family!r}")
        if not isinstance(self.index, int) or isinstance(self.index, bool):
            raise TypeError("ADE index must be an int")
        ok = {
            "A": self.index >= 1,
            "D": self.index >= 4,
            "E": self.index in (6, 7, 8),
        }[self.family]
        if not ok:
            raise ValueError(f"no root lattice {self.family}{self.index}")

    @property
    def rank(self) -> int:
        return self.index

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_FAMILY_ORDER[self.family], self.index)

    def __lt__(self, other: "AdeType") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.family}{self.index}"

    @property
    def discriminant_order(self) -> int:
        if self.family == "A":
            return self.index + 1
        if self.family == "D":
            return 4
        return {6: 3, 7: 2, 8: 1}[self.index]

    def gram(self) -> np.ndarray:
        """Gram matrix of the simple roots (diagonal -2)."""
        n = self.index
        g = -2 * np.eye(n, dtype=np.int64)
        for i, j in self._edges():
            g[i, j] = g[j, i] = 1
        return g

    def _edges(self) -> list[tuple[int, int]]:
        n = self.index
        if self.family == "A":
            return [(i, i + 1) for i in range(n - 1)]
        if self.family == "D":
            # chain 0..n-2, extra node n-1 hangs off node n-3
            return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        # E_n: chain of length n-1, branch node attached to the third node
        return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]


def ade_types(max_rank: int = MAX_RANK) -> list[AdeType]:
    """Every ADE type of rank at most ``max_rank``, in canonical order."""
    out = [AdeType("A", n) for n in range(1, max_rank + 1)]
    out += [AdeType("D", n) for n in range(4, max_rank + 1)]
    out += [AdeType("E", n) for n in (6, 7, 8) if n <= max_rank]
    return out


_SUMMAND_RE = re.compile(r"([ADE])(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class AdeConfiguration:
    """A multiset of ADE types, i.e. the root lattice of an ADE configuration.

    ``summands`` is kept sorted (A < D < E, then by index) so that equality,
    hashing and the printed name only depend on the multiset.
    """

    summands: tuple[AdeType, ...]

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands)))

    @classmethod
    def parse(cls, name: str) -> "AdeConfiguration":
        if not isinstance(name, str) or not name:
            raise ValueError("empty configuration name")
        summands = []
        for part in name.split("+"):
            m = _SUMMAND_RE.match(part)
            if m is None:
                raise ValueError(f"cannot parse summand {part!r} in {name!r}")
            fam, idx, exp = m.group(1), int(m.group(2)), m.group(3)
            k = 1 if exp is None else int(exp)
            if k < 1:
                raise ValueError(f"exponent must be positive in {name!r}")
            summands.extend([AdeType(fam, idx)] * k)
        return cls(tuple(summands))

    @cached_property
    def canonical_name(self) -> str:
        counts = Counter(self.summands)
        bits = []
        for t in sorted(counts):
            k = counts[t]
            bits.append(f"{t}" if k == 1 else f"{t}^{k}")
        return "+".join(bits)

    @property
    def rank(self) -> int:
        return sum(t.rank for t in self.summands)

    @cached_property
    def multiplicities(self) -> dict[AdeType, int]:
        return dict(sorted(Counter(self.summands).items()))

    def count(self, family: str, index: int) -> int:
        return self.multiplicities.get(AdeType(family, index), 0)

    def __str__(self) -> str:
        return self.canonical_name

    def __repr__(self) -> str:
        return f"AdeConfiguration({self.canonical_name!r})"

    def __lt__(self, other: "AdeConfiguration") -> bool:
        return self.canonical_name < other.canonical_name


def enumerate_configurations(max_rank: int = MAX_RANK) -> list[AdeConfiguration]:
    """All configurations of rank 1..max_rank, sorted by canonical name."""
    if isinstance(max_rank, bool) or not isinstance(max_rank, int):
        raise TypeError("max_rank must be an int")
    if not 1 <= max_rank <= MAX_RANK:
        raise ValueError(f"max_rank must lie in [1, {MAX_RANK}], got {max_rank}")
    types = ade_types(max_rank)
    out: list[AdeConfiguration] = []

    def extend(start: int, remaining: int, acc: list[AdeType]):
        if acc:
            out.append(AdeConfiguration(tuple(acc)))
        for i in range(start, len(types)):
            t = types[i]
            if t.rank <= remaining:
                acc.append(t)
                extend(i, remaining - t.rank, acc)
                acc.pop()

    extend(0, max_rank, [])
    out.sort(key=lambda c: c.canonical_name)
    return out


def gram_matrix(config: AdeConfiguration) -> np.ndarray:
    """Block-diagonal Gram matrix, blocks in canonical summand order."""
    n = config.rank
    g = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for t in config.summands:
        g[pos:pos + t.rank, pos:pos + t.rank] = t.gram()
        pos += t.rank
    return g


def discriminant_order(config: AdeConfiguration) -> int:
    return prod(t.discriminant_order for t in config.summands)
