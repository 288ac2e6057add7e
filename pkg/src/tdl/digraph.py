"""Labelled digraphs on at most 64 vertices, stored as out-neighbour bitmasks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .weights import Weight, WeightedSize

MAX_VERTICES = 64

# Pair states, for the pair {u, v} with u < v.
ABSENT, FORWARD, BACKWARD, DOUBLE = 0, 1, 2, 3


class Family(Enum):
    ORIENTED = "oriented"
    DIGRAPH = "digraph"

    @property
    def states(self) -> tuple[int, ...]:
        return (ABSENT, FORWARD, BACKWARD) if self is Family.ORIENTED else (ABSENT, FORWARD, BACKWARD, DOUBLE)

    @property
    def base(self) -> int:
        return len(self.states)

    def admits(self, g: "Digraph") -> bool:
        return self is Family.DIGRAPH or g.is_oriented()

    @classmethod
    def parse(cls, text: str) -> "Family":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown family {text!r} (expected oriented|digraph)") from None


def pairs(n: int) -> list[tuple[int, int]]:
    """Unordered vertex pairs in lexicographic order."""
    return list(combinations(range(n), 2))


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Digraph:
    """Immutable labelled digraph; ``out[u]`` has bit v set iff u->v."""

    n: int
    out: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if not (1 <= self.n <= MAX_VERTICES):
            raise ValueError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        out = tuple(int(m) for m in self.out)
        if len(out) != self.n:
            raise ValueError("need one out-mask per vertex")
        full = (1 << self.n) - 1
        for v, m in enumerate(out):
            if m & ~full:
                raise ValueError(f"out-mask of {v} names a vertex >= n")
            if m >> v & 1:
                raise ValueError(f"loop at vertex {v}")
        object.__setattr__(self, "out", out)

    # -- construction -----------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        out = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}->{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            out[u] |= 1 << v
        return cls(n, tuple(out))

    @classmethod
    def from_pair_states(cls, n: int, states: Sequence[int]) -> "Digraph":
        """Build from one state per pair, pairs in lexicographic order."""
        out = [0] * n
        for (u, v), s in zip(pairs(n), states, strict=True):
            if s & FORWARD:
                out[u] |= 1 << v
            if s & BACKWARD:
                out[v] |= 1 << u
        return cls(n, tuple(out))

    # -- queries ------------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    @cached_property
    def inn(self) -> tuple[int, ...]:
        """In-neighbour masks."""
        inn = [0] * self.n
        for u, m in enumerate(self.out):
            for v in bits(m):
                inn[v] |= 1 << u
        return tuple(inn)

    @cached_property
    def und(self) -> tuple[int, ...]:
        """Underlying undirected adjacency masks."""
        return tuple(o | i for o, i in zip(self.out, self.inn))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def edge_count(self) -> int:
        return sum(popcount(m) for m in self.out)

    def pair_state(self, u: int, v: int) -> int:
        return (self.out[u] >> v & 1) | ((self.out[v] >> u & 1) << 1)

    def pair_states(self) -> tuple[int, ...]:
        return tuple(self.pair_state(u, v) for u, v in pairs(self.n))

    def double_pairs(self) -> int:
        return sum(popcount(self.out[u] & self.inn[u]) for u in range(self.n)) // 2

    def is_oriented(self) -> bool:
        return all(o & i == 0 for o, i in zip(self.out, self.inn))

    def weighted_size(self, a: Weight | None = None) -> WeightedSize:
        f2 = self.double_pairs()
        f1 = sum(popcount(m) for m in self.und) // 2 - f2
        return WeightedSize(f1, f2)

    # -- derived graphs -----------------------------------------------------

    def with_edges(self, add: Iterable[tuple[int, int]] = (), remove: Iterable[tuple[int, int]] = ()) -> "Digraph":
        out = list(self.out)
        for u, v in remove:
            out[u] &= ~(1 << v)
        for u, v in add:
            out[u] |= 1 << v
        return Digraph(self.n, tuple(out))

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Vertex v becomes perm[v]."""
        out = [0] * self.n
        for u, v in self.edges():
            out[perm[u]] |= 1 << perm[v]
        return Digraph(self.n, tuple(out))

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        index = {v: i for i, v in enumerate(vertices)}
        return Digraph.from_edges(
            len(vertices),
            [(index[u], index[v]) for u in vertices for v in bits(self.out[u]) if v in index],
        )

    # -- serialization -------------------------------------------------------

    def to_text(self) -> str:
        return f"{self.n};" + ",".join(f"{u}->{v}" for u, v in self.edges())

    @classmethod
    def from_text(cls, text: str) -> "Digraph":
        m = re.fullmatch(r"\s*(\d+)\s*;\s*(.*?)\s*", text)
        if not m:
            raise ValueError(f"bad digraph literal {text!r}")
        n = int(m.group(1))
        edges = []
        if m.group(2):
            for tok in m.group(2).split(","):
                em = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*", tok)
                if not em:
                    raise ValueError(f"bad edge {tok!r} in {text!r}")
                edges.append((int(em.group(1)), int(em.group(2))))
        if len(set(edges)) != len(edges):
            raise ValueError(f"repeated edge in {text!r}")
        return cls.from_edges(n, edges)

    def to_hex(self) -> str:
        width = (self.n + 3) // 4
        return f"{self.n}:" + "".join(f"{m:0{width}x}" for m in self.out)

    @classmethod
    def from_hex(cls, text: str) -> "Digraph":
        head, _, body = text.partition(":")
        n = int(head)
        width = (n + 3) // 4
        if len(body) != n * width:
            raise ValueError(f"bad hex digraph {text!r}")
        return cls(n, tuple(int(body[i * width:(i + 1) * width], 16) for i in range(n)))

    def __str__(self) -> str:
        return self.to_text()
