"""Simple undirected graphs, vertex tuples and the tuple maps built on them.

Vertices are 0-based internally. Text I/O uses 1-based labels.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Tuple = tuple[int, ...]


class GraphParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adjacency: tuple[tuple[int, ...], ...] = field(compare=False, repr=False)
    _adjset: tuple[frozenset[int], ...] = field(compare=False, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from 0-based edge pairs; duplicates collapse, self-loops are rejected."""
        if n < 1:
            raise ValueError("n must be positive")
        es = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a},{b}) out of range")
            es.add((min(a, b), max(a, b)))
        nb: list[set[int]] = [set() for _ in range(n)]
        for a, b in es:
            nb[a].add(b)
            nb[b].add(a)
        return cls(n, frozenset(es), tuple(tuple(sorted(s)) for s in nb),
                   tuple(frozenset(s) for s in nb))

    @classmethod
    def from_edges1(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls.from_edges(n, ((a - 1, b - 1) for a, b in edges))

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._adjset[a]

    def neighbors(self, a: int) -> tuple[int, ...]:
        return self.adjacency[a]

    def degree(self, a: int) -> int:
        return len(self.adjacency[a])

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(len(a) for a in self.adjacency))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under the vertex map a -> perm[a]."""
        return Graph.from_edges(self.n, ((perm[a], perm[b]) for a, b in self.edges))

    def digest(self) -> str:
        h = hashlib.sha256(f"{self.n}:".encode())
        h.update(";".join(f"{a + 1}-{b + 1}" for a, b in self.sorted_edges()).encode())
        return h.hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


def parse_graph(text: str) -> Graph:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphParseError(1, "empty document")
    hline, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise GraphParseError(hline, f"expected 'n m', got {header!r}")
    n, m = int(parts[0]), int(parts[1])
    if n < 1:
        raise GraphParseError(hline, "n must be at least 1")
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else hline + 1)
        raise GraphParseError(where, f"expected {m} edge lines, found {len(body)}")
    edges = []
    for ln, s in body:
        ps = s.split()
        if len(ps) != 2 or not all(p.lstrip("-").isdigit() for p in ps):
            raise GraphParseError(ln, f"malformed edge {s!r}")
        a, b = int(ps[0]), int(ps[1])
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphParseError(ln, f"vertex out of range 1..{n} in {s!r}")
        if a == b:
            raise GraphParseError(ln, f"self-loop at vertex {a}")
        edges.append((a - 1, b - 1))
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    es = g.sorted_edges()
    out = [f"{g.n} {len(es)}"] + [f"{a + 1} {b + 1}" for a, b in es]
    return "\n".join(out) + "\n"


def all_tuples(n: int, k: int) -> list[Tuple]:
    """V^k in row-major lexicographic order."""
    return list(itertools.product(range(n), repeat=k))


def phi(u: Tuple, i: int, w: int) -> Tuple:
    """Replace entry i (0-based position) of u by w."""
    if not 0 <= i < len(u):
        raise IndexError(f"position {i} out of range for arity {len(u)}")
    return u[:i] + (w,) + u[i + 1:]


def comb_matrix(g: Graph, u: Tuple) -> tuple[tuple[int, ...], ...]:
    k = len(u)
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            if u[i] == u[j]:
                row.append(0)
            else:
                row.append(1 if g.adjacent(u[i], u[j]) else -1)
        rows.append(tuple(row))
    return tuple(rows)


def comb_flat(g: Graph, u: Tuple) -> tuple[int, ...]:
    return tuple(x for row in comb_matrix(g, u) for x in row)


def tuple_rho(u: Tuple) -> Tuple:
    if len(u) < 2:
        raise ValueError("rho needs arity at least 2")
    return u[:-1]


def tuple_nu(u: Tuple) -> Tuple:
    if len(u) < 1:
        raise ValueError("nu needs arity at least 1")
    return u + (u[-1],)


def neighborhood_sets(g: Graph, u: Tuple, i: int) -> tuple[list[Tuple], list[Tuple], list[Tuple]]:
    """(delta, delta-bar, Delta) sets at position i; delta uses neighbours of u[i]."""
    big = [phi(u, i, w) for w in range(g.n)]
    small = [phi(u, i, w) for w in g.neighbors(u[i])]
    nb = set(g.neighbors(u[i]))
    bar = [phi(u, i, w) for w in range(g.n) if w not in nb]
    return small, bar, big


def to1(u: Tuple) -> Tuple:
    return tuple(x + 1 for x in u)


def to0(u: Sequence[int]) -> Tuple:
    return tuple(int(x) - 1 for x in u)
