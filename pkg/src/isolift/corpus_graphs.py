"""Pinned graphs, exhaustive small classes and seeded random samples."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from importlib import resources

from .graph import Graph, parse_graph

PINNED = ("example", "c6", "two_k3", "p4", "k4", "k2", "e2", "petersen", "asym6")


def pinned(name: str) -> Graph:
    if name not in PINNED:
        raise KeyError(name)
    text = resources.files("isolift").joinpath(f"corpus/{name}.el").read_text()
    return parse_graph(text)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def canonical_form(g: Graph) -> tuple:
    best = None
    for perm in itertools.permutations(range(g.n)):
        es = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in g.edges))
        if best is None or es < best:
            best = es
    return (g.n, best)


@lru_cache(maxsize=None)
def graph_classes(n: int) -> tuple[Graph, ...]:
    """One representative (its canonical labelling) per isomorphism class on n vertices."""
    if n > 6:
        raise ValueError("exhaustive classes are limited to n <= 6")
    pairs = list(itertools.combinations(range(n), 2))
    seen = {}
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, (e for b, e in enumerate(pairs) if mask >> b & 1))
        key = canonical_form(g)
        if key not in seen:
            seen[key] = Graph.from_edges(n, key[1])
    return tuple(seen[k] for k in sorted(seen))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, (e for e in itertools.combinations(range(n), 2) if rng.random() < p))


def random_perm(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def random_graphs(seed: int, tag: str, count: int, sizes) -> list[Graph]:
    rng = random.Random(f"{seed}:{tag}")
    return [random_graph(rng, rng.choice(tuple(sizes))) for _ in range(count)]


def random_pairs(seed: int, tag: str, count: int, sizes) -> list[tuple[Graph, Graph]]:
    """Alternate isomorphic copies and graphs with the same edge count.

    The second kind is resampled a few times to prefer a non-isomorphic partner.
    """
    rng = random.Random(f"{seed}:{tag}")
    out = []
    for t in range(count):
        n = rng.choice(tuple(sizes))
        g = random_graph(rng, n)
        if t % 2 == 0:
            h = g.relabel(random_perm(rng, n))
        else:
            pairs = list(itertools.combinations(range(n), 2))
            for _ in range(20):
                h = Graph.from_edges(n, rng.sample(pairs, len(g.edges)))
                if canonical_form(h) != canonical_form(g):
                    break
        out.append((g, h))
    return out
