"""Brute-force ground truth for small graphs.

Everything here is written from the definitions and shares no refinement
code with the signature engine, so it can be used to check that engine.
"""
from __future__ import annotations

import itertools
from collections import Counter
from typing import Sequence

from .graph import Graph, Tuple, all_tuples, comb_matrix
from .partition import OrderedPartition


class GuardError(ValueError):
    pass


def _guard(ok: bool, msg: str) -> None:
    if not ok:
        raise GuardError(msg)


def _maps_partition(perm: Sequence[int], p: OrderedPartition | None, q: OrderedPartition | None) -> bool:
    if p is None:
        return True
    if len(p) != len(q):
        return False
    for s, cell in enumerate(p.cells):
        if {tuple(perm[x] for x in u) for u in cell} != set(q.cells[s]):
            return False
    return True


def enumerate_iso(g: Graph, h: Graph, p: OrderedPartition | None = None,
                  q: OrderedPartition | None = None) -> list[tuple[int, ...]]:
    """All bijections perm with {a,b} in E_g iff {perm a, perm b} in E_h, mapping cell s of p onto cell s of q."""
    _guard(g.n <= 8 and h.n <= 8, "enumerate_iso is limited to n <= 8")
    if g.n != h.n or len(g.edges) != len(h.edges) or g.degree_sequence() != h.degree_sequence():
        return []
    if (p is None) != (q is None):
        raise ValueError("give both partitions or neither")
    n = g.n
    out = []
    perm = [-1] * n
    used = [False] * n

    def extend(a: int) -> None:
        if a == n:
            if _maps_partition(perm, p, q):
                out.append(tuple(perm))
            return
        for b in range(n):
            if used[b] or g.degree(a) != h.degree(b):
                continue
            if all(g.adjacent(a, c) == h.adjacent(b, perm[c]) for c in range(a)):
                perm[a] = b
                used[b] = True
                extend(a + 1)
                used[b] = False
        perm[a] = -1

    extend(0)
    return out


def automorphisms(g: Graph, p: OrderedPartition | None = None) -> list[tuple[int, ...]]:
    return enumerate_iso(g, g, p, p)


def orbit_partition(g: Graph, k: int, p: OrderedPartition | None = None) -> frozenset:
    """Orbits of AUT(g, p) on V^k, as an unordered partition."""
    _guard(g.n <= 6 and k <= 3, "orbit_partition is limited to n <= 6, k <= 3")
    auts = automorphisms(g, p)
    seen: set = set()
    cells = []
    for u in all_tuples(g.n, k):
        if u in seen:
            continue
        orb = {tuple(perm[x] for x in u) for perm in auts}
        seen |= orb
        cells.append(frozenset(orb))
    return frozenset(cells)


def _classes_to_unordered(cls: dict) -> frozenset:
    groups: dict = {}
    for u, c in cls.items():
        groups.setdefault(c, set()).add(u)
    return frozenset(frozenset(s) for s in groups.values())


def naive_wl(g: Graph, k: int, start: frozenset | None = None) -> frozenset:
    """Literal k-dim WL: u, v stay together iff they share a class, the combinatorial
    matrix, the classes of the generator permutations, and some vertex bijection
    psi has phi_i(u,w) and phi_i(v,psi(w)) in the same class for all i."""
    _guard(g.n <= 6 and k <= 3, "naive_wl is limited to n <= 6, k <= 3")
    n = g.n
    tups = all_tuples(n, k)
    if start is None:
        cls = {u: 0 for u in tups}
    else:
        cls = {u: c for c, block in enumerate(sorted(start, key=min)) for u in block}

    def perms(u):
        if k == 1:
            return ()
        return ((u[1], u[0]) + u[2:], u[1:] + u[:1])

    while True:
        def same(u, v):
            if cls[u] != cls[v] or comb_matrix(g, u) != comb_matrix(g, v):
                return False
            if any(cls[a] != cls[b] for a, b in zip(perms(u), perms(v))):
                return False
            cu = Counter(tuple(cls[u[:i] + (w,) + u[i + 1:]] for i in range(k)) for w in range(n))
            cv = Counter(tuple(cls[v[:i] + (w,) + v[i + 1:]] for i in range(k)) for w in range(n))
            return cu == cv

        reps: list[Tuple] = []
        new = {}
        for u in tups:
            for r, rep in enumerate(reps):
                if same(u, rep):
                    new[u] = r
                    break
            else:
                new[u] = len(reps)
                reps.append(u)
        if len(reps) == len(set(cls.values())):
            return _classes_to_unordered(cls)
        cls = new


def integer_points(ls) -> list[dict]:
    """Lifted permutations passing every row of the system."""
    from .exact_lp import check_point
    from .polytopes import lift_permutation
    _guard(ls.n <= 4 and ls.k <= 2, "integer_points is limited to n <= 4, k <= 2")
    out = []
    for perm in itertools.permutations(range(ls.n)):
        pt = lift_permutation(ls, perm)
        if check_point(ls, pt).ok:
            out.append(pt)
    return out
