"""Ordered partitions of V^k and the generic refinement loop."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graph import Graph, Tuple, all_tuples, tuple_nu, tuple_rho

Signature = tuple


class RefinementError(RuntimeError):
    pass


@dataclass(frozen=True)
class OrderedPartition:
    n: int
    k: int
    cells: tuple[tuple[Tuple, ...], ...]
    index: dict = field(compare=False, repr=False, hash=False)

    @classmethod
    def from_cells(cls, n: int, k: int, cells: Iterable[Iterable[Tuple]]) -> "OrderedPartition":
        cs = tuple(tuple(sorted(tuple(u) for u in c)) for c in cells)
        index = {}
        for s, c in enumerate(cs):
            if not c:
                raise ValueError("empty cell")
            for u in c:
                if len(u) != k or not all(0 <= x < n for x in u):
                    raise ValueError(f"tuple {u} not in V^{k} for n={n}")
                if u in index:
                    raise ValueError(f"tuple {u} in two cells")
                index[u] = s + 1
        if len(index) != n ** k:
            raise ValueError("cells do not cover V^k")
        return cls(n, k, cs, index)

    @classmethod
    def from_keys(cls, n: int, k: int, key: Callable[[Tuple], object]) -> "OrderedPartition":
        """Cells are the classes of key, ordered by ascending key."""
        groups: dict = {}
        for u in all_tuples(n, k):
            groups.setdefault(key(u), []).append(u)
        return cls.from_cells(n, k, (groups[s] for s in sorted(groups)))

    def cell(self, u: Tuple) -> int:
        """1-based cell position of u."""
        return self.index[u]

    def __len__(self) -> int:
        return len(self.cells)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    def is_complete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def unordered(self) -> frozenset:
        return frozenset(frozenset(c) for c in self.cells)

    def to_json(self) -> dict:
        return {"k": self.k, "cells": [[[x + 1 for x in u] for u in c] for c in self.cells]}

    @classmethod
    def from_json(cls, n: int, obj: dict) -> "OrderedPartition":
        k = int(obj["k"])
        return cls.from_cells(n, k, ([tuple(x - 1 for x in u) for u in c] for c in obj["cells"]))


def trivial_partition(n: int, k: int) -> OrderedPartition:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return OrderedPartition.from_cells(n, k, [all_tuples(n, k)])


def complete_partition(n: int, k: int) -> OrderedPartition:
    return OrderedPartition.from_cells(n, k, ([u] for u in all_tuples(n, k)))


def _check_arity(p: OrderedPartition, q: OrderedPartition) -> None:
    if p.n != q.n or p.k != q.k:
        raise ValueError(f"arity mismatch: (n={p.n},k={p.k}) vs (n={q.n},k={q.k})")


def finer(p: OrderedPartition, q: OrderedPartition) -> bool:
    """Every cell of p lies inside one cell of q."""
    _check_arity(p, q)
    return all(len({q.index[u] for u in c}) == 1 for c in p.cells)


def equivalent(p: OrderedPartition, q: OrderedPartition) -> bool:
    _check_arity(p, q)
    return p.unordered() == q.unordered()


def respects_order(p: OrderedPartition, q: OrderedPartition) -> bool:
    """p refines q and the cell order of p is compatible with that of q."""
    if not finer(p, q):
        return False
    img = [q.index[c[0]] for c in p.cells]
    return all(a <= b for a, b in zip(img, img[1:]))


def balanced(p: OrderedPartition, q: OrderedPartition) -> bool:
    return p.sizes() == q.sizes()


def pair_refines(p: OrderedPartition, q: OrderedPartition,
                 p2: OrderedPartition, q2: OrderedPartition) -> bool:
    """[u]_p = [v]_q implies [u]_p2 = [v]_q2."""
    _check_arity(p, p2)
    _check_arity(q, q2)
    for s in range(min(len(p), len(q))):
        left = {p2.index[u] for u in p.cells[s]}
        right = {q2.index[v] for v in q.cells[s]}
        if len(left | right) != 1:
            return False
    return True


def compare(p: OrderedPartition, q: OrderedPartition) -> dict:
    return {
        "finer": finer(p, q),
        "equivalent": equivalent(p, q),
        "respects_order": respects_order(p, q),
        "balanced": balanced(p, q),
    }


SigFn = Callable[[Graph, OrderedPartition, Tuple], Signature]


def signatures(sig: SigFn, g: Graph, p: OrderedPartition) -> dict:
    out = {}
    for c in p.cells:
        for u in c:
            s = sig(g, p, u)
            if s[0] != p.index[u]:
                raise RefinementError(f"signature of {u} does not lead with its cell index")
            out[u] = s
    return out


def _from_sigs(p: OrderedPartition, sigs: dict) -> OrderedPartition:
    return OrderedPartition.from_keys(p.n, p.k, sigs.__getitem__)


def refine_round(sig: SigFn, g: Graph, p: OrderedPartition) -> OrderedPartition:
    return _from_sigs(p, signatures(sig, g, p))


def refine_fixpoint(sig: SigFn, g: Graph, p: OrderedPartition) -> tuple[OrderedPartition, int]:
    cap = p.n ** p.k
    rounds = 0
    while True:
        q = refine_round(sig, g, p)
        rounds += 1
        if len(q) == len(p):
            return q, rounds
        if rounds >= cap:
            raise RefinementError("refinement did not stabilise within n^k rounds")
        p = q


@dataclass
class JointResult:
    left: OrderedPartition
    right: OrderedPartition
    matched: bool
    rounds: int
    mismatch_round: int | None = None


def joint_fixpoint(sig: SigFn, g: Graph, p: OrderedPartition,
                   h: Graph, q: OrderedPartition) -> JointResult:
    """Refine both sides with a pooled signature order.

    matched stays True while every round produces the same signature multiset
    on both sides. The pooled order then coincides with each side's own order,
    so cell indices are comparable across graphs. After a mismatch each side
    keeps refining on its own to reach its fixed point.
    """
    _check_arity(p, q)
    matched = balanced(p, q)
    first_bad = None if matched else 0
    cap = p.n ** p.k
    rounds = 0
    done_p = done_q = False
    while not (done_p and done_q):
        rounds += 1
        if rounds > cap + 1:
            raise RefinementError("joint refinement did not stabilise")
        sp = signatures(sig, g, p) if not done_p else None
        sq = signatures(sig, h, q) if not done_q else None
        if matched:
            if Counter(sp.values()) != Counter(sq.values()):
                matched = False
                first_bad = rounds
        p2 = _from_sigs(p, sp) if not done_p else p
        q2 = _from_sigs(q, sq) if not done_q else q
        done_p = done_p or len(p2) == len(p)
        done_q = done_q or len(q2) == len(q)
        p, q = p2, q2
        if matched and done_p != done_q:
            matched = False
            first_bad = rounds
    return JointResult(p, q, matched, rounds, first_bad)


def partition_rho(p: OrderedPartition) -> OrderedPartition:
    """Order (k-1)-tuples by the cell of their last-entry duplication."""
    if p.k < 2:
        raise ValueError("rho needs arity at least 2")
    return OrderedPartition.from_keys(p.n, p.k - 1, lambda u: p.index[tuple_nu(u)])


def wl_column(p: OrderedPartition, u: Tuple, w: int) -> tuple[int, ...]:
    return tuple(p.index[u[:i] + (w,) + u[i + 1:]] for i in range(len(u)))


def partition_nu(p: OrderedPartition) -> OrderedPartition:
    """Order (k+1)-tuples by the cell of the prefix, then the column of the appended vertex."""
    def key(u):
        r = tuple_rho(u)
        return (p.index[r],) + wl_column(p, r, u[-1])
    return OrderedPartition.from_keys(p.n, p.k + 1, key)


def partition_from_vertex_cells(n: int, k: int, vcells: Sequence[Iterable[int]]) -> OrderedPartition:
    """Lift an ordered vertex partition to V^k by the tuple of entry cells."""
    where = {}
    for s, c in enumerate(vcells):
        for a in c:
            where[a] = s
    return OrderedPartition.from_keys(n, k, lambda u: tuple(where[x] for x in u))
