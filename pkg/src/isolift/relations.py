"""Signature families for tuple refinement and the algorithms built on them."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import partial

from .graph import Graph, Tuple, comb_flat
from .partition import (
    JointResult,
    OrderedPartition,
    SigFn,
    balanced,
    joint_fixpoint,
    pair_refines,
    partition_nu,
    partition_rho,
    refine_fixpoint,
    refine_round,
    trivial_partition,
    wl_column,
)


class Kind(str, enum.Enum):
    C = "C"
    S = "S"
    DELTA = "delta"   # neighbour/non-neighbour counts (C-V-C generalised)
    BIG_DELTA = "Delta"  # all substitutions counted per cell
    WL = "wl"


ALGO_KINDS = {"cvc": Kind.DELTA, "delta": Kind.DELTA, "wl": Kind.WL, "Delta": Kind.BIG_DELTA}


def symmetric_part(p: OrderedPartition, u: Tuple) -> tuple[int, ...]:
    """Cells of u under the transposition (1 2) and the k-cycle; empty when k = 1."""
    k = len(u)
    if k == 1:
        return ()
    swapped = (u[1], u[0]) + u[2:]
    rotated = u[1:] + u[:1]
    return (p.index[swapped], p.index[rotated])


def comb_part(g: Graph, u: Tuple) -> tuple[int, ...]:
    return () if len(u) == 1 else comb_flat(g, u)


def delta_counts(g: Graph, p: OrderedPartition, u: Tuple) -> tuple[int, ...]:
    m = len(p)
    out: list[int] = []
    for i in range(len(u)):
        near = [0] * m
        far = [0] * m
        nb = g._adjset[u[i]]
        for w in range(g.n):
            c = p.index[u[:i] + (w,) + u[i + 1:]] - 1
            if w in nb:
                near[c] += 1
            else:
                far[c] += 1
        out += near
        if len(u) > 1:
            out += far
    return tuple(out)


def big_delta_counts(g: Graph, p: OrderedPartition, u: Tuple) -> tuple[int, ...]:
    m = len(p)
    out: list[int] = []
    for i in range(len(u)):
        cnt = [0] * m
        for w in range(g.n):
            cnt[p.index[u[:i] + (w,) + u[i + 1:]] - 1] += 1
        out += cnt
    return tuple(out)


def wl_columns(g: Graph, p: OrderedPartition, u: Tuple) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(wl_column(p, u, w) for w in range(g.n)))


def wl_part(g: Graph, p: OrderedPartition, u: Tuple) -> tuple[int, ...]:
    return tuple(x for col in wl_columns(g, p, u) for x in col)


_FAMILY = {Kind.DELTA: delta_counts, Kind.BIG_DELTA: big_delta_counts, Kind.WL: wl_part}


def signature(kind: Kind, g: Graph, p: OrderedPartition, u: Tuple) -> tuple[int, ...]:
    """Flat integer signature: cell index, then S part, C part and family part."""
    kind = Kind(kind)
    head = (p.index[u],)
    if kind is Kind.C:
        return head + comb_part(g, u)
    if kind is Kind.S:
        return head + symmetric_part(p, u)
    return head + symmetric_part(p, u) + comb_part(g, u) + _FAMILY[kind](g, p, u)


def sig_fn(kind: Kind) -> SigFn:
    return partial(signature, Kind(kind))


def fixpoint(kind: Kind, g: Graph, p: OrderedPartition) -> OrderedPartition:
    return refine_fixpoint(sig_fn(kind), g, p)[0]


class ContractViolation(ValueError):
    pass


def is_stable(kind: Kind, g: Graph, p: OrderedPartition) -> bool:
    return len(refine_round(sig_fn(kind), g, p)) == len(p)


def equiv_check(kind: Kind, g: Graph, p: OrderedPartition, h: Graph, q: OrderedPartition) -> bool:
    """Stable pair equivalence: balanced, and matched cells carry equal signatures."""
    if not is_stable(kind, g, p) or not is_stable(kind, h, q):
        raise ContractViolation("equiv_check needs stable partitions")
    if g.n != h.n or p.k != q.k or not balanced(p, q):
        return False
    f = sig_fn(kind)
    return all(f(g, p, a[0]) == f(h, q, b[0]) for a, b in zip(p.cells, q.cells))


@dataclass
class AutResult:
    partition: OrderedPartition
    complete: bool
    rounds: int


def aut_run(kind: Kind, g: Graph, k: int, p0: OrderedPartition | None = None) -> AutResult:
    p0 = p0 or trivial_partition(g.n, k)
    p, rounds = refine_fixpoint(sig_fn(kind), g, p0)
    return AutResult(p, p.is_complete(), rounds)


NOT_ISOMORPHIC = "NOT_ISOMORPHIC"
UNDECIDED = "UNDECIDED"


@dataclass
class IsoResult:
    verdict: str
    left: OrderedPartition | None
    right: OrderedPartition | None
    rounds: int


def iso_run(kind: Kind, g: Graph, h: Graph, k: int,
            p0: OrderedPartition | None = None, q0: OrderedPartition | None = None) -> IsoResult:
    if g.n != h.n:
        return IsoResult(NOT_ISOMORPHIC, None, None, 0)
    p0 = p0 or trivial_partition(g.n, k)
    q0 = q0 or trivial_partition(h.n, k)
    if not balanced(p0, q0):
        return IsoResult(NOT_ISOMORPHIC, p0, q0, 0)
    jr = joint_fixpoint(sig_fn(kind), g, p0, h, q0)
    verdict = UNDECIDED if jr.matched else NOT_ISOMORPHIC
    return IsoResult(verdict, jr.left, jr.right, jr.rounds)


def joint(kind: Kind, g: Graph, h: Graph, k: int,
          p0: OrderedPartition | None = None, q0: OrderedPartition | None = None) -> JointResult:
    p0 = p0 or trivial_partition(g.n, k)
    q0 = q0 or trivial_partition(h.n, k)
    return joint_fixpoint(sig_fn(kind), g, p0, h, q0)


def implication_chain_check(g: Graph, h: Graph, k: int,
                            p0: OrderedPartition | None = None,
                            q0: OrderedPartition | None = None) -> dict:
    """WL-equiv implies delta-equiv implies Delta-equiv, with the matching partition chain."""
    res = {kd: joint(kd, g, h, k, p0, q0) for kd in (Kind.WL, Kind.DELTA, Kind.BIG_DELTA)}
    wl, de, bd = res[Kind.WL], res[Kind.DELTA], res[Kind.BIG_DELTA]
    violations = []
    if wl.matched and not de.matched:
        violations.append("wl-equivalent but not delta-equivalent")
    if de.matched and not bd.matched:
        violations.append("delta-equivalent but not Delta-equivalent")
    if wl.matched and de.matched and not pair_refines(wl.left, wl.right, de.left, de.right):
        violations.append("wl pair does not refine delta pair")
    if de.matched and bd.matched and not pair_refines(de.left, de.right, bd.left, bd.right):
        violations.append("delta pair does not refine Delta pair")
    return {
        "equiv": {kd.value: r.matched for kd, r in res.items()},
        "cells": {kd.value: len(r.left) for kd, r in res.items()},
        "violations": violations,
    }


def rho_nu_sides(g: Graph, p: OrderedPartition) -> tuple[OrderedPartition, OrderedPartition]:
    """(rho of the Delta fixed point of nu(p) over V^{k+1}, WL fixed point of p over V^k)."""
    lifted = fixpoint(Kind.BIG_DELTA, g, partition_nu(p))
    return partition_rho(lifted), fixpoint(Kind.WL, g, p)


def rho_nu_correspondence_check(g: Graph, k: int, p: OrderedPartition | None = None) -> dict:
    if k < 2:
        raise ValueError("the correspondence needs k > 1")
    p = p or trivial_partition(g.n, k)
    left, right = rho_nu_sides(g, p)
    return {"equal": left.unordered() == right.unordered(),
            "cells_rho_side": len(left), "cells_wl_side": len(right)}


def rho_nu_iso_check(g: Graph, h: Graph, k: int) -> dict:
    """WL-equivalence at arity k against Delta-equivalence at arity k+1."""
    wl = joint(Kind.WL, g, h, k).matched
    bd = joint(Kind.BIG_DELTA, g, h, k + 1).matched
    return {"wl": wl, "Delta_lifted": bd, "agree": wl == bd}
