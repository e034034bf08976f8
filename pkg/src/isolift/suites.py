"""Verification suites cross-checking refinement, polytopes and the LP engine."""
from __future__ import annotations

import hashlib
import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus_graphs as cg
from .exact_lp import ALL, INFEASIBLE, check_point, feasible, forced_zero_set, maximize
from .graph import Graph, format_graph, phi
from .oracle import enumerate_iso, integer_points
from .partition import (
    OrderedPartition,
    partition_nu,
    partition_rho,
    respects_order,
    trivial_partition,
)
from .polytopes import (
    LinearSystem,
    build_qpoly,
    build_tinhofer,
    extended_identity,
    mismatched_sets,
    mismatched_sets_padded,
    pairing,
    restrict_to_partition,
    uniform_point,
    var_name,
)
from .relations import (
    NOT_ISOMORPHIC,
    Kind,
    aut_run,
    fixpoint,
    iso_run,
    joint,
    rho_nu_correspondence_check,
    rho_nu_iso_check,
)

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"
SUITES = ("thm1", "thm2", "sandwich", "comb-equiv", "rho-nu", "appendix")
LP_MAX_N = 6


@dataclass
class SuiteConfig:
    seed: int = 0
    max_n: int = 6
    sample: int = 30
    k_values: tuple[int, ...] = (1, 2)
    workers: int = 1
    timing: bool = False


@dataclass
class Task:
    suite: str
    label: str
    graphs: list[Graph]
    k: int
    max_n: int = 6


@dataclass
class Instance:
    task: Task
    checks: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    def add(self, name: str, ok: bool | None, details: dict | None = None, repro: dict | None = None) -> None:
        outcome = SKIPPED if ok is None else PASS if ok else FAIL
        entry = {"name": name, "outcome": outcome}
        if details:
            entry["details"] = details
        if outcome == FAIL:
            entry["repro"] = {"graphs": [format_graph(g) for g in self.task.graphs], "k": self.task.k,
                              **(repro or {})}
        self.checks.append(entry)

    @property
    def key(self) -> str:
        h = hashlib.sha256(self.task.suite.encode())
        for g in self.task.graphs:
            h.update(g.digest().encode())
        h.update(f"k={self.task.k}:{self.task.label}".encode())
        return h.hexdigest()[:16]

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.key,
            "label": self.task.label,
            "graphs": [g.digest() for g in self.task.graphs],
            "n": self.task.graphs[0].n,
            "k": self.task.k,
            "checks": self.checks,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


# ---------------------------------------------------------------- appendix lemmas

def lemma_mapping(p: OrderedPartition) -> list[str]:
    """At a Delta-stable partition, substituting u_j at position i maps cells onto cells
    and |cell(u)| = |Delta^i(u) meets cell(u)| * |cell(u')|."""
    bad = []
    k, n = p.k, p.n
    for s, cell in enumerate(p.cells, start=1):
        for i, j in itertools.permutations(range(k), 2):
            u = cell[0]
            target = p.index[phi(u, i, u[j])]
            image = {phi(v, i, v[j]) for v in cell}
            if image != set(p.cells[target - 1]):
                bad.append(f"cell {s} positions ({i + 1},{j + 1}) image is not a cell")
            for v in cell:
                hits = sum(1 for w in range(n) if p.index[phi(v, i, w)] == s)
                if len(cell) != hits * len(p.cells[target - 1]):
                    bad.append(f"cell {s} tuple {v} positions ({i + 1},{j + 1}) size identity fails")
                    break
    return bad


def lemma_tuple_invariance(p: OrderedPartition) -> list[str]:
    sizes: dict = {}
    for cell in p.cells:
        for u in cell:
            sizes.setdefault(frozenset(u), set()).add(len(cell))
    return [f"entry set {sorted(e)} meets cells of sizes {sorted(s)}" for e, s in sizes.items() if len(s) > 1]


def lemma_tech(p: OrderedPartition, q: OrderedPartition) -> list[str]:
    bad = []
    for s, (cp, cq) in enumerate(zip(p.cells, q.cells), start=1):
        for i, j in itertools.product(range(p.k), repeat=2):
            left = {p.index[phi(u, i, u[j])] for u in cp}
            right = {q.index[phi(v, i, v[j])] for v in cq}
            if len(left | right) != 1:
                bad.append(f"cell {s} positions ({i + 1},{j + 1})")
    return bad


def lemma_set_sizes(p: OrderedPartition, q: OrderedPartition) -> list[str]:
    sizes: dict = {}
    for cp, cq in zip(p.cells, q.cells):
        for u in cp:
            for v in cq:
                i = pairing(u, v)
                if i is not None:
                    sizes.setdefault(i, set()).update((len(cp), len(cq)))
    return [f"{var_name(i)} sizes {sorted(s)}" for i, s in sizes.items() if len(s) > 1]


def lemma_supset(ls: LinearSystem, zeros) -> list[str]:
    if zeros == ALL:
        return []
    zs = set(zeros)
    bad = []
    for j in ls.variables:
        if len(j) < 2 or j in zs:
            continue
        for r in range(1, len(j)):
            if any(sub in zs for sub in itertools.combinations(j, r)):
                bad.append(f"{var_name(j)} not forced zero although a subset is")
                break
    return bad


def appendix_on_partition(inst: Instance, g: Graph, p: OrderedPartition, tag: str) -> None:
    for name, fn in (("mapping", lemma_mapping), ("tuple-invariance", lemma_tuple_invariance)):
        bad = fn(p)
        inst.add(f"appendix:{name}:{tag}", not bad, {"violations": bad[:5]} if bad else None,
                 {"partition": p.to_json()})


def appendix_on_pair(inst: Instance, p: OrderedPartition, q: OrderedPartition, tag: str) -> None:
    for name, fn in (("tech", lemma_tech), ("set-sizes", lemma_set_sizes)):
        bad = fn(p, q)
        inst.add(f"appendix:{name}:{tag}", not bad, {"violations": bad[:5]} if bad else None,
                 {"partitions": [p.to_json(), q.to_json()]})


# ---------------------------------------------------------------- helpers

def _off_diagonal_level1(ls: LinearSystem) -> dict[int, Fraction]:
    return {j: Fraction(1) for j, i in enumerate(ls.variables) if len(i) == 1 and i[0][0] != i[0][1]}


def _level1(ls: LinearSystem) -> list:
    return [i for i in ls.variables if len(i) == 1]


def _fz_json(z) -> object:
    return z if z == ALL else sorted(var_name(i) for i in z)


def _contained(a, b) -> bool:
    if b == ALL:
        return True
    if a == ALL:
        return False
    return set(a) <= set(b)


def _guard(inst: Instance, n: int, k: int, max_k: int = 2) -> bool:
    limit = min(inst.task.max_n, LP_MAX_N)
    if n > limit or k > max_k:
        inst.add("guard", None, {"reason": f"n={n}, k={k} outside LP limits n <= {limit}, k <= {max_k}"})
        return False
    return True


# ---------------------------------------------------------------- suite bodies

def run_thm1(inst: Instance) -> None:
    (g,), k = inst.task.graphs, inst.task.k
    res = aut_run(Kind.DELTA, g, k)
    appendix_on_partition(inst, g, res.partition, "delta")
    if not _guard(inst, g.n, k):
        return
    ls = build_tinhofer(g, g, k)
    ident = check_point(ls, extended_identity(ls))
    inst.add("identity-feasible", ident.ok, None if ident.ok else {"violations": ident.violations[:5]})
    opt = maximize(ls, _off_diagonal_level1(ls))
    collapse = opt.value == 0
    inst.add("complete-iff-collapse", res.complete == collapse,
             {"complete": res.complete, "cells": len(res.partition), "off_diagonal_max": str(opt.value)},
             {"partition": res.partition.to_json()})


def run_thm2(inst: Instance) -> None:
    (g, h), k = inst.task.graphs, inst.task.k
    iso = iso_run(Kind.WL, g, h, k)
    if iso.verdict == NOT_ISOMORPHIC and g.n <= 8:
        inst.add("oracle-soundness", not enumerate_iso(g, h))
    if iso.verdict != NOT_ISOMORPHIC:
        appendix_on_pair(inst, iso.left, iso.right, "wl")
    if not _guard(inst, g.n, k + 1, 3):
        return
    if k < 2:
        inst.add("wl-iff-infeasible", None, {"reason": "the equivalence is stated for k > 1"})
        return
    ls = build_qpoly(g, h, k + 1)
    v = feasible(ls)
    inst.add("wl-iff-infeasible", (iso.verdict == NOT_ISOMORPHIC) == (v.status == INFEASIBLE),
             {"wl": iso.verdict, "lp": v.status, **ls.metadata()})
    aut = aut_run(Kind.WL, g, k)
    lsg = build_qpoly(g, g, k + 1)
    opt = maximize(lsg, _off_diagonal_level1(lsg))
    inst.add("aut-complete-iff-collapse", aut.complete == (opt.value == 0),
             {"complete": aut.complete, "off_diagonal_max": str(opt.value)})


def run_sandwich(inst: Instance) -> None:
    (g, h), k = inst.task.graphs, inst.task.k
    if not _guard(inst, g.n, k + 1, 3):
        return
    upper = build_qpoly(g, h, k + 1)
    mid = build_tinhofer(g, h, k)
    low = build_qpoly(g, h, k)
    fu, fm, fl = feasible(upper), feasible(mid), feasible(low)
    st = {"Q_k+1": fu.status, "T_k": fm.status, "Q_k": fl.status}
    inst.add("feasibility-chain",
             (fu.status == INFEASIBLE or fm.status != INFEASIBLE) and
             (fm.status == INFEASIBLE or fl.status != INFEASIBLE), st)
    if fu.status != INFEASIBLE:
        proj = {i: fu.witness[i] for i in mid.variables}
        rep = check_point(mid, proj)
        inst.add("projection-into-T", rep.ok, None if rep.ok else {"violations": rep.violations[:5]})
    zl = forced_zero_set(low, _level1(low))
    zm = forced_zero_set(mid, _level1(mid))
    zu = forced_zero_set(upper, _level1(upper))
    inst.add("forced-zero-chain", _contained(zl, zm) and _contained(zm, zu),
             {"Q_k": _fz_json(zl), "T_k": _fz_json(zm), "Q_k+1": _fz_json(zu)})


def run_comb_equiv(inst: Instance) -> None:
    (g, h), k = inst.task.graphs, inst.task.k
    if not _guard(inst, g.n, k):
        return
    for flavor, kind, build in (("T", Kind.DELTA, build_tinhofer), ("Q", Kind.BIG_DELTA, build_qpoly)):
        jr = joint(kind, g, h, k)
        ls = build(g, h, k)
        zeros = forced_zero_set(ls)
        name = f"{flavor}/{kind.value}"
        repro = {"partitions": [jr.left.to_json(), jr.right.to_json()]}
        if not jr.matched:
            inst.add(f"{name}:empty-iff-inequivalent", zeros == ALL, {"forced_zero": _fz_json(zeros)}, repro)
            continue
        appendix_on_pair(inst, jr.left, jr.right, kind.value)
        expected = mismatched_sets(jr.left, jr.right)
        padded = mismatched_sets_padded(jr.left, jr.right, ls.variables)
        inst.add(f"{name}:padding-rule", padded == expected)
        inst.add(f"{name}:forced-zero-equals-mismatch", zeros == expected,
                 {"forced": len(zeros) if zeros != ALL else ALL, "mismatch": len(expected)}, repro)
        restricted = restrict_to_partition(ls, jr.left, jr.right)
        rz = forced_zero_set(restricted)
        inst.add(f"{name}:restricted-forced-zero", rz == expected, None, repro)
        pt = uniform_point(ls, jr.left, jr.right)
        rep = check_point(restricted, pt)
        inst.add(f"{name}:uniform-point", rep.ok,
                 None if rep.ok else {"violations": rep.violations[:5]}, repro)
        bad = lemma_supset(ls, zeros)
        inst.add(f"appendix:supset:{flavor}", not bad, {"violations": bad[:5]} if bad else None)
    if g.n <= 4 and k <= 2:
        isos = enumerate_iso(g, h)
        pts = integer_points(build_tinhofer(g, h, k))
        inst.add("integer-points", len(pts) == len(isos), {"points": len(pts), "isomorphisms": len(isos)})


def run_rho_nu(inst: Instance) -> None:
    (g, h), k = inst.task.graphs, inst.task.k
    res = rho_nu_correspondence_check(g, k)
    inst.add("rho-Delta-nu-equals-wl", res["equal"], res)
    stable = fixpoint(Kind.BIG_DELTA, g, trivial_partition(g.n, k))
    appendix_on_partition(inst, g, stable, "Delta")
    inst.add("rho-nu-identity-at-stable", partition_rho(partition_nu(stable)) == stable)
    start = fixpoint(Kind.C, g, trivial_partition(g.n, k))
    inst.add("rho-nu-refines", respects_order(partition_rho(partition_nu(start)), start))
    iso = rho_nu_iso_check(g, h, k)
    inst.add("wl-iff-lifted-Delta", iso["agree"], iso)


def run_appendix(inst: Instance) -> None:
    (g,), k = inst.task.graphs, inst.task.k
    from .oracle import orbit_partition
    for kind in (Kind.WL, Kind.DELTA, Kind.BIG_DELTA):
        p = fixpoint(kind, g, trivial_partition(g.n, k))
        appendix_on_partition(inst, g, p, kind.value)
        perm = list(range(g.n))[::-1]
        h = g.relabel(perm)
        jr = joint(kind, g, h, k)
        inst.add(f"relabel-equivalent:{kind.value}", jr.matched)
        if jr.matched:
            appendix_on_pair(inst, jr.left, jr.right, kind.value)
    if g.n <= 6 and k <= 3:
        orb = orbit_partition(g, k)
        op = OrderedPartition.from_cells(g.n, k, sorted((sorted(c) for c in orb)))
        appendix_on_partition(inst, g, op, "orbit")
    if g.n <= 4 and k <= 2:
        for flavor, build in (("T", build_tinhofer), ("Q", build_qpoly)):
            ls = build(g, g, k)
            bad = lemma_supset(ls, forced_zero_set(ls))
            inst.add(f"appendix:supset:{flavor}", not bad, {"violations": bad[:5]} if bad else None)


RUNNERS = {"thm1": run_thm1, "thm2": run_thm2, "sandwich": run_sandwich, "comb-equiv": run_comb_equiv,
           "rho-nu": run_rho_nu, "appendix": run_appendix}


def run_task(task: Task) -> Instance:
    inst = Instance(task)
    t0 = time.perf_counter()
    try:
        RUNNERS[task.suite](inst)
    except Exception as exc:  # a crash is a failed check, reported with a repro
        inst.add("exception", False, {"error": f"{type(exc).__name__}: {exc}"})
    inst.seconds = time.perf_counter() - t0
    return inst


# ---------------------------------------------------------------- corpora

def _small_classes(max_n: int) -> list[Graph]:
    return [g for n in range(1, min(max_n, 4) + 1) for g in cg.graph_classes(n)]


def pair_corpus(cfg: SuiteConfig) -> list[tuple[str, Graph, Graph]]:
    """Seeded random pairs on at most 5 vertices plus the pinned pairs."""
    import random
    ex = cg.pinned("example")
    rng = random.Random(f"{cfg.seed}:relabel")
    out = [("c6-vs-two-k3", cg.pinned("c6"), cg.pinned("two_k3")),
           ("example-relabel-1", ex, ex.relabel(cg.random_perm(rng, 4))),
           ("example-relabel-2", ex, ex.relabel(cg.random_perm(rng, 4))),
           ("example-vs-paw-variant", ex, cg.Graph.from_edges1(4, [(1, 2), (1, 3), (2, 3), (3, 4)])),
           ("p4-relabel", cg.pinned("p4"), cg.pinned("p4").relabel([3, 1, 2, 0])),
           ("k2-vs-e2", cg.pinned("k2"), cg.pinned("e2")),
           ("asym6-relabel", cg.pinned("asym6"), cg.pinned("asym6").relabel(cg.random_perm(rng, 6))),
           ("petersen-relabel", cg.pinned("petersen"), cg.pinned("petersen").relabel(cg.random_perm(rng, 10)))]
    sizes = [n for n in (4, 5) if n <= cfg.max_n]
    for t, (g, h) in enumerate(cg.random_pairs(cfg.seed, "pairs", cfg.sample, sizes)):
        out.append((f"random-pair-{t}", g, h))
    return out


def build_tasks(suite: str, cfg: SuiteConfig) -> list[Task]:
    tasks: list[Task] = []
    mk = lambda label, graphs, k: Task(suite, label, list(graphs), k, cfg.max_n)  # noqa: E731
    if suite == "thm1":
        graphs = [(f"class-n4-{t}", g) for t, g in enumerate(cg.graph_classes(4))]
        sizes = [n for n in (5, 6) if n <= cfg.max_n]
        if sizes:
            graphs += [(f"random-{t}", g) for t, g in
                       enumerate(cg.random_graphs(cfg.seed, "thm1", cfg.sample, sizes))]
        graphs += [(name, cg.pinned(name)) for name in ("example", "c6", "two_k3", "p4", "k4", "asym6", "petersen")]
        for label, g in graphs:
            for k in cfg.k_values:
                tasks.append(mk(label, [g], k))
    elif suite in ("thm2", "sandwich"):
        ks = [2] if suite == "thm2" else list(cfg.k_values)
        for label, g, h in pair_corpus(cfg):
            for k in ks:
                tasks.append(mk(label, [g, h], k))
    elif suite == "comb-equiv":
        import random
        rng = random.Random(f"{cfg.seed}:comb")
        classes = _small_classes(cfg.max_n)
        pairs = []
        for t, g in enumerate(classes):
            pairs.append((f"self-{g.n}-{t}", g, g))
            pairs.append((f"relabel-{g.n}-{t}", g, g.relabel(cg.random_perm(rng, g.n))))
        for (a, g), (b, h) in itertools.combinations(enumerate(classes), 2):
            if g.n == h.n and g.degree_sequence() == h.degree_sequence():
                pairs.append((f"cross-{a}-{b}", g, h))
        for label, g, h in pairs:
            for k in cfg.k_values:
                tasks.append(mk(label, [g, h], k))
    elif suite == "rho-nu":
        import random
        rng = random.Random(f"{cfg.seed}:rho-nu")
        graphs = [(f"class-{g.n}-{t}", g) for t, g in enumerate(_small_classes(cfg.max_n))]
        if cfg.max_n >= 5:
            graphs += [(f"random-{t}", g) for t, g in enumerate(cg.random_graphs(cfg.seed, "rho-nu", 20, [5]))]
        for label, g in graphs:
            h = g.relabel(cg.random_perm(rng, g.n))
            tasks.append(mk(label, [g, h], 2))
    elif suite == "appendix":
        graphs = [(f"class-{g.n}-{t}", g) for t, g in enumerate(_small_classes(cfg.max_n))]
        if cfg.max_n >= 5:
            graphs += [(f"random-{t}", g) for t, g in enumerate(cg.random_graphs(cfg.seed, "appendix", 10, [5]))]
        for label, g in graphs:
            for k in (1, 2, 3):
                if g.n ** k <= 125:
                    tasks.append(mk(label, [g], k))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return tasks


def run_suite(suite: str, cfg: SuiteConfig | None = None, tasks: list[Task] | None = None) -> dict:
    cfg = cfg or SuiteConfig()
    tasks = tasks if tasks is not None else build_tasks(suite, cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            insts = list(ex.map(run_task, tasks))
    else:
        insts = [run_task(t) for t in tasks]
    insts.sort(key=lambda i: i.key)
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for inst in insts:
        for c in inst.checks:
            counts[c["outcome"].lower()] += 1
    report = {"suite": suite, "seed": cfg.seed,
              "instances": [i.to_json(cfg.timing) for i in insts], "summary": counts}
    if cfg.timing:
        report["seconds"] = round(sum(i.seconds for i in insts), 3)
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True)
