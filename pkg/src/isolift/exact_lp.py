"""Exact rational simplex for LinearSystems.

Every answer carries a certificate that is re-checked in exact arithmetic
against the original rows: a point for FEASIBLE, Farkas multipliers for
INFEASIBLE, and dual multipliers bounding the optimum for maximisation.

Pipeline: zero-forcing presolve (an equality row with zero right-hand side
whose remaining coefficients share a sign pins all its variables to zero),
then a two-phase tableau simplex with Bland's rule on the reduced rows.
Certificates found on the reduced rows are lifted back by replaying the
presolve steps in reverse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

from .polytopes import LinearSystem, Row, VarSet

FEASIBLE = "FEASIBLE"
INFEASIBLE = "INFEASIBLE"
OPTIMAL = "OPTIMAL"
ZERO = mpq(0)


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _f(x) -> Fraction:
    x = mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


class CertificateError(AssertionError):
    pass


@dataclass
class LPVerdict:
    status: str
    witness: dict[VarSet, Fraction] | None = None
    certificate: dict[str, Fraction] | None = None

    def to_json(self) -> dict:
        from .polytopes import var_name
        out: dict = {"status": self.status}
        if self.witness is not None:
            out["witness"] = {var_name(i): str(v) for i, v in sorted(self.witness.items()) if v}
        if self.certificate is not None:
            out["certificate"] = {k: str(v) for k, v in sorted(self.certificate.items()) if v}
        return out


@dataclass
class LPOptimum:
    status: str
    value: Fraction | None = None
    point: dict[VarSet, Fraction] | None = None
    dual: dict[str, Fraction] | None = None
    certificate: dict[str, Fraction] | None = None
    pre_zeroed: bool = False
    pivots: int = 0

    def to_json(self) -> dict:
        out = LPVerdict(FEASIBLE if self.status == OPTIMAL else self.status,
                        self.point, self.certificate).to_json()
        if self.value is not None:
            out["objective"] = str(self.value)
        return out


# ---------------------------------------------------------------- internal form

@dataclass
class _Problem:
    """Rows  sum a_j x_j (= or >=) b  over nonnegative columns 0..ncols-1."""
    ncols: int
    rows: list[dict[int, mpq]]
    rels: list[str]
    rhs: list[mpq]
    names: list[str]
    fixed: frozenset[int]


def _internal(ls: LinearSystem) -> _Problem:
    rows, rels, rhs, names = [], [], [], []
    for r in ls.rows:
        rows.append({j: _q(c) for j, c in r.coeffs})
        rels.append(r.rel)
        rhs.append(-_q(r.const))
        names.append(r.name)
    return _Problem(ls.num_vars, rows, rels, rhs, names, ls.zero_fixed)


@dataclass
class _Presolved:
    zero: set[int]
    steps: list[tuple[int, int, list[int]]]  # (row, sign, columns pinned)
    live: list[dict[int, mpq]]
    infeasible_row: int | None = None


def _presolve(pb: _Problem) -> _Presolved:
    zero = set(pb.fixed)
    live = [{j: c for j, c in r.items() if j not in zero} for r in pb.rows]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(live):
        for j in r:
            col_rows.setdefault(j, set()).add(i)
    steps = []
    queue = list(range(len(live)))
    queued = set(queue)
    while queue:
        i = queue.pop()
        queued.discard(i)
        r = live[i]
        if not r:
            if (pb.rels[i] == "=" and pb.rhs[i] != 0) or (pb.rels[i] == ">=" and pb.rhs[i] > 0):
                return _Presolved(zero, steps, live, i)
            continue
        if pb.rels[i] != "=" or pb.rhs[i] != 0:
            continue
        signs = {c > 0 for c in r.values()}
        if len(signs) != 1:
            continue
        cols = sorted(r)
        steps.append((i, 1 if signs.pop() else -1, cols))
        for j in cols:
            zero.add(j)
            for i2 in col_rows.pop(j, ()):
                live[i2].pop(j, None)
                if i2 not in queued:
                    queued.add(i2)
                    queue.append(i2)
    return _Presolved(zero, steps, live)


# ---------------------------------------------------------------- simplex core

class _Tableau:
    def __init__(self, rows, rhs, nstruct, nart_start):
        self.rows = rows            # list of dict col -> mpq
        self.rhs = rhs              # list of mpq, all >= 0
        self.basis = list(range(nart_start, nart_start + len(rows)))
        self.nstruct = nstruct      # columns < nstruct may enter
        self.red: dict[int, mpq] = {}
        self.z = ZERO
        self.pivots = 0

    def set_objective(self, cost: dict[int, mpq]) -> None:
        red = {j: c for j, c in cost.items() if c != 0}
        z = ZERO
        for i, bj in enumerate(self.basis):
            cb = cost.get(bj, ZERO)
            if cb == 0:
                continue
            z += cb * self.rhs[i]
            for j, a in self.rows[i].items():
                v = red.get(j, ZERO) - cb * a
                if v == 0:
                    red.pop(j, None)
                else:
                    red[j] = v
        self.red, self.z = red, z

    def pivot(self, p: int, q: int) -> None:
        rp = self.rows[p]
        piv = rp[q]
        if piv != 1:
            inv = 1 / piv
            for j in rp:
                rp[j] *= inv
            self.rhs[p] *= inv
        bp = self.rhs[p]
        for i, ri in enumerate(self.rows):
            if i == p:
                continue
            f = ri.get(q)
            if f is None:
                continue
            for j, a in rp.items():
                v = ri.get(j, ZERO) - f * a
                if v == 0:
                    ri.pop(j, None)
                else:
                    ri[j] = v
            if bp:
                self.rhs[i] -= f * bp
        f = self.red.get(q)
        if f is not None:
            red = self.red
            for j, a in rp.items():
                v = red.get(j, ZERO) - f * a
                if v == 0:
                    red.pop(j, None)
                else:
                    red[j] = v
            self.z += f * bp
        self.basis[p] = q
        self.pivots += 1

    def run(self) -> str:
        """Maximise with Bland's rule; returns OPTIMAL or UNBOUNDED."""
        while True:
            q = min((j for j, r in self.red.items() if r > 0 and j < self.nstruct), default=None)
            if q is None:
                return OPTIMAL
            best = None
            for i, ri in enumerate(self.rows):
                a = ri.get(q)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "UNBOUNDED"
            self.pivot(best[1], q)


@dataclass
class _Solve:
    status: str
    x: dict[int, mpq] = field(default_factory=dict)
    value: mpq | None = None
    farkas: list[mpq] | None = None   # multipliers over original rows
    dual: list[mpq] | None = None
    pivots: int = 0


def _solve(pb: _Problem, cost: dict[int, mpq] | None) -> _Solve:
    pre = _presolve(pb)
    m_all = len(pb.rows)
    if pre.infeasible_row is not None:
        y = [ZERO] * m_all
        i = pre.infeasible_row
        y[i] = mpq(1) if pb.rhs[i] > 0 else mpq(-1)
        return _Solve(INFEASIBLE, farkas=_lift_farkas(pb, pre, y))

    live_cols = sorted(set(j for r in pre.live for j in r))
    keep = [i for i, r in enumerate(pre.live) if r]
    pos = {j: t for t, j in enumerate(live_cols)}
    nstruct = len(live_cols)
    slack_of = {}
    for i in keep:
        if pb.rels[i] == ">=":
            slack_of[i] = nstruct + len(slack_of)
    nvar = nstruct + len(slack_of)
    rows, rhs, sign = [], [], []
    for t, i in enumerate(keep):
        r = {pos[j]: c for j, c in pre.live[i].items()}
        if i in slack_of:
            r[slack_of[i]] = mpq(-1)
        b = pb.rhs[i]
        s = 1
        if b < 0:
            s = -1
            r = {j: -c for j, c in r.items()}
            b = -b
        r[nvar + t] = mpq(1)
        rows.append(r)
        rhs.append(b)
        sign.append(s)
    tab = _Tableau(rows, rhs, nvar, nvar)
    m = len(rows)

    tab.set_objective({nvar + t: mpq(-1) for t in range(m)})
    tab.run()
    if tab.z < 0:
        # y_phase = c_B B^-1 ; reduced cost of artificial t is -1 - y_t
        y = [ZERO] * m_all
        for t, i in enumerate(keep):
            yt = -1 - tab.red.get(nvar + t, ZERO)
            y[i] = -yt * sign[t]
        return _Solve(INFEASIBLE, farkas=_lift_farkas(pb, pre, y), pivots=tab.pivots)

    # drive zero-level artificials out where a structural entry allows it
    for p, bj in enumerate(tab.basis):
        if bj >= nvar:
            q = min((j for j in tab.rows[p] if j < nvar), default=None)
            if q is not None:
                tab.pivot(p, q)

    value = None
    dual = None
    if cost:
        c = {pos[j]: v for j, v in cost.items() if j in pos and v != 0}
        tab.set_objective(c)
        if tab.run() != OPTIMAL:
            raise RuntimeError("unbounded objective on a bounded system")
        value = tab.z
        y = [ZERO] * m_all
        for t, i in enumerate(keep):
            y[i] = -tab.red.get(nvar + t, ZERO) * sign[t]
        dual = _lift_dual(pb, pre, y, cost)
    x = {}
    for i, bj in enumerate(tab.basis):
        if bj < nstruct and tab.rhs[i] != 0:
            x[live_cols[bj]] = tab.rhs[i]
    return _Solve(FEASIBLE, x=x, value=value, dual=dual, pivots=tab.pivots)


def _combined(pb: _Problem, y: list[mpq]) -> dict[int, mpq]:
    g: dict[int, mpq] = {}
    for i, yi in enumerate(y):
        if yi:
            for j, a in pb.rows[i].items():
                g[j] = g.get(j, ZERO) + yi * a
    return g


def _lift_farkas(pb: _Problem, pre: _Presolved, y: list[mpq]) -> list[mpq]:
    """Push combined coefficients of presolved columns down to <= 0."""
    g = _combined(pb, y)
    for i, s, cols in reversed(pre.steps):
        t = max((g.get(j, ZERO) / (s * pb.rows[i][j]) for j in cols), default=ZERO)
        if t > 0:
            y[i] -= t * s
            for j, a in pb.rows[i].items():
                g[j] = g.get(j, ZERO) - t * s * a
    return y + [-g.get(j, ZERO) for j in sorted(pb.fixed)]


def _lift_dual(pb: _Problem, pre: _Presolved, y: list[mpq], cost: dict[int, mpq]) -> list[mpq]:
    """Raise combined coefficients of presolved columns up to their cost."""
    g = _combined(pb, y)
    for i, s, cols in reversed(pre.steps):
        t = max(((cost.get(j, ZERO) - g.get(j, ZERO)) / (s * pb.rows[i][j]) for j in cols), default=ZERO)
        if t > 0:
            y[i] += t * s
            for j, a in pb.rows[i].items():
                g[j] = g.get(j, ZERO) + t * s * a
    return y + [cost.get(j, ZERO) - g.get(j, ZERO) for j in sorted(pb.fixed)]


# ---------------------------------------------------------------- certificates

def _multiplier_names(ls: LinearSystem) -> list[str]:
    from .polytopes import var_name
    return [r.name for r in ls.rows] + [f"zero {var_name(ls.variables[j])}" for j in sorted(ls.zero_fixed)]


def _expanded_rows(ls: LinearSystem) -> list[Row]:
    zero_rows = [Row(f"zero:{j}", ((j, Fraction(1)),), "=") for j in sorted(ls.zero_fixed)]
    return list(ls.rows) + zero_rows


def verify_farkas(ls: LinearSystem, cert: Mapping[str, Fraction]) -> bool:
    """Combination with nonnegative weight on >= rows, all coefficients <= 0, constant side > 0."""
    names = _multiplier_names(ls)
    rows = _expanded_rows(ls)
    if set(cert) - set(names):
        return False
    g: dict[int, Fraction] = {}
    b = Fraction(0)
    for name, r in zip(names, rows):
        y = Fraction(cert.get(name, 0))
        if not y:
            continue
        if r.rel == ">=" and y < 0:
            return False
        for j, a in r.coeffs:
            g[j] = g.get(j, 0) + y * a
        b += y * -r.const
    return all(v <= 0 for v in g.values()) and b > 0


def verify_dual_bound(ls: LinearSystem, objective: Mapping[int, Fraction],
                      dual: Mapping[str, Fraction], value: Fraction) -> bool:
    """A^T y >= c with y <= 0 on >= rows and b^T y = value, proving max <= value."""
    names = _multiplier_names(ls)
    rows = _expanded_rows(ls)
    g: dict[int, Fraction] = {}
    b = Fraction(0)
    for name, r in zip(names, rows):
        y = Fraction(dual.get(name, 0))
        if not y:
            continue
        if r.rel == ">=" and y > 0:
            return False
        for j, a in r.coeffs:
            g[j] = g.get(j, 0) + y * a
        b += y * -r.const
    cols = set(g) | set(objective)
    return all(g.get(j, 0) >= objective.get(j, 0) for j in cols) and b == value


@dataclass
class PointReport:
    ok: bool
    violations: list[str]
    residuals: dict[str, Fraction]

    def to_json(self) -> dict:
        return {"pass": self.ok, "violations": self.violations}


def check_point(ls: LinearSystem, point: Mapping[VarSet, Fraction]) -> PointReport:
    from .polytopes import var_name
    missing = [i for i in ls.variables if i not in point]
    if missing:
        raise KeyError(f"point misses {var_name(missing[0])}")
    x = {j: Fraction(point[i]) for j, i in enumerate(ls.variables)}
    bad, res = [], {}
    for r in ls.rows:
        v = r.value(x)
        res[r.name] = v
        if (r.rel == "=" and v != 0) or (r.rel == ">=" and v < 0):
            bad.append(r.name)
    for j in sorted(ls.zero_fixed):
        if x[j] != 0:
            bad.append(f"zero {var_name(ls.variables[j])}")
    for j, v in x.items():
        if v < 0:
            bad.append(f"nonneg {var_name(ls.variables[j])}")
    return PointReport(not bad, bad, res)


# ---------------------------------------------------------------- public API

def _point(ls: LinearSystem, x: Mapping[int, mpq]) -> dict[VarSet, Fraction]:
    return {i: (_f(x[j]) if j in x else Fraction(0)) for j, i in enumerate(ls.variables)}


def _cert(ls: LinearSystem, y: list[mpq]) -> dict[str, Fraction]:
    return {name: _f(v) for name, v in zip(_multiplier_names(ls), y) if v}


def feasible(ls: LinearSystem) -> LPVerdict:
    sol = _solve(_internal(ls), None)
    if sol.status == INFEASIBLE:
        cert = _cert(ls, sol.farkas)
        if not verify_farkas(ls, cert):
            raise CertificateError("Farkas certificate failed exact re-verification")
        return LPVerdict(INFEASIBLE, certificate=cert)
    pt = _point(ls, sol.x)
    rep = check_point(ls, pt)
    if not rep.ok:
        raise CertificateError(f"witness violates {rep.violations[:3]}")
    return LPVerdict(FEASIBLE, witness=pt)


def maximize(ls: LinearSystem, objective: Mapping[int, Fraction]) -> LPOptimum:
    """Exact maximum of a linear objective over columns, with a re-verified dual bound."""
    cost = {j: _q(v) for j, v in objective.items() if v}
    sol = _solve(_internal(ls), cost or None)
    if sol.status == INFEASIBLE:
        cert = _cert(ls, sol.farkas)
        if not verify_farkas(ls, cert):
            raise CertificateError("Farkas certificate failed exact re-verification")
        return LPOptimum(INFEASIBLE, certificate=cert, pivots=sol.pivots)
    pt = _point(ls, sol.x)
    rep = check_point(ls, pt)
    if not rep.ok:
        raise CertificateError(f"optimal point violates {rep.violations[:3]}")
    obj = {j: Fraction(v) for j, v in objective.items() if v}
    value = sum((obj[j] * pt[ls.variables[j]] for j in obj), Fraction(0))
    dual = None
    if cost:
        dual = _cert(ls, sol.dual)
        if _f(sol.value) != value or not verify_dual_bound(ls, obj, dual, value):
            raise CertificateError("dual bound failed exact re-verification")
    return LPOptimum(OPTIMAL, value, pt, dual, pivots=sol.pivots)


def max_var(ls: LinearSystem, i: VarSet) -> LPOptimum:
    from .polytopes import canon_varset
    j = ls.column(i)
    if j is None:
        if canon_varset(i) is None or canon_varset(i) != tuple(i):
            return LPOptimum(OPTIMAL, Fraction(0), pre_zeroed=True)
        raise KeyError(f"variable {i} not registered")
    return maximize(ls, {j: Fraction(1)})


ALL = "ALL"


def forced_zero_set(ls: LinearSystem, candidates: Iterable[VarSet] | None = None):
    """Registered variables among candidates whose maximum over the system is 0.

    Batched: maximise the sum of still-undecided candidates. A zero optimum
    (certified by the dual bound) settles all of them as forced zero;
    otherwise every candidate positive at the optimum is settled as not forced.
    Returns ALL when the system is infeasible.
    """
    cand = set(ls.variables[1:] if candidates is None else candidates)
    fixed = {ls.variables[j] for j in ls.zero_fixed}
    zeros = cand & fixed
    undecided = {ls.col[i] for i in cand - fixed if i in ls.col}
    probe = feasible(ls)
    if probe.status == INFEASIBLE:
        return ALL
    undecided -= {ls.col[i] for i, v in probe.witness.items() if v > 0}
    while undecided:
        opt = maximize(ls, {j: Fraction(1) for j in undecided})
        if opt.value == 0:
            zeros |= {ls.variables[j] for j in undecided}
            break
        undecided -= {j for j in undecided if opt.point[ls.variables[j]] > 0}
    return zeros
