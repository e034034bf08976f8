"""Independent feasibility oracle for small systems: brute-force vertex enumeration.

Shares nothing with the simplex code beyond the LinearSystem container.
"""
import itertools
import random
from fractions import Fraction

from isolift.corpus_graphs import random_graph
from isolift.polytopes import LinearSystem, Row, build_birkhoff, build_qpoly, build_tinhofer


def _solve_square(a, b):
    """Unique solution of a x = b or None if singular."""
    m = len(a)
    aug = [list(r) + [v] for r, v in zip(a, b)]
    for c in range(m):
        piv = next((r for r in range(c, m) if aug[r][c] != 0), None)
        if piv is None:
            return None
        aug[c], aug[piv] = aug[piv], aug[c]
        for r in range(m):
            if r != c and aug[r][c] != 0:
                f = aug[r][c] / aug[c][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [aug[i][m] / aug[i][i] for i in range(m)]


def _independent_rows(rows):
    """Greedy maximal independent subset of (coeffs, rhs), or None if inconsistent."""
    basis, keep = [], []
    for coeffs, rhs in rows:
        v = list(coeffs) + [rhs]
        for piv_col, bv in basis:
            if v[piv_col] != 0:
                f = v[piv_col] / bv[piv_col]
                v = [x - f * y for x, y in zip(v, bv)]
        lead = next((j for j in range(len(coeffs)) if v[j] != 0), None)
        if lead is None:
            if v[-1] != 0:
                return None
            continue
        basis.append((lead, v))
        keep.append((coeffs, rhs))
    return keep


def vertices(ls: LinearSystem):
    """All vertices of the system's polyhedron, as dicts column -> Fraction."""
    live = [j for j in range(ls.num_vars) if j not in ls.zero_fixed]
    pos = {j: t for t, j in enumerate(live)}
    m = len(live)
    eqs, ineqs = [], []
    for r in ls.rows:
        coeffs = [Fraction(0)] * m
        for j, c in r.coeffs:
            if j in pos:
                coeffs[pos[j]] += c
        (eqs if r.rel == "=" else ineqs).append((coeffs, -r.const))
    eqs = _independent_rows(eqs)
    if eqs is None:
        return []
    for t in range(m):
        unit = [Fraction(0)] * m
        unit[t] = Fraction(1)
        ineqs.append((unit, Fraction(0)))
    need = m - len(eqs)
    out = []
    for tight in itertools.combinations(ineqs, need):
        sys_ = eqs + list(tight)
        x = _solve_square([c for c, _ in sys_], [b for _, b in sys_]) if m else []
        if x is None:
            continue
        if all(v >= 0 for v in x) and all(
                sum(c * v for c, v in zip(co, x)) >= b for co, b in ineqs):
            pt = {j: x[pos[j]] for j in live}
            pt.update({j: Fraction(0) for j in ls.zero_fixed})
            if pt not in out:
                out.append(pt)
    return out


def naive_feasible(ls: LinearSystem) -> bool:
    return bool(vertices(ls))


def fragment(rng: random.Random, max_live: int = 5, max_rows: int = 6) -> LinearSystem:
    """Random row subset of a small B/T/Q system, most columns zero-fixed."""
    n = rng.randint(1, 3)
    k = rng.randint(1, 2)
    flavor = rng.choice("BTQ")
    if flavor == "B":
        ls = build_birkhoff(n, k)
    else:
        g, h = random_graph(rng, n), random_graph(rng, n)
        ls = (build_tinhofer if flavor == "T" else build_qpoly)(g, h, k)
    free = [j for j in range(ls.num_vars) if j not in ls.zero_fixed]
    live = set(rng.sample(free, min(len(free), rng.randint(1, max_live))))
    if rng.random() < 0.7:
        live.add(0)
    rows = [r for r in ls.rows if any(j in live for j, _ in r.coeffs)] or list(ls.rows)
    rows = rng.sample(rows, min(len(rows), rng.randint(1, max_rows)))
    fixed = frozenset(j for j in range(ls.num_vars) if j not in live)
    return LinearSystem(ls.n, ls.k, ls.flavor + "~", ls.variables, rows, fixed, ls.pre_zeroed)


def dense_system(rng: random.Random, ncols: int = 4, nrows: int = 4, bounded: bool = True) -> LinearSystem:
    """Random small integer system over anonymous columns."""
    variables = [((0, j),) for j in range(ncols)]
    rows = []
    for r in range(nrows):
        coeffs = tuple((j, Fraction(rng.randint(-2, 2))) for j in range(ncols))
        coeffs = tuple(t for t in coeffs if t[1])
        rows.append(Row(f"r{r}", coeffs, rng.choice(["=", ">=", ">="]), Fraction(rng.randint(-3, 3))))
    if bounded:
        rows.append(Row("cap", tuple((j, Fraction(-1)) for j in range(ncols)), ">=", Fraction(5)))
    return LinearSystem(1, 1, "R", variables, rows)
