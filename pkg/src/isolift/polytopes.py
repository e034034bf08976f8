"""Level-k Sherali-Adams systems for the Birkhoff, Tinhofer and Q polytopes.

Variables Y_I are indexed by consistent pair-sets I (partial bijections of
size at most k). Inconsistent sets are identically zero and never registered.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import Graph, Tuple, all_tuples
from .partition import OrderedPartition

VarSet = tuple[tuple[int, int], ...]
INCONSISTENT = None
EMPTY: VarSet = ()


def canon_varset(pairs: Iterable[tuple[int, int]]) -> VarSet | None:
    """Sorted, deduplicated pair-set, or None when it is not a partial bijection."""
    s = sorted(set((int(a), int(b)) for a, b in pairs))
    lefts = [a for a, _ in s]
    rights = [b for _, b in s]
    if len(set(lefts)) != len(s) or len(set(rights)) != len(s):
        return INCONSISTENT
    return tuple(s)


def pairing(u: Tuple, v: Tuple) -> VarSet | None:
    return canon_varset(zip(u, v))


def pad(i: VarSet, k: int) -> tuple[Tuple, Tuple]:
    """Canonical length-k tuple pair whose pairing is i (last pair repeated)."""
    if not i:
        raise ValueError("the empty set has no tuple pairing")
    ps = list(i) + [i[-1]] * (k - len(i))
    return tuple(a for a, _ in ps), tuple(b for _, b in ps)


def consistent_sets(n: int, size: int) -> list[VarSet]:
    out = []
    for left in itertools.combinations(range(n), size):
        for right in itertools.permutations(range(n), size):
            out.append(tuple(zip(left, right)))
    out.sort()
    return out


def count_inconsistent(n: int, k: int) -> int:
    """Pair-sets of size at most k that are not partial bijections."""
    total = sum(_comb(n * n, s) for s in range(k + 1))
    return total - sum(_comb(n, s) ** 2 * _fact(s) for s in range(k + 1))


def _comb(a: int, b: int) -> int:
    from math import comb
    return comb(a, b)


def _fact(a: int) -> int:
    from math import factorial
    return factorial(a)


@dataclass(frozen=True)
class Row:
    name: str
    coeffs: tuple[tuple[int, Fraction], ...]
    rel: str  # "=" or ">="
    const: Fraction = Fraction(0)

    def value(self, x: Mapping[int, Fraction]) -> Fraction:
        return sum((c * x.get(j, 0) for j, c in self.coeffs), Fraction(0)) + self.const


@dataclass
class LinearSystem:
    """Rows read  sum(coef * Y) + const  (= or >=)  0, every variable nonnegative."""
    n: int
    k: int
    flavor: str
    variables: list[VarSet]
    rows: list[Row]
    zero_fixed: frozenset[int] = frozenset()
    pre_zeroed: int = 0
    col: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.col:
            self.col = {v: j for j, v in enumerate(self.variables)}

    def column(self, i: VarSet) -> int | None:
        return self.col.get(i)

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def zero_fixed_sets(self) -> set[VarSet]:
        return {self.variables[j] for j in self.zero_fixed}

    def with_zero_fixes(self, extra: Iterable[int], flavor: str | None = None) -> "LinearSystem":
        return LinearSystem(self.n, self.k, flavor or self.flavor, self.variables, self.rows,
                            self.zero_fixed | frozenset(extra), self.pre_zeroed, self.col)

    def with_rows(self, extra: Iterable[Row]) -> "LinearSystem":
        return LinearSystem(self.n, self.k, self.flavor, self.variables,
                            self.rows + list(extra), self.zero_fixed, self.pre_zeroed, self.col)

    def metadata(self) -> dict:
        return {"flavor": self.flavor, "n": self.n, "k": self.k,
                "variables": self.num_vars, "rows": len(self.rows),
                "pre_zeroed": self.pre_zeroed, "zero_fixed": len(self.zero_fixed)}


class _Builder:
    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.variables: list[VarSet] = [EMPTY]
        for s in range(1, k + 1):
            self.variables += consistent_sets(n, s)
        self.col = {v: j for j, v in enumerate(self.variables)}
        self.rows: list[Row] = []
        self.seen: set = set()

    def add(self, name: str, terms: dict, rel: str = "=", const=Fraction(0)) -> None:
        coeffs = tuple(sorted((j, Fraction(c)) for j, c in terms.items() if c != 0))
        if not coeffs and const == 0:
            return
        if rel == "=" and coeffs and coeffs[0][1] < 0:
            key = (rel, tuple((j, -c) for j, c in coeffs), -const)
        else:
            key = (rel, coeffs, const)
        if key in self.seen:
            return
        self.seen.add(key)
        self.rows.append(Row(name, coeffs, rel, Fraction(const)))

    def term(self, terms: dict, pairs, coef: int) -> None:
        i = canon_varset(pairs)
        if i is not INCONSISTENT:
            j = self.col[i]
            terms[j] = terms.get(j, 0) + coef

    def lower_sets(self) -> list[VarSet]:
        return [v for v in self.variables if len(v) <= self.k - 1]


def _fmt_set(i: VarSet) -> str:
    return "{" + ",".join(f"({a + 1},{b + 1})" for a, b in i) + "}"


def build_birkhoff(n: int, k: int) -> LinearSystem:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    b = _Builder(n, k)
    b.add("unit", {0: 1}, "=", Fraction(-1))
    _birkhoff_rows(b)
    return LinearSystem(n, k, "B", b.variables, b.rows, frozenset(), count_inconsistent(n, k), b.col)


def _birkhoff_rows(b: _Builder) -> None:
    n = b.n
    for i in b.lower_sets():
        left = {a for a, _ in i}
        right = {c for _, c in i}
        for u in range(n):
            if u in left:
                continue
            t: dict = {b.col[i]: -1}
            for w in range(n):
                b.term(t, i + ((u, w),), 1)
            b.add(f"row{_fmt_set(i)}u{u + 1}", t)
        for v in range(n):
            if v in right:
                continue
            t = {b.col[i]: -1}
            for w in range(n):
                b.term(t, i + ((w, v),), 1)
            b.add(f"col{_fmt_set(i)}v{v + 1}", t)


def build_tinhofer(g: Graph, h: Graph, k: int) -> LinearSystem:
    if g.n != h.n:
        raise ValueError("graphs must have the same order")
    n = g.n
    b = _Builder(n, k)
    b.add("unit", {0: 1}, "=", Fraction(-1))
    _birkhoff_rows(b)
    for i in b.lower_sets():
        for u in range(n):
            for v in range(n):
                t: dict = {}
                for w in h.neighbors(v):
                    b.term(t, i + ((u, w),), 1)
                for w in g.neighbors(u):
                    b.term(t, i + ((w, v),), -1)
                b.add(f"adj{_fmt_set(i)}u{u + 1}v{v + 1}", t)
    return LinearSystem(n, k, "T", b.variables, b.rows, frozenset(), count_inconsistent(n, k), b.col)


def edge_mismatch(g: Graph, h: Graph, i: VarSet) -> bool:
    """Some two pairs map an edge to a non-edge or the reverse."""
    for (u1, v1), (u2, v2) in itertools.combinations(i, 2):
        if g.adjacent(u1, u2) != h.adjacent(v1, v2):
            return True
    return False


def build_qpoly(g: Graph, h: Graph, k: int) -> LinearSystem:
    if g.n != h.n:
        raise ValueError("graphs must have the same order")
    base = build_birkhoff(g.n, k)
    zeros = [j for j, i in enumerate(base.variables) if len(i) >= 2 and edge_mismatch(g, h, i)]
    return base.with_zero_fixes(zeros, "Q")


def mismatched_sets(p: OrderedPartition, q: OrderedPartition) -> set[VarSet]:
    """Consistent pair-sets equal to some pairing of tuples in different cells."""
    if p.n != q.n or p.k != q.k:
        raise ValueError("arity mismatch")
    tups = all_tuples(p.n, p.k)
    out = set()
    for u in tups:
        cu = p.index[u]
        for v in tups:
            if q.index[v] != cu:
                i = pairing(u, v)
                if i is not INCONSISTENT:
                    out.add(i)
    return out


def mismatched_sets_padded(p: OrderedPartition, q: OrderedPartition, sets: Iterable[VarSet]) -> set[VarSet]:
    out = set()
    for i in sets:
        if i:
            u, v = pad(i, p.k)
            if p.index[u] != q.index[v]:
                out.add(i)
    return out


def restrict_to_partition(ls: LinearSystem, p: OrderedPartition, q: OrderedPartition) -> LinearSystem:
    if p.k != ls.k or q.k != ls.k or p.n != ls.n or q.n != ls.n:
        raise ValueError("partition arity does not match the system")
    zeros = [ls.col[i] for i in mismatched_sets(p, q) if i in ls.col]
    return ls.with_zero_fixes(zeros, ls.flavor + "|P")


class IllDefinedPoint(ValueError):
    def __init__(self, varset: VarSet, values):
        super().__init__(f"variable {_fmt_set(varset)} receives values {sorted(values)}")
        self.varset = varset


def uniform_point(ls: LinearSystem, p: OrderedPartition, q: OrderedPartition) -> dict[VarSet, Fraction]:
    """Y_<u,v> = 1/|cell| when u and v sit in the same cell index, else 0."""
    vals: dict[VarSet, set] = {}
    tups = all_tuples(p.n, p.k)
    for u in tups:
        s = p.index[u]
        for v in tups:
            t = q.index[v]
            if s == t:
                if len(p.cells[s - 1]) != len(q.cells[t - 1]):
                    raise IllDefinedPoint(pairing(u, v) or (), {"unbalanced"})
                val = Fraction(1, len(p.cells[s - 1]))
            else:
                val = Fraction(0)
            i = pairing(u, v)
            if i is INCONSISTENT:
                if val:
                    raise IllDefinedPoint(tuple(zip(u, v)), {val, 0})
                continue
            vals.setdefault(i, set()).add(val)
    point = {EMPTY: Fraction(1)}
    for i in ls.variables:
        if not i:
            continue
        got = vals.get(i, {Fraction(0)})
        if len(got) != 1:
            raise IllDefinedPoint(i, got)
        point[i] = next(iter(got))
    return point


def extended_identity(ls: LinearSystem) -> dict[VarSet, Fraction]:
    return {i: Fraction(int(all(a == b for a, b in i))) for i in ls.variables}


def lift_permutation(ls: LinearSystem, perm) -> dict[VarSet, Fraction]:
    """Y_I = 1 iff every pair (a, b) of I has perm[a] = b."""
    return {i: Fraction(int(all(perm[a] == b for a, b in i))) for i in ls.variables}


def var_name(i: VarSet) -> str:
    return "Y_" + "".join(f"({a + 1},{b + 1})" for a, b in i)


_PAIR = re.compile(r"\((\d+),(\d+)\)")


def parse_var_name(s: str) -> VarSet:
    if not s.startswith("Y_"):
        raise ValueError(f"bad variable name {s!r}")
    body = s[2:]
    pairs = [(int(a) - 1, int(b) - 1) for a, b in _PAIR.findall(body)]
    if "".join(f"({a + 1},{b + 1})" for a, b in pairs) != body:
        raise ValueError(f"bad variable name {s!r}")
    return tuple(pairs)


def to_lp_text(ls: LinearSystem) -> str:
    out = [f"\\ flavor={ls.flavor} n={ls.n} k={ls.k}"]
    out.append("vars " + " ".join(var_name(i) for i in ls.variables))
    for r in ls.rows:
        terms = " ".join(f"{'+' if c > 0 else '-'}{abs(c)} {var_name(ls.variables[j])}" for j, c in r.coeffs)
        out.append(f"{r.name}: {terms} {r.rel} {-r.const}")
    for j in sorted(ls.zero_fixed):
        out.append(f"zero {var_name(ls.variables[j])}")
    return "\n".join(out) + "\n"


def parse_lp_text(text: str) -> LinearSystem:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("\\"):
        raise ValueError("missing header line")
    meta = dict(kv.split("=", 1) for kv in lines[0][1:].split())
    if not lines[1].startswith("vars"):
        raise ValueError("missing vars line")
    variables = [parse_var_name(t) for t in lines[1].split()[1:]]
    col = {v: j for j, v in enumerate(variables)}
    rows, zeros = [], set()
    for lineno, ln in enumerate(lines[2:], start=3):
        if ln.startswith("zero "):
            zeros.add(col[parse_var_name(ln.split()[1])])
            continue
        name, _, rest = ln.partition(":")
        toks = rest.split()
        if len(toks) < 2 or toks[-2] not in ("=", ">="):
            raise ValueError(f"line {lineno}: malformed row")
        rel, rhs = toks[-2], Fraction(toks[-1])
        body = toks[:-2]
        if len(body) % 2:
            raise ValueError(f"line {lineno}: malformed terms")
        coeffs = {}
        for c, v in zip(body[::2], body[1::2]):
            j = col[parse_var_name(v)]
            coeffs[j] = coeffs.get(j, 0) + Fraction(c)
        rows.append(Row(name.strip(), tuple(sorted(coeffs.items())), rel, -rhs))
    n, k = int(meta["n"]), int(meta["k"])
    return LinearSystem(n, k, meta["flavor"], variables, rows, frozenset(zeros),
                        count_inconsistent(n, k), col)


def metadata_json(ls: LinearSystem) -> str:
    return json.dumps(ls.metadata(), sort_keys=True)
