"""Walk through the 4-vertex example graph and the C6 / two-triangles pair.

Prints the orbit partition of V^2, the 2-dim WL fixpoint, the level-1 forced
zeros of the Tinhofer-type self-system, and how each relation and each LP
handles C6 versus K3+K3.
"""
from isolift import exact_lp
from isolift.corpus_graphs import pinned
from isolift.oracle import automorphisms, orbit_partition
from isolift.partition import trivial_partition
from isolift.polytopes import build_qpoly, build_tinhofer, var_name
from isolift.relations import Kind, aut_run, fixpoint, iso_run


def show_cells(cells):
    for t, c in enumerate(cells, start=1):
        print(f"  {t:>2}: " + " ".join(str(tuple(x + 1 for x in u)) for u in sorted(c)))


def main() -> None:
    g = pinned("example")
    print("example graph edges:", [(a + 1, b + 1) for a, b in g.sorted_edges()])
    print("automorphisms:", [[x + 1 for x in p] for p in automorphisms(g)])
    print("orbits on V^2:")
    show_cells(sorted(orbit_partition(g, 2), key=lambda c: min(c)))
    wl = fixpoint(Kind.WL, g, trivial_partition(4, 2))
    print(f"2-dim WL fixpoint ({len(wl)} cells):")
    show_cells(wl.cells)
    for kind in (Kind.DELTA, Kind.BIG_DELTA):
        r = aut_run(kind, g, 1)
        print(f"{kind.value} k=1: {len(r.partition)} cells, complete={r.complete}")

    t = build_tinhofer(g, g, 1)
    zeros = exact_lp.forced_zero_set(t, [v for v in t.variables if len(v) == 1])
    print("forced zeros of the level-1 self-system:", " ".join(var_name(v) for v in sorted(zeros)))

    c6, tk = pinned("c6"), pinned("two_k3")
    print("\nC6 vs K3+K3")
    for kind in (Kind.DELTA, Kind.WL, Kind.BIG_DELTA):
        for k in (1, 2):
            print(f"  {kind.value:<5} k={k}: {iso_run(kind, c6, tk, k).verdict}")
    for name, ls in (("T k=1", build_tinhofer(c6, tk, 1)), ("T k=2", build_tinhofer(c6, tk, 2)),
                     ("Q k=2", build_qpoly(c6, tk, 2)), ("Q k=3", build_qpoly(c6, tk, 3))):
        print(f"  {name}: {exact_lp.feasible(ls).status} ({ls.num_vars} variables, {len(ls.rows)} rows)")


if __name__ == "__main__":
    main()
