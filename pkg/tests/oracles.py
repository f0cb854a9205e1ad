"""Independent oracles: none of these call the library's path or enumeration code."""

from itertools import combinations

import networkx as nx


def path_topology(edges, leaf_of, four):
    """Topology code of a sorted 4-subset read literally off shared path vertices.

    Resolved p|q when the two paths share no vertex; unresolved when every
    pairing shares exactly one.  Anything else means the input is not a tree.
    """
    g = nx.Graph(edges)
    a, b, c, d = (leaf_of[t] for t in four)
    pairings = {1: ((a, b), (c, d)), 2: ((a, c), (b, d)), 3: ((a, d), (b, c))}
    shared = {
        code: set(nx.shortest_path(g, *p)) & set(nx.shortest_path(g, *q))
        for code, (p, q) in pairings.items()
    }
    disjoint = [code for code, s in shared.items() if not s]
    if len(disjoint) == 1:
        return disjoint[0]
    if not disjoint and all(len(s) == 1 for s in shared.values()):
        return 0
    raise AssertionError(f"not a tree configuration: {shared}")


def path_vector(tree):
    leaf_of = {i: i for i in range(tree.n)}
    return tuple(path_topology(tree.edges, leaf_of, f) for f in combinations(range(tree.n), 4))


def nontrivial_splits(n):
    """Bipartitions with at least two taxa per side, as the side avoiding taxon 0."""
    out = []
    rest = range(1, n)
    for size in range(2, n - 1):
        for side in combinations(rest, size):
            if n - size >= 2:
                out.append(frozenset(side))
    return out


def compatible(a, b, n):
    full = frozenset(range(n))
    return not (a & b) or not (a - b) or not (b - a) or not (full - a - b)


def split_systems(n):
    """All sets of pairwise compatible nontrivial splits (one per phylogeny)."""
    splits = nontrivial_splits(n)
    out = []

    def grow(chosen, start):
        out.append(tuple(chosen))
        for i in range(start, len(splits)):
            if all(compatible(splits[i], s, n) for s in chosen):
                grow(chosen + [splits[i]], i + 1)

    grow([], 0)
    return out


def split_vector(system, n):
    """Quartet codes implied by a split system: p|q iff some split separates p from q."""
    out = []
    for four in combinations(range(n), 4):
        a, b, c, d = four
        code = 0
        for topo, (p, q) in {1: ((a, b), (c, d)), 2: ((a, c), (b, d)), 3: ((a, d), (b, c))}.items():
            for s in system:
                if (p[0] in s) == (p[1] in s) and (q[0] in s) == (q[1] in s) and (p[0] in s) != (q[0] in s):
                    code = topo
        out.append(code)
    return tuple(out)


def double_factorial(m):
    return 1 if m <= 1 else m * double_factorial(m - 2)
