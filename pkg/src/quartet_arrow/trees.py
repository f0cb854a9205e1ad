"""Phylogenies on a labelled leaf set: validation, canonical codes, enumeration.

A phylogeny is an unrooted tree with no degree-2 vertex whose leaves carry
distinct taxon labels.  Internally every tree is normalised so that vertex
``i`` for ``i < n`` is the leaf carrying taxon ``i``; internal vertices follow.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import DegreeTwoVertex, LeafLabelMismatch, NotTree, TooManyLeaves, UnknownTaxon

MAX_LEAVES = 7

_NAME_RE = re.compile(r"^[A-Za-z0-9]+$")


class Taxon(NamedTuple):
    name: str
    index: int


@dataclass(frozen=True)
class LeafSet:
    """Ordered set of taxon names; the order fixes taxon indices."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("a leaf set needs at least one taxon")
        for name in names:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise ValueError(f"taxon names must be nonempty ASCII alphanumeric, got {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate taxon names in {names}")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(names)})

    @classmethod
    def of(cls, names: Iterable[str] | str) -> LeafSet:
        """Build from an iterable of names; a plain string is split into characters."""
        return cls(tuple(names))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def taxa(self) -> tuple[Taxon, ...]:
        return tuple(Taxon(name, i) for i, name in enumerate(self.names))

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, taxon: str | int) -> int:
        if isinstance(taxon, int):
            if 0 <= taxon < self.n:
                return taxon
            raise UnknownTaxon(f"taxon index {taxon} out of range for {self.n} leaves")
        try:
            return self._index[taxon]
        except KeyError:
            raise UnknownTaxon(f"unknown taxon {taxon!r}; leaves are {', '.join(self.names)}") from None

    def indices(self, taxa: Iterable[str | int]) -> tuple[int, ...]:
        return tuple(self.index(t) for t in taxa)

    def name(self, index: int) -> str:
        return self.names[index]


@dataclass(frozen=True, eq=False)
class Phylogeny:
    """Validated phylogeny.  Equality and hashing go through the canonical code.

    Build instances with :func:`validate` (or the Newick parser); the raw
    constructor trusts its input.
    """

    leaves: LeafSet
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.leaves.n

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v)

    @property
    def internal_vertices(self) -> range:
        return range(self.n, self.vertex_count)

    @property
    def internal_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, v in self.edges if u >= self.n and v >= self.n)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def is_binary(self) -> bool:
        return all(self.degree(v) == 3 for v in self.internal_vertices)

    @cached_property
    def code(self) -> bytes:
        return canonical_code(self)

    @cached_property
    def _parents(self) -> tuple[tuple[int, ...], ...]:
        # BFS parent array rooted at each leaf
        out = []
        for root in range(self.n):
            parent = [-1] * self.vertex_count
            parent[root] = root
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if parent[w] == -1:
                        parent[w] = u
                        queue.append(w)
            out.append(tuple(parent))
        return tuple(out)

    def path(self, a: int, b: int) -> tuple[int, ...]:
        """Vertices on the path from leaf ``a`` to leaf ``b`` (taxon indices), endpoints included."""
        parent = self._parents[a]
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        out.reverse()
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Phylogeny):
            return NotImplemented
        return self.leaves == other.leaves and self.code == other.code

    def __hash__(self):
        return hash((self.leaves.names, self.code))

    def __repr__(self):
        from .newick import write_newick

        return f"Phylogeny({write_newick(self)!r})"

    def relabel(self, mapping: Mapping[str, str]) -> Phylogeny:
        """Rename taxa; ``mapping`` must be a permutation of the leaf names."""
        if sorted(mapping) != sorted(self.leaves.names) or sorted(mapping.values()) != sorted(self.leaves.names):
            raise ValueError("relabel mapping must permute the leaf names")
        edges = [(self._vname(u, mapping), self._vname(v, mapping)) for u, v in self.edges]
        leaf_map = {name: ("leaf", name) for name in self.leaves.names}
        return validate(edges, self.leaves, leaf_map)

    def _vname(self, v, mapping):
        return ("leaf", mapping[self.leaves.names[v]]) if v < self.n else ("node", v)


def validate(
    edges: Iterable[tuple[Hashable, Hashable]],
    leaves: LeafSet,
    leaf_map: Mapping[str, Hashable] | None = None,
) -> Phylogeny:
    """Check a raw vertex/edge structure and return the normalised phylogeny.

    ``leaf_map`` sends each taxon name to its vertex id; when omitted, vertices
    whose id equals a taxon name are taken as the leaves.
    """
    edges = [tuple(e) for e in edges]
    if leaf_map is None:
        leaf_map = {name: name for name in leaves.names}
    if set(leaf_map) != set(leaves.names):
        missing = sorted(set(leaves.names) - set(leaf_map))
        extra = sorted(set(leaf_map) - set(leaves.names))
        raise LeafLabelMismatch(f"leaf labels differ from leaf set (missing {missing}, unexpected {extra})")
    if len(set(leaf_map.values())) != len(leaf_map):
        raise LeafLabelMismatch("two taxa are mapped to the same vertex")

    vertices: dict[Hashable, list[Hashable]] = {v: [] for v in leaf_map.values()}
    for e in edges:
        if len(e) != 2 or e[0] == e[1]:
            raise NotTree(f"bad edge {e!r}")
        u, v = e
        vertices.setdefault(u, []).append(v)
        vertices.setdefault(v, []).append(u)
    if len(edges) != len(vertices) - 1:
        raise NotTree(f"{len(vertices)} vertices but {len(edges)} edges")
    # connectivity (with the edge count this also rules out cycles and multi-edges)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in vertices[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(vertices):
        raise NotTree("graph is disconnected")

    leaf_vertices = set(leaf_map.values())
    if leaves.n > 1:
        for name, v in leaf_map.items():
            if len(vertices[v]) != 1:
                raise LeafLabelMismatch(f"taxon {name} sits on a vertex of degree {len(vertices[v])}")
    for v, nbrs in vertices.items():
        if v in leaf_vertices:
            continue
        if len(nbrs) == 1:
            raise LeafLabelMismatch(f"unlabelled vertex {v!r} has degree 1")
        if len(nbrs) == 2:
            raise DegreeTwoVertex(f"vertex {v!r} has degree 2")

    order = [leaf_map[name] for name in leaves.names]
    order += sorted((v for v in vertices if v not in leaf_vertices), key=repr)
    number = {v: i for i, v in enumerate(order)}
    adjacency = tuple(tuple(sorted(number[w] for w in vertices[v])) for v in order)
    return Phylogeny(leaves, adjacency)


def _from_edges(leaves: LeafSet, edges: Sequence[tuple[int, int]]) -> Phylogeny:
    """Fast path for internally generated trees already using normalised leaf ids."""
    return validate(edges, leaves, {name: i for i, name in enumerate(leaves.names)})


def canonical_code(tree: Phylogeny) -> bytes:
    """Code identifying ``tree`` up to label-preserving isomorphism.

    Minimum over rootings at internal vertices of a nested encoding in which
    leaves are written as taxon indices and sibling subtrees are sorted.
    """
    adj = tree.adjacency
    n = tree.n

    def encode(v, parent):
        if v < n and parent is not None:
            return str(v)
        parts = sorted(encode(w, v) for w in adj[v] if w != parent)
        return "(" + ",".join(parts) + ")"

    roots = list(tree.internal_vertices) or [0]
    return min(encode(r, None) for r in roots).encode("ascii")


def star_tree(leaves: LeafSet) -> Phylogeny:
    center = leaves.n
    return _from_edges(leaves, [(i, center) for i in range(leaves.n)])


def _binary_edge_lists(n: int) -> list[list[tuple[int, int]]]:
    # leaf-by-leaf insertion into every edge, starting from the 3-leaf star
    trees = [[(0, n), (1, n), (2, n)]]
    next_internal = n + 1
    for leaf in range(3, n):
        grown = []
        for edges in trees:
            for i, (u, v) in enumerate(edges):
                m = next_internal
                new = edges[:i] + edges[i + 1 :] + [(u, m), (m, v), (m, leaf)]
                grown.append(new)
        trees = grown
        next_internal += 1
    return trees


def _contract(edges: Sequence[tuple[int, int]], chosen: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    rep: dict[int, int] = {}

    def find(v):
        while rep.get(v, v) != v:
            v = rep[v]
        return v

    chosen = set(chosen)
    for u, v in chosen:
        ru, rv = find(u), find(v)
        if ru != rv:
            rep[max(ru, rv)] = min(ru, rv)
    return [(find(u), find(v)) for u, v in edges if (u, v) not in chosen]


def check_leaf_count(leaves: LeafSet, max_leaves: int = MAX_LEAVES) -> None:
    if leaves.n > max_leaves:
        raise TooManyLeaves(f"{leaves.n} leaves exceeds the enumeration cap of {max_leaves}")
    if leaves.n < 4:
        raise ValueError(f"enumeration needs at least 4 leaves, got {leaves.n}")


def enumerate_phylogenies(
    leaves: LeafSet, binary_only: bool = False, max_leaves: int = MAX_LEAVES
) -> tuple[Phylogeny, ...]:
    """All phylogenies on ``leaves``, sorted by canonical code.

    Binary trees come from sequential leaf insertion; the rest from contracting
    every subset of internal edges of the binary ones.
    """
    check_leaf_count(leaves, max_leaves)
    return _enumerate(leaves, binary_only)


@lru_cache(maxsize=None)
def _enumerate(leaves: LeafSet, binary_only: bool) -> tuple[Phylogeny, ...]:
    n = leaves.n
    found: dict[bytes, Phylogeny] = {}
    for edges in _binary_edge_lists(n):
        tree = _from_edges(leaves, edges)
        if binary_only:
            found.setdefault(tree.code, tree)
            continue
        internal = [(u, v) for u, v in edges if u >= n and v >= n]
        for size in range(len(internal) + 1):
            for chosen in combinations(internal, size):
                t = tree if not chosen else _from_edges(leaves, _contract(edges, chosen))
                found.setdefault(t.code, t)
    return tuple(found[c] for c in sorted(found))


def double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out
