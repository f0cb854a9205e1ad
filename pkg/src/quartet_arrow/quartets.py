"""Quartet topologies, quartet systems, restrictions and the dyadic inference step.

A topology is always stored relative to a sorted 4-subset ``(a, b, c, d)`` of
taxon indices, so the many ways of writing one quartet collapse to one value.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConstraintConflict, ParseError, SubsetTooSmall, UnknownTaxon
from .trees import LeafSet, Phylogeny


class QuartetTopology(enum.IntEnum):
    UNRESOLVED = 0
    R12_34 = 1  # ab|cd
    R13_24 = 2  # ac|bd
    R14_23 = 3  # ad|bc

    @property
    def resolved(self) -> bool:
        return self is not QuartetTopology.UNRESOLVED


RESOLVED = (QuartetTopology.R12_34, QuartetTopology.R13_24, QuartetTopology.R14_23)

# positions (within the sorted 4-subset) of the pair holding the first element
_PAIRINGS = {
    QuartetTopology.R12_34: ((0, 1), (2, 3)),
    QuartetTopology.R13_24: ((0, 2), (1, 3)),
    QuartetTopology.R14_23: ((0, 3), (1, 2)),
}


def _sorted4(taxa: Iterable[int]) -> tuple[int, int, int, int]:
    four = tuple(sorted(taxa))
    if len(four) != 4 or len(set(four)) != 4:
        raise ValueError(f"a quartet needs four distinct taxa, got {four}")
    return four  # type: ignore[return-value]


@dataclass(frozen=True, order=True)
class Quartet:
    """One configuration on a sorted 4-subset of taxon indices."""

    taxa: tuple[int, int, int, int]
    topology: QuartetTopology

    @classmethod
    def resolved_from(cls, pair1: Sequence[int], pair2: Sequence[int]) -> Quartet:
        taxa = _sorted4((*pair1, *pair2))
        pair = tuple(pair1) if taxa[0] in pair1 else tuple(pair2)
        partner = pair[1] if pair[0] == taxa[0] else pair[0]
        topology = {1: QuartetTopology.R12_34, 2: QuartetTopology.R13_24, 3: QuartetTopology.R14_23}[
            taxa.index(partner)
        ]
        return cls(taxa, topology)

    @classmethod
    def unresolved_from(cls, taxa: Iterable[int]) -> Quartet:
        return cls(_sorted4(taxa), QuartetTopology.UNRESOLVED)

    @property
    def resolved(self) -> bool:
        return self.topology.resolved

    def sides(self) -> tuple[tuple[int, int], tuple[int, int]]:
        i, j = _PAIRINGS[self.topology]
        return (self.taxa[i[0]], self.taxa[i[1]]), (self.taxa[j[0]], self.taxa[j[1]])

    def text(self, leaves: LeafSet) -> str:
        if not self.resolved:
            return "".join(leaves.name(t) for t in self.taxa)
        return "|".join("".join(leaves.name(t) for t in side) for side in self.sides())

    def relabel(self, mapping: Mapping[int, int]) -> Quartet:
        if not self.resolved:
            return Quartet.unresolved_from(mapping[t] for t in self.taxa)
        p, q = self.sides()
        return Quartet.resolved_from([mapping[t] for t in p], [mapping[t] for t in q])


def parse_quartet(text: str, leaves: LeafSet) -> Quartet:
    """Parse ``"ab|cd"`` (resolved) or ``"abcd"`` (unresolved); taxon names must be one character."""
    text = text.strip()
    if any(len(name) != 1 for name in leaves.names):
        raise ParseError("quartet text format needs single-character taxon names")
    m = re.fullmatch(r"(\w)(\w)\|(\w)(\w)|(\w)(\w)(\w)(\w)", text)
    if not m:
        raise ParseError(f"cannot parse quartet {text!r}")
    try:
        if m.group(1):
            a, b, c, d = leaves.indices(m.group(1, 2, 3, 4))
            if len({a, b, c, d}) != 4:
                raise ParseError(f"repeated taxon in quartet {text!r}")
            return Quartet.resolved_from((a, b), (c, d))
        four = leaves.indices(m.group(5, 6, 7, 8))
    except UnknownTaxon as exc:
        raise UnknownTaxon(f"{exc} (in quartet {text!r})") from None
    if len(set(four)) != 4:
        raise ParseError(f"repeated taxon in quartet {text!r}")
    return Quartet.unresolved_from(four)


def topology_from_paths(tree: Phylogeny, four: Sequence[int]) -> QuartetTopology:
    """Topology of a sorted 4-subset by the path-intersection definition."""
    a, b, c, d = four
    found = QuartetTopology.UNRESOLVED
    for topo, ((i, j), (k, l)) in _PAIRINGS.items():
        p, q = four[i], four[j]
        r, s = four[k], four[l]
        if not set(tree.path(p, q)) & set(tree.path(r, s)):
            if found.resolved:
                raise AssertionError(f"two disjoint pairings on {four}")
            found = topo
    if not found.resolved:
        for (i, j), (k, l) in _PAIRINGS.values():
            shared = set(tree.path(four[i], four[j])) & set(tree.path(four[k], four[l]))
            if len(shared) != 1:
                raise AssertionError(f"unresolved {four} but paths share {len(shared)} vertices")
    return found


@lru_cache(maxsize=None)
def topology_vector(tree: Phylogeny) -> tuple[int, ...]:
    """Topology codes of every 4-subset of ``range(n)`` in lexicographic order."""
    return tuple(int(topology_from_paths(tree, four)) for four in combinations(range(tree.n), 4))


@lru_cache(maxsize=None)
def fourset_positions(n: int) -> dict[tuple[int, ...], int]:
    return {four: i for i, four in enumerate(combinations(range(n), 4))}


def topology_of(tree: Phylogeny, fourset: Iterable[str | int]) -> QuartetTopology:
    four = _sorted4(tree.leaves.indices(fourset))
    return QuartetTopology(topology_vector(tree)[fourset_positions(tree.n)[four]])


@dataclass(frozen=True)
class QuartetSystem:
    """Total map from the 4-subsets of ``taxa`` to topologies."""

    leaves: LeafSet
    taxa: tuple[int, ...]
    topologies: tuple[QuartetTopology, ...]

    def foursets(self) -> Iterator[tuple[int, ...]]:
        return combinations(self.taxa, 4)

    def __len__(self):
        return len(self.topologies)

    def __getitem__(self, fourset: Iterable[str | int]) -> QuartetTopology:
        four = _sorted4(self.leaves.indices(fourset))
        for f, t in zip(self.foursets(), self.topologies):
            if f == four:
                return t
        raise KeyError(four)

    def quartets(self) -> list[Quartet]:
        return [Quartet(f, t) for f, t in zip(self.foursets(), self.topologies)]  # type: ignore[arg-type]

    def resolved(self) -> list[Quartet]:
        return [q for q in self.quartets() if q.resolved]

    def __contains__(self, quartet: Quartet) -> bool:
        return set(quartet.taxa) <= set(self.taxa) and self[quartet.taxa] == quartet.topology

    def restrict(self, subset: Iterable[str | int]) -> QuartetSystem:
        keep = tuple(sorted(self.leaves.indices(subset)))
        if not set(keep) <= set(self.taxa):
            raise UnknownTaxon(f"{keep} is not inside {self.taxa}")
        if len(keep) < 4:
            raise SubsetTooSmall(f"restriction needs at least 4 taxa, got {len(keep)}")
        table = dict(zip(self.foursets(), self.topologies))
        return QuartetSystem(self.leaves, keep, tuple(table[f] for f in combinations(keep, 4)))

    def texts(self) -> list[str]:
        return [q.text(self.leaves) for q in self.quartets()]


def quartet_system(tree: Phylogeny) -> QuartetSystem:
    return QuartetSystem(
        tree.leaves, tuple(range(tree.n)), tuple(QuartetTopology(t) for t in topology_vector(tree))
    )


def restrict_tree(tree: Phylogeny, subset: Iterable[str | int]) -> QuartetSystem:
    keep = tuple(sorted(set(tree.leaves.indices(subset))))
    if len(keep) < 4:
        raise SubsetTooSmall(f"restriction needs at least 4 taxa, got {len(keep)}")
    vec = topology_vector(tree)
    pos = fourset_positions(tree.n)
    return QuartetSystem(tree.leaves, keep, tuple(QuartetTopology(vec[pos[f]]) for f in combinations(keep, 4)))


def restrict_profile(profile: Iterable[Phylogeny], subset: Iterable[str | int]) -> tuple[QuartetSystem, ...]:
    subset = list(subset)
    return tuple(restrict_tree(t, subset) for t in profile)


def contains(tree: Phylogeny, quartet: Quartet) -> bool:
    return topology_vector(tree)[fourset_positions(tree.n)[quartet.taxa]] == quartet.topology


class QuartetConstraintSet(Mapping[tuple[int, ...], QuartetTopology]):
    """Partial map from 4-subsets to topologies, at most one entry per subset."""

    def __init__(self, leaves: LeafSet, quartets: Iterable[Quartet] = ()):
        self.leaves = leaves
        self._entries: dict[tuple[int, ...], QuartetTopology] = {}
        for q in quartets:
            self._add(q)

    def _add(self, q: Quartet) -> None:
        if max(q.taxa) >= self.leaves.n:
            raise UnknownTaxon(f"quartet {q} uses taxa outside the leaf set")
        old = self._entries.get(q.taxa)
        if old is not None and old != q.topology:
            raise ConstraintConflict(
                f"conflicting constraints on {q.text(self.leaves)} vs {Quartet(q.taxa, old).text(self.leaves)}"
            )
        self._entries[q.taxa] = q.topology

    @classmethod
    def parse(cls, text: str | Iterable[str], leaves: LeafSet) -> QuartetConstraintSet:
        """Parse quartets separated by whitespace, commas or newlines; '#' starts a comment."""
        if isinstance(text, str):
            words = []
            for line in text.splitlines():
                words.extend(re.split(r"[\s,]+", line.split("#", 1)[0].strip()))
        else:
            words = list(text)
        return cls(leaves, [parse_quartet(w, leaves) for w in words if w])

    def union(self, quartets: Iterable[Quartet]) -> QuartetConstraintSet:
        return QuartetConstraintSet(self.leaves, [*self.quartets(), *quartets])

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(sorted(self._entries))

    def __len__(self):
        return len(self._entries)

    def quartets(self) -> list[Quartet]:
        return [Quartet(f, self._entries[f]) for f in self]  # type: ignore[arg-type]

    def texts(self) -> list[str]:
        return [q.text(self.leaves) for q in self.quartets()]

    def key(self) -> tuple:
        return (self.leaves.names, tuple((f, int(self._entries[f])) for f in self))

    def __eq__(self, other):
        return isinstance(other, QuartetConstraintSet) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QuartetConstraintSet({self.texts()})"

    def satisfied_by(self, tree: Phylogeny) -> bool:
        vec = topology_vector(tree)
        pos = fourset_positions(tree.n)
        return all(vec[pos[f]] == t for f, t in self._entries.items())


def dyadic_step(premise1: Quartet, premise2: Quartet, system: QuartetSystem | None = None) -> Quartet | None:
    """Two-premise quartet inference ``wx|yz, wx|vy => wx|vz``.

    The premises must share one side ``{w, x}`` while their other sides share
    exactly one taxon.  The substitution form ``ab|cd, av|cd => bv|cd`` is the
    same rule with the shared side ``cd``.  If ``system`` is given, both
    premises must hold in it.  Returns None when the pattern does not apply.
    """
    if not (premise1.resolved and premise2.resolved):
        return None
    if system is not None and not (premise1 in system and premise2 in system):
        return None
    for shared in premise1.sides():
        if set(shared) not in [set(s) for s in premise2.sides()]:
            continue
        other1 = next(s for s in premise1.sides() if s != shared)
        other2 = next(s for s in premise2.sides() if set(s) != set(shared))
        common = set(other1) & set(other2)
        if len(common) != 1:
            return None
        (y,) = common
        z = next(t for t in other1 if t != y)
        v = next(t for t in other2 if t != y)
        return Quartet.resolved_from(shared, (v, z))
    return None
