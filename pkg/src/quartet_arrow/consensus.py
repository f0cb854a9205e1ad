"""Profiles, consensus rules and exhaustive checkers for Dct, Ind and PO.

Coordinates of a profile are numbered from 1, as individuals are.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import IndexOutOfRange, SpaceTooLarge
from .newick import parse_newick, write_newick
from .quartets import Quartet, QuartetTopology, fourset_positions, restrict_profile, restrict_tree, topology_vector
from .trees import MAX_LEAVES, LeafSet, Phylogeny, enumerate_phylogenies, star_tree

DEFAULT_MAX_PROFILES = 200_000


@dataclass(frozen=True)
class Profile:
    """Ordered k-tuple of phylogenies on one leaf set."""

    trees: tuple[Phylogeny, ...]

    def __post_init__(self):
        trees = tuple(self.trees)
        object.__setattr__(self, "trees", trees)
        if not trees:
            raise ValueError("a profile needs at least one tree")
        if any(t.leaves != trees[0].leaves for t in trees):
            raise ValueError("all trees of a profile must share one leaf set")

    @property
    def k(self) -> int:
        return len(self.trees)

    @property
    def leaves(self) -> LeafSet:
        return self.trees[0].leaves

    def __iter__(self) -> Iterator[Phylogeny]:
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    def tree(self, i: int) -> Phylogeny:
        """The tree of individual ``i`` (1-based)."""
        if not 1 <= i <= self.k:
            raise IndexOutOfRange(f"individual {i} outside 1..{self.k}")
        return self.trees[i - 1]

    def restrict(self, subset):
        return restrict_profile(self.trees, subset)

    def newick(self) -> list[str]:
        return [write_newick(t) for t in self.trees]


@dataclass(frozen=True)
class ConsensusRule:
    name: str
    func: Callable[[Profile], Phylogeny] = field(repr=False, compare=False)

    def __call__(self, profile: Profile | Sequence[Phylogeny]) -> Phylogeny:
        if not isinstance(profile, Profile):
            profile = Profile(tuple(profile))
        out = self.func(profile)
        if out.leaves != profile.leaves:
            raise ValueError(f"rule {self.name} returned a tree on another leaf set")
        return out


def dictator_rule(j: int, k: int | None = None) -> ConsensusRule:
    """Projection onto individual ``j``."""
    if j < 1 or (k is not None and j > k):
        raise IndexOutOfRange(f"dictator index {j} outside 1..{k if k is not None else 'k'}")
    return ConsensusRule(f"dictator:{j}", lambda p: p.tree(j))


def constant_rule(tree: Phylogeny | None = None) -> ConsensusRule:
    """Ignore the profile.  With no tree, return the star on the profile's leaves."""
    if tree is None:
        return ConsensusRule("constant:star", lambda p: star_tree(p.leaves))
    return ConsensusRule(f"constant:{write_newick(tree)}", lambda p: tree)


def majority_quartets(profile: Profile) -> tuple[int, ...]:
    """Per 4-subset, the resolved topology held by more than half the trees, else 0."""
    vecs = [topology_vector(t) for t in profile]
    k = profile.k
    out = []
    for column in zip(*vecs):
        winner = 0
        for topo in (1, 2, 3):
            if 2 * column.count(topo) > k:
                winner = topo
        out.append(winner)
    return tuple(out)


def _majority(profile: Profile) -> Phylogeny:
    trees = enumerate_phylogenies(profile.leaves, max_leaves=max(MAX_LEAVES, profile.leaves.n))
    majority = majority_quartets(profile)
    wanted = [(i, t) for i, t in enumerate(majority) if t]
    # feasible trees never resolve a 4-subset against its majority topology
    feasible = [
        (tree, vec)
        for tree in trees
        for vec in (topology_vector(tree),)
        if all(vec[i] in (0, t) for i, t in wanted)
    ]
    kept: list[int] = []
    for i, t in wanted:
        if any(all(vec[j] == majority[j] for j in kept) and vec[i] == t for _, vec in feasible):
            kept.append(i)
    realizing = [(sum(1 for x in vec if x), tree.code, tree) for tree, vec in feasible
                 if all(vec[j] == majority[j] for j in kept)]
    return min(realizing, key=lambda r: r[:2])[2]


def majority_quartet_rule() -> ConsensusRule:
    """Keep majority quartets greedily (lexicographic order) while some tree realizes them.

    The output contains the kept quartets and resolves no 4-subset against its
    majority topology; among such trees it has the fewest resolved quartets,
    ties broken by canonical code.
    """
    return ConsensusRule("majority", _majority)


def rule_from_name(name: str, k: int | None = None) -> ConsensusRule:
    """Look up ``dictator:<j>``, ``majority``, ``constant:star`` or ``constant:<newick>``."""
    if name == "majority":
        return majority_quartet_rule()
    kind, _, arg = name.partition(":")
    if kind == "dictator":
        try:
            j = int(arg)
        except ValueError:
            raise ValueError(f"bad dictator index in {name!r}") from None
        return dictator_rule(j, k)
    if kind == "constant":
        if arg == "star":
            return constant_rule()
        return constant_rule(parse_newick(arg))
    raise ValueError(f"unknown rule {name!r}")


REGISTERED_RULES = ("dictator:1", "dictator:2", "majority", "constant:star")


class ProfileSpace:
    """All k-tuples of trees on ``leaves`` (or a seeded sample when too many).

    Profiles are addressed by tuples of indices into :attr:`trees`, which is
    sorted by canonical code, so iteration order is lexicographic and stable.
    """

    def __init__(
        self,
        leaves: LeafSet,
        k: int = 2,
        max_profiles: int = DEFAULT_MAX_PROFILES,
        samples: int | None = None,
        seed: int | None = None,
    ):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.leaves = leaves
        self.k = k
        self.trees = enumerate_phylogenies(leaves)
        total = len(self.trees) ** k
        self.sampled = total > max_profiles
        if self.sampled:
            if seed is None:
                raise SpaceTooLarge(
                    f"{total} profiles exceeds the exhaustive limit {max_profiles}; give a seed to sample"
                )
            rng = random.Random(seed)
            count = samples or max_profiles
            self.indices = sorted({tuple(rng.randrange(len(self.trees)) for _ in range(k)) for _ in range(count)})
        else:
            self.indices = list(product(range(len(self.trees)), repeat=k))
        self.seed = seed
        self.vectors = [topology_vector(t) for t in self.trees]
        self._outputs: dict[str, list[Phylogeny]] = {}

    def __len__(self):
        return len(self.indices)

    def profile(self, index: Sequence[int]) -> Profile:
        return Profile(tuple(self.trees[i] for i in index))

    def __iter__(self) -> Iterator[Profile]:
        return (self.profile(ix) for ix in self.indices)

    def outputs(self, rule: ConsensusRule) -> list[Phylogeny]:
        if rule.name not in self._outputs:
            self._outputs[rule.name] = [rule(p) for p in self]
        return self._outputs[rule.name]

    @property
    def mode(self) -> str:
        return "sampled" if self.sampled else "exhaustive"


@dataclass
class Witness:
    """Counterexample data; which fields are set depends on the axiom."""

    profile: Profile
    quartet: Quartet | None = None
    other: Profile | None = None
    subset: tuple[int, ...] | None = None
    coordinate: int | None = None


@dataclass
class AxiomReport:
    axiom: str
    rule: str
    holds: bool
    checked: int
    mode: str = "exhaustive"
    witness: Witness | None = None
    dictator: int | None = None
    candidates: dict[int, Witness] = field(default_factory=dict)
    violations: int = 0


def _first_missing(source: Sequence[int], output: Sequence[int]) -> int | None:
    for i, (s, o) in enumerate(zip(source, output)):
        if s and o != s:
            return i
    return None


def _quartet_at(n: int, position: int, topology: int) -> Quartet:
    four = list(fourset_positions(n))[position]
    return Quartet(four, QuartetTopology(topology))


def check_PO(rule: ConsensusRule, space: ProfileSpace) -> AxiomReport:
    """Unanimous resolved quartets must appear in the output."""
    n = space.leaves.n
    report = AxiomReport("PO", rule.name, True, len(space), space.mode)
    for ix, out in zip(space.indices, space.outputs(rule)):
        vecs = [space.vectors[i] for i in ix]
        unanimous = [v if all(w[p] == v for w in vecs) else 0 for p, v in enumerate(vecs[0])]
        miss = _first_missing(unanimous, topology_vector(out))
        if miss is not None:
            report.violations += 1
            if report.holds:
                report.holds = False
                report.witness = Witness(space.profile(ix), _quartet_at(n, miss, unanimous[miss]))
    return report


def check_Ind(rule: ConsensusRule, space: ProfileSpace) -> AxiomReport:
    """Outputs restricted to X must depend only on the profile restricted to X.

    Subsets with fewer than four taxa carry no quartets and are skipped.
    """
    n = space.leaves.n
    pos = fourset_positions(n)
    outputs = [topology_vector(t) for t in space.outputs(rule)]
    report = AxiomReport("Ind", rule.name, True, len(space), space.mode)
    for size in range(4, n + 1):
        for subset in combinations(range(n), size):
            inside = [pos[f] for f in combinations(subset, 4)]
            seen: dict[tuple, int] = {}
            for row, ix in enumerate(space.indices):
                key = tuple(space.vectors[i][p] for i in ix for p in inside)
                out = tuple(outputs[row][p] for p in inside)
                first = seen.setdefault(key, row)
                if tuple(outputs[first][p] for p in inside) != out:
                    report.violations += 1
                    if report.holds:
                        report.holds = False
                        report.witness = Witness(
                            space.profile(space.indices[first]),
                            other=space.profile(ix),
                            subset=subset,
                        )
    return report


def check_Dct(rule: ConsensusRule, space: ProfileSpace) -> AxiomReport:
    """Some individual's resolved quartets must always reach the output."""
    n = space.leaves.n
    report = AxiomReport("Dct", rule.name, False, len(space), space.mode)
    outputs = space.outputs(rule)
    for j in range(1, space.k + 1):
        for ix, out in zip(space.indices, outputs):
            source = space.vectors[ix[j - 1]]
            miss = _first_missing(source, topology_vector(out))
            if miss is not None:
                report.candidates[j] = Witness(space.profile(ix), _quartet_at(n, miss, source[miss]), coordinate=j)
                break
        else:
            report.holds = True
            report.dictator = j
            break
    if not report.holds:
        report.violations = len(report.candidates)
        report.witness = report.candidates[1]
    return report


def check_axioms(rule: ConsensusRule, space: ProfileSpace) -> dict[str, AxiomReport]:
    return {"Dct": check_Dct(rule, space), "Ind": check_Ind(rule, space), "PO": check_PO(rule, space)}


def _has(tree: Phylogeny, quartet: Quartet) -> bool:
    return restrict_tree(tree, quartet.taxa).topologies[0] == quartet.topology


def replay_witness(axiom: str, witness: Witness, rule: ConsensusRule) -> bool:
    """Re-evaluate ``witness`` through the axiom's definition; True if the violation reproduces."""
    profile = witness.profile
    if axiom == "PO":
        q = witness.quartet
        return q.resolved and all(_has(t, q) for t in profile) and not _has(rule(profile), q)
    if axiom == "Dct":
        q = witness.quartet
        return q.resolved and _has(profile.tree(witness.coordinate), q) and not _has(rule(profile), q)
    if axiom == "Ind":
        X = witness.subset
        return (
            profile.restrict(X) == witness.other.restrict(X)
            and restrict_tree(rule(profile), X) != restrict_tree(rule(witness.other), X)
        )
    raise ValueError(f"unknown axiom {axiom!r}")


def all_witnesses(report: AxiomReport) -> Iterable[Witness]:
    if report.axiom == "Dct":
        return list(report.candidates.values()) if not report.holds else []
    return [report.witness] if report.witness else []
