"""Realizability of quartet constraint sets and construction of agreeing profiles.

Realizability is decided by scanning the full enumeration of trees, so it is
exact but capped at :data:`~quartet_arrow.trees.MAX_LEAVES` leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .errors import ConstraintConflict, ParseError, TriggerMismatch, UnrealizableBranch
from .quartets import (
    Quartet,
    QuartetConstraintSet,
    QuartetTopology,
    fourset_positions,
    parse_quartet,
    topology_of,
    topology_vector,
)
from .trees import MAX_LEAVES, LeafSet, Phylogeny, check_leaf_count, enumerate_phylogenies


@dataclass(frozen=True)
class RealizationResult:
    constraints: QuartetConstraintSet
    witnesses: tuple[Phylogeny, ...]
    exhaustive: bool = True

    @property
    def realizable(self) -> bool:
        return bool(self.witnesses)


def trees_realizing(
    constraints: QuartetConstraintSet, leaves: LeafSet | None = None, max_leaves: int = MAX_LEAVES
) -> RealizationResult:
    """Every tree on ``leaves`` whose quartet system extends ``constraints``."""
    leaves = leaves or constraints.leaves
    if leaves != constraints.leaves:
        raise ValueError("constraints are over a different leaf set")
    check_leaf_count(leaves, max_leaves)
    return RealizationResult(constraints, _witnesses(constraints))


@lru_cache(maxsize=4096)
def _witnesses(constraints: QuartetConstraintSet) -> tuple[Phylogeny, ...]:
    pos = fourset_positions(constraints.leaves.n)
    wanted = [(pos[f], int(t)) for f, t in constraints.items()]
    out = []
    for tree in enumerate_phylogenies(constraints.leaves, max_leaves=constraints.leaves.n):
        vec = topology_vector(tree)
        if all(vec[i] == t for i, t in wanted):
            out.append(tree)
    return tuple(out)


def implied_restriction(constraints: QuartetConstraintSet, fourset: Iterable[str | int]) -> frozenset[QuartetTopology]:
    """Topologies on ``fourset`` shown by at least one tree realizing ``constraints``."""
    fourset = list(fourset)
    return frozenset(topology_of(t, fourset) for t in trees_realizing(constraints).witnesses)


@dataclass(frozen=True)
class Branch:
    """Constraints for outside coordinates whose restriction to X is ``trigger``.

    ``trigger`` is None for a wildcard branch applying to every topology.
    """

    trigger: str | None
    constraints: tuple[str, ...]

    @property
    def label(self) -> str:
        return f"case {self.trigger or '*'}"


@dataclass(frozen=True)
class Step:
    """Use of a weaker decisiveness level on P' for ``quartet``."""

    level: str
    quartet: str


@dataclass(frozen=True)
class Inference:
    premises: tuple[str, ...]
    conclusion: str

    def __str__(self):
        return f"{' '.join(self.premises)} => {self.conclusion}"


@dataclass(frozen=True)
class ProfileRecipe:
    """A lemma's P' construction written with role letters.

    ``target`` fixes the roles: written ``wx|yz`` it makes X = (w, x, y, z);
    the remaining role letter is the extra taxon ``v``.
    """

    name: str
    target: str = "wx|yz"
    hypothesis: str = "D"
    group: tuple[str, ...] = ()
    branches: tuple[Branch, ...] = ()
    steps: tuple[Step, ...] = ()
    inferences: tuple[Inference, ...] = ()
    conclusion: Inference | None = None
    roles: LeafSet = field(default=LeafSet.of("vwxyz"))

    @property
    def role_x(self) -> tuple[str, str, str, str]:
        return tuple(c for c in self.target if c != "|")  # type: ignore[return-value]

    @property
    def role_v(self) -> str:
        (v,) = [r for r in self.roles.names if r not in self.role_x]
        return v

    def constraints(self, texts: Sequence[str]) -> QuartetConstraintSet:
        return QuartetConstraintSet.parse(list(texts), self.roles)

    def quartet(self, text: str) -> Quartet:
        return parse_quartet(text, self.roles)


_SECTION_RE = re.compile(r"^\[(\w+)(?:\s+(\S+))?\]$")


def parse_recipe(text: str, name: str = "recipe") -> ProfileRecipe:
    """Read the recipe text format.

    Sections ``[group]`` and ``[case <quartet>]`` (``[case *]`` for a wildcard)
    list constraint quartets.  Optional sections: ``[target]``,
    ``[hypothesis]`` (level letter), ``[steps]`` (``<level> <quartet>`` per
    line), ``[inferences]`` and ``[conclusion]`` (``p1 p2 => q`` per line).
    """
    sections: list[tuple[str, str | None, list[str]]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            sections.append((m.group(1), m.group(2), []))
            continue
        if not sections:
            raise ParseError(f"line outside any section: {raw!r}")
        sections[-1][2].append(line)

    def words(lines):
        return tuple(w for line in lines for w in re.split(r"[\s,]+", line) if w)

    def inference(line):
        if "=>" not in line:
            raise ParseError(f"inference needs '=>': {line!r}")
        lhs, rhs = line.split("=>", 1)
        return Inference(words([lhs]), rhs.strip())

    fields: dict = {"name": name}
    group: tuple[str, ...] = ()
    branches = []
    for kind, arg, lines in sections:
        if kind == "group":
            group = words(lines)
        elif kind == "case":
            if arg is None:
                raise ParseError("[case] needs a trigger quartet or '*'")
            branches.append(Branch(None if arg == "*" else arg, words(lines)))
        elif kind == "target":
            fields["target"] = words(lines)[0]
        elif kind == "hypothesis":
            fields["hypothesis"] = words(lines)[0].upper()
        elif kind == "steps":
            fields["steps"] = tuple(Step(*line.split(None, 1)) for line in lines)
        elif kind == "inferences":
            fields["inferences"] = tuple(inference(line) for line in lines)
        elif kind == "conclusion":
            fields["conclusion"] = inference(lines[0])
        else:
            raise ParseError(f"unknown section [{kind}]")
    recipe = ProfileRecipe(group=group, branches=tuple(branches), **fields)
    # surface bad quartets at load time
    recipe.constraints(recipe.group)
    for b in recipe.branches:
        recipe.constraints(b.constraints)
        if b.trigger is not None:
            recipe.quartet(b.trigger)
    if recipe.hypothesis not in "ABCD" or len(recipe.hypothesis) != 1:
        raise ParseError(f"hypothesis level must be one of A, B, C, D, got {recipe.hypothesis!r}")
    return recipe


BUILTIN_RECIPES = ("B", "C", "D", "flawed-original")


def load_builtin_recipe(name: str) -> ProfileRecipe:
    if name not in BUILTIN_RECIPES:
        raise KeyError(f"unknown recipe {name!r}; choose from {', '.join(BUILTIN_RECIPES)}")
    text = resources.files("quartet_arrow.recipes").joinpath(f"{name}.recipe").read_text()
    return parse_recipe(text, name)


@dataclass(frozen=True)
class Binding:
    """Assignment of role letters to taxa of a concrete leaf set."""

    recipe: ProfileRecipe
    leaves: LeafSet
    mapping: dict[int, int]

    def constraints(self, texts: Sequence[str]) -> QuartetConstraintSet:
        return QuartetConstraintSet(self.leaves, [q.relabel(self.mapping) for q in self.recipe.constraints(texts).quartets()])

    def quartet(self, text: str) -> Quartet:
        return self.recipe.quartet(text).relabel(self.mapping)

    @property
    def fourset(self) -> tuple[int, ...]:
        return tuple(self.mapping[self.recipe.roles.index(r)] for r in self.recipe.role_x)


def bind(recipe: ProfileRecipe, leaves: LeafSet, X: Sequence[str | int], v: str | int) -> Binding:
    idx = leaves.indices([*X, v])
    if len(set(idx)) != 5:
        raise ValueError("X must be four distinct taxa and v must lie outside X")
    roles = [*recipe.role_x, recipe.role_v]
    return Binding(recipe, leaves, {recipe.roles.index(r): i for r, i in zip(roles, idx)})


def branch_constraints(binding: Binding, branch: Branch | None, observed: QuartetTopology) -> QuartetConstraintSet:
    """Constraints for one coordinate of P' (``branch`` None means the group side).

    The observed restriction to X is always added, since P' must agree with P on X.
    """
    texts = binding.recipe.group if branch is None else branch.constraints
    base = binding.constraints(texts)
    return base.union([Quartet(tuple(sorted(binding.fourset)), observed)])  # type: ignore[arg-type]


def select_branch(recipe: ProfileRecipe, binding: Binding, observed: QuartetTopology) -> Branch | None:
    wildcard = None
    for b in recipe.branches:
        if b.trigger is None:
            wildcard = wildcard or b
        elif binding.quartet(b.trigger).topology == observed:
            return b
    return wildcard


def build_profile_prime(
    profile: Sequence[Phylogeny],
    coalition: Iterable[int],
    X: Sequence[str | int],
    v: str | int,
    recipe: ProfileRecipe,
) -> tuple[Phylogeny, ...]:
    """Build P' from P following ``recipe``; coalition members are 1-based.

    Each coordinate becomes the canonical-minimal tree satisfying its branch,
    so P and P' agree on X.
    """
    leaves = profile[0].leaves
    binding = bind(recipe, leaves, X, v)
    target = binding.quartet(recipe.target)
    coalition = set(coalition)
    out = []
    for i, tree in enumerate(profile, start=1):
        observed = topology_of(tree, binding.fourset)
        if i in coalition:
            if observed != target.topology:
                raise TriggerMismatch(f"coordinate {i} is in the coalition but lacks {recipe.target}")
            branch, label = None, "group"
        else:
            branch = select_branch(recipe, binding, observed)
            if branch is None:
                shown = Quartet(target.taxa, observed).text(leaves)
                raise TriggerMismatch(f"coordinate {i} shows {shown} on X, which no branch covers")
            label = branch.label
        try:
            constraints = branch_constraints(binding, branch, observed)
        except ConstraintConflict as exc:
            raise UnrealizableBranch(f"{label}: {exc}") from None
        witnesses = trees_realizing(constraints).witnesses
        if not witnesses:
            raise UnrealizableBranch(f"{label} has no realizing tree for coordinate {i} ({', '.join(constraints.texts())})")
        out.append(witnesses[0])
    return tuple(out)
