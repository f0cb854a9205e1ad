"""Mechanical audit of the invariance-lemma constructions.

Each corrected construction, and the original flawed one, is a
:class:`~quartet_arrow.realize.ProfileRecipe`.  Auditing a recipe checks that
every branch is realizable, that the branches cover every topology the
outsiders may show, that each branch pins down the restriction to X, that P'
meets the hypotheses of the weaker level the argument invokes, and that every
quoted quartet inference holds on all trees.  Finally P' is built for every
admissible profile at k = 2 and compared with P on X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .consensus import ProfileSpace
from .decisive import coalitions, is_admissible, outside_admitted
from .errors import PhyloError
from .quartets import Quartet, QuartetConstraintSet, QuartetTopology, contains, dyadic_step, parse_quartet, restrict_profile
from .realize import (
    Binding,
    Branch,
    ProfileRecipe,
    bind,
    branch_constraints,
    build_profile_prime,
    implied_restriction,
    load_builtin_recipe,
    trees_realizing,
)
from .trees import LeafSet, Phylogeny, enumerate_phylogenies

VALID = "construction valid"
INVALID = "invalid"


def alternative_text(written: str) -> str:
    """``ab|cd`` -> ``ac|bd``, read off the written form."""
    a, b, _, c, d = written
    return f"{a}{c}|{b}{d}"


@dataclass
class InferenceCheck:
    inference: str
    sound: bool
    trees_checked: int
    counterexample: Phylogeny | None = None
    dyadic: bool = False


def check_inference(premises: Sequence[Quartet], conclusion: Quartet, leaves: LeafSet) -> InferenceCheck:
    """Does every tree on ``leaves`` holding all premises also hold the conclusion?"""
    trees = enumerate_phylogenies(leaves)
    text = f"{' '.join(p.text(leaves) for p in premises)} => {conclusion.text(leaves)}"
    check = InferenceCheck(text, True, len(trees))
    if len(premises) == 2:
        check.dyadic = dyadic_step(*premises) == conclusion
    for tree in trees:
        if all(contains(tree, p) for p in premises) and not contains(tree, conclusion):
            check.sound = False
            check.counterexample = tree
            break
    return check


@dataclass
class StepCheck:
    step: str
    ok: bool
    detail: str = ""


@dataclass
class BranchReport:
    label: str
    constraints: list[str]
    realizable: bool
    witness_count: int
    forced_restriction: list[str]
    forces_restriction: bool
    covers: list[str] = field(default_factory=list)
    steps: list[StepCheck] = field(default_factory=list)


@dataclass
class ProfileCheck:
    k: int
    coalitions: int = 0
    admissible: int = 0
    built: int = 0
    agree: int = 0
    steps_met: int = 0
    failures: dict[str, int] = field(default_factory=dict)
    example_failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.admissible == self.built == self.agree == self.steps_met and not self.failures


@dataclass
class LemmaReport:
    lemma: str
    verdict: str
    branches: list[BranchReport] = field(default_factory=list)
    admitted: list[str] = field(default_factory=list)
    uncovered: list[str] = field(default_factory=list)
    inferences: list[InferenceCheck] = field(default_factory=list)
    profiles: ProfileCheck | None = None
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.verdict == VALID


def _text(binding: Binding, topology: int) -> str:
    return Quartet(tuple(sorted(binding.fourset)), QuartetTopology(topology)).text(binding.leaves)  # type: ignore[arg-type]


def _step_allowed(recipe: ProfileRecipe, binding: Binding, step, in_group: bool) -> tuple[Quartet, frozenset[int]]:
    q = binding.quartet(step.quartet)
    if in_group:
        return q, frozenset({int(q.topology)})
    alt = binding.quartet(alternative_text(step.quartet)) if step.level == "C" else None
    return q, outside_admitted(step.level, q, alt)


def _audit_branch(recipe, binding, branch: Branch | None, triggers: Sequence[int]) -> BranchReport:
    texts = recipe.group if branch is None else branch.constraints
    base = binding.constraints(texts)
    result = trees_realizing(base)
    forced = implied_restriction(base, binding.fourset)
    report = BranchReport(
        "group" if branch is None else branch.label,
        base.texts(),
        result.realizable,
        len(result.witnesses),
        sorted(_text(binding, t) for t in forced),
        forces_restriction=len(triggers) == 1 and forced == {triggers[0]},
    )
    for t in triggers:
        try:
            constraints = branch_constraints(binding, branch, QuartetTopology(t))
        except PhyloError:
            continue
        witnesses = trees_realizing(constraints).witnesses
        if witnesses:
            report.covers.append(_text(binding, t))
        for step in recipe.steps:
            q, allowed = _step_allowed(recipe, binding, step, branch is None)
            bad = [w for w in witnesses if _topology(w, q) not in allowed]
            label = f"{step.level} {step.quartet} [{_text(binding, t)}]"
            report.steps.append(StepCheck(label, not bad, f"{len(bad)} of {len(witnesses)} witnesses violate" if bad else ""))
    return report


def _topology(tree: Phylogeny, q: Quartet) -> int:
    return int(restrict_profile([tree], q.taxa)[0].topologies[0])


def _check_profiles(recipe: ProfileRecipe, binding: Binding, k: int) -> ProfileCheck:
    leaves = binding.leaves
    space = ProfileSpace(leaves, k)
    target = binding.quartet(recipe.target)
    X = [leaves.name(i) for i in binding.fourset]
    v = leaves.name(binding.mapping[recipe.roles.index(recipe.role_v)])
    check = ProfileCheck(k)
    alt = binding.quartet(alternative_text(recipe.target)) if recipe.hypothesis == "C" else None
    for I in coalitions(k):
        check.coalitions += 1
        for profile in space:
            if not is_admissible(profile, I, target, recipe.hypothesis, alt):
                continue
            check.admissible += 1
            try:
                prime = build_profile_prime(list(profile), I, X, v, recipe)
            except PhyloError as exc:
                name = type(exc).__name__
                check.failures[name] = check.failures.get(name, 0) + 1
                if check.example_failure is None:
                    check.example_failure = f"I={set(I) or '{}'} P={profile.newick()}: {name}: {exc}"
                continue
            check.built += 1
            if restrict_profile(prime, X) == profile.restrict(X):
                check.agree += 1
            met = True
            for step in recipe.steps:
                q = binding.quartet(step.quartet)
                step_alt = binding.quartet(alternative_text(step.quartet)) if step.level == "C" else None
                met = met and is_admissible(prime, I, q, step.level, step_alt)
            check.steps_met += met
    return check


def verify_recipe(recipe: ProfileRecipe | str, k: int = 2) -> LemmaReport:
    """Audit one lemma construction on the five role taxa v, w, x, y, z."""
    if isinstance(recipe, str):
        recipe = load_builtin_recipe(recipe)
    leaves = recipe.roles
    binding = bind(recipe, leaves, recipe.role_x, recipe.role_v)
    target = binding.quartet(recipe.target)
    alt = binding.quartet(alternative_text(recipe.target)) if recipe.hypothesis == "C" else None
    admitted = sorted(outside_admitted(recipe.hypothesis, target, alt))
    report = LemmaReport(recipe.name, INVALID, admitted=[_text(binding, t) for t in admitted])

    report.branches.append(_audit_branch(recipe, binding, None, [int(target.topology)]))
    covered: set[str] = set()
    for branch in recipe.branches:
        if branch.trigger is None:
            triggers = admitted
        else:
            triggers = [int(binding.quartet(branch.trigger).topology)]
            if triggers[0] not in admitted:
                report.notes.append(f"{branch.label} lies outside the hypothesis and is never used")
        b = _audit_branch(recipe, binding, branch, triggers)
        covered.update(b.covers)
        report.branches.append(b)
    report.uncovered = [t for t in report.admitted if t not in covered]

    for inf in [*recipe.inferences, *([recipe.conclusion] if recipe.conclusion else [])]:
        report.inferences.append(
            check_inference([binding.quartet(p) for p in inf.premises], binding.quartet(inf.conclusion), leaves)
        )
    report.profiles = _check_profiles(recipe, binding, k)

    for b in report.branches:
        if not b.realizable:
            report.notes.append(f"{b.label} is not realizable")
        elif not b.forces_restriction:
            report.notes.append(f"{b.label} does not pin the restriction to X (allows {', '.join(b.forced_restriction)})")
        for s in b.steps:
            if not s.ok:
                report.notes.append(f"{b.label}: step {s.step} fails ({s.detail})")
    if report.uncovered:
        report.notes.append(f"no branch can keep P|X = P'|X for outsiders showing {', '.join(report.uncovered)}")
    for inf in report.inferences:
        if not inf.sound:
            report.notes.append(f"inference {inf.inference} is unsound")
    if not report.profiles.ok:
        report.notes.append(f"profile construction failed: {report.profiles.failures}")

    ok = (
        not report.uncovered
        and all(b.realizable and b.forces_restriction and all(s.ok for s in b.steps) for b in report.branches)
        and all(i.sound for i in report.inferences)
        and report.profiles.ok
    )
    report.verdict = VALID if ok else INVALID
    return report


# Almost-decisiveness spreads from ab|cd to bv|cd (and its role variants)
ONE_STEP_ROLES = LeafSet.of("abcdv")
ONE_STEP_GROUP = ("ab|cd", "ab|cv", "ab|dv", "av|cd", "bv|cd")
ONE_STEP_OUTSIDE = ("abcd", "av|bc", "av|bd", "av|cd", "bcdv")


def _one_step(leaves: LeafSet, roles: Sequence[int]) -> dict:
    """Check the one-step construction with roles a, b, c, d, v bound to ``roles``."""
    mapping = dict(enumerate(roles))

    def bound(texts):
        return QuartetConstraintSet(leaves, [parse_quartet(t, ONE_STEP_ROLES).relabel(mapping) for t in texts])

    def q(text):
        return parse_quartet(text, ONE_STEP_ROLES).relabel(mapping)

    group, outside = bound(ONE_STEP_GROUP), bound(ONE_STEP_OUTSIDE)
    gw, ow = trees_realizing(group).witnesses, trees_realizing(outside).witnesses
    source, pareto, target = q("ab|cd"), q("av|cd"), q("bv|cd")
    target_unresolved = q("bcdv")
    source_unresolved = q("abcd")
    checks = {
        "group_realizable": bool(gw),
        "outside_realizable": bool(ow),
        # P is A-admissible for the source quartet
        "source_admissible": all(contains(t, source) for t in gw) and all(contains(t, source_unresolved) for t in ow),
        # the PO quartet is unanimous
        "unanimous": all(contains(t, pareto) for t in (*gw, *ow)),
        # P restricted to the target's taxa matches every A-admissible profile for the target
        "restriction": all(contains(t, target) for t in gw) and all(contains(t, target_unresolved) for t in ow),
        "inference": check_inference([source, pareto], target, leaves).sound,
    }
    return {"source": source, "target": target, "ok": all(checks.values()), "checks": checks,
            "witnesses": (len(gw), len(ow))}


def _check_one_step_profiles(leaves: LeafSet, k: int) -> ProfileCheck:
    """Compare the fixed constructed P with every A-admissible profile for bv|cd.

    Ind carries the conclusion over only if they agree on {b, c, d, v}.
    """
    group = QuartetConstraintSet(leaves, [parse_quartet(t, ONE_STEP_ROLES) for t in ONE_STEP_GROUP])
    outside = QuartetConstraintSet(leaves, [parse_quartet(t, ONE_STEP_ROLES) for t in ONE_STEP_OUTSIDE])
    gw, ow = trees_realizing(group).witnesses[0], trees_realizing(outside).witnesses[0]
    source, pareto, target = (parse_quartet(t, ONE_STEP_ROLES) for t in ("ab|cd", "av|cd", "bv|cd"))
    X = target.taxa
    space = ProfileSpace(leaves, k)
    check = ProfileCheck(k)
    for I in coalitions(k):
        check.coalitions += 1
        built = [gw if i in I else ow for i in range(1, k + 1)]
        premises_met = is_admissible(built, I, source, "A") and all(contains(t, pareto) for t in built)
        for profile in space:
            if not is_admissible(profile, I, target, "A"):
                continue
            check.admissible += 1
            check.built += 1
            check.agree += restrict_profile(built, X) == profile.restrict(X)
            check.steps_met += premises_met
    return check


def verify_lemma1_construction(leaves: LeafSet = ONE_STEP_ROLES, k: int = 2) -> LemmaReport:
    """Audit the one-step spread of almost-decisiveness and its role variants.

    The literal instance takes ab|cd to bv|cd.  Variants come from rebinding the
    roles a, b, c, d, v to the five taxa in every way; breadth-first search over
    the verified steps shows which resolved quartets are reachable from ab|cd.
    """
    if leaves.n != 5:
        raise ValueError("the one-step construction is checked on exactly five taxa")
    base = _one_step(leaves, range(5))
    report = LemmaReport("1-only-if", INVALID)
    for name, side in (("group", ONE_STEP_GROUP), ("outside", ONE_STEP_OUTSIDE)):
        cs = QuartetConstraintSet(leaves, [parse_quartet(t, ONE_STEP_ROLES) for t in side])
        res = trees_realizing(cs)
        report.branches.append(BranchReport(name, cs.texts(), res.realizable, len(res.witnesses), [], True))
    src, pareto, tgt = (parse_quartet(t, ONE_STEP_ROLES) for t in ("ab|cd", "av|cd", "bv|cd"))
    report.inferences.append(check_inference([src, pareto], tgt, leaves))
    for name, ok in base["checks"].items():
        if not ok:
            report.notes.append(f"literal instance: {name} fails")
    report.profiles = _check_one_step_profiles(leaves, k)
    if not report.profiles.ok:
        report.notes.append("the constructed profile disagrees with some admissible profile on the target taxa")

    edges: dict[Quartet, set[Quartet]] = {}
    failed = []
    for roles in permutations(range(5)):
        step = _one_step(leaves, roles)
        if step["ok"]:
            edges.setdefault(step["source"], set()).add(step["target"])
        else:
            failed.append(roles)
    start = base["source"]
    reached = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for t in sorted(edges.get(node, ())):
                if t not in reached:
                    reached.add(t)
                    nxt.append(t)
        frontier = nxt
    all_resolved = {q for t in enumerate_phylogenies(leaves) for q in _resolved(t)}
    report.extra = {
        "variants_checked": 120,
        "variants_failed": len(failed),
        "one_step_targets": sorted(q.text(leaves) for q in edges.get(start, ())),
        "reachable": sorted(q.text(leaves) for q in reached),
        "unreachable": sorted(q.text(leaves) for q in all_resolved - reached),
    }
    if failed:
        report.notes.append(f"{len(failed)} role variants fail")
    if all_resolved - reached:
        report.notes.append("some resolved quartets are not reachable from ab|cd")
    ok = base["ok"] and report.profiles.ok and not failed and not (all_resolved - reached)
    report.verdict = VALID if ok else INVALID
    return report


def _resolved(tree: Phylogeny) -> list[Quartet]:
    from .quartets import quartet_system

    return quartet_system(tree).resolved()


FLAW_SETS = (("vwxy", "vwxz", "wy|xz"), ("vwxy", "vwxz", "wz|xy"))


@dataclass
class FlawCertificate:
    empty_sets: dict[str, int]
    implied: list[str]
    recipe: LemmaReport
    example: str | None

    @property
    def reproduced(self) -> bool:
        return (
            all(c == 0 for c in self.empty_sets.values())
            and set(self.implied) == {"wx|yz", "wxyz"}
            and not self.recipe.valid
            and self.recipe.uncovered == ["wy|xz", "wz|xy"]
        )


def reproduce_flaw() -> FlawCertificate:
    """Show that the original construction cannot agree with P on X in two cases."""
    roles = LeafSet.of("vwxyz")
    counts = {}
    for texts in FLAW_SETS:
        cs = QuartetConstraintSet.parse(list(texts), roles)
        counts[" ".join(texts)] = len(trees_realizing(cs).witnesses)
    base = QuartetConstraintSet.parse(["vwxy", "vwxz"], roles)
    implied = sorted(
        Quartet(roles.indices("wxyz"), t).text(roles) for t in implied_restriction(base, "wxyz")  # type: ignore[arg-type]
    )
    recipe = verify_recipe("flawed-original")
    return FlawCertificate(counts, implied, recipe, recipe.profiles.example_failure if recipe.profiles else None)
