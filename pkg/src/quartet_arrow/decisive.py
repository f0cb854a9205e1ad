"""Decisiveness of coalitions at levels A to D, and the A => B => C => D chain.

For a coalition I and a resolved quartet t on X, a profile is admissible at a
level when every member of I shows t on X and every outsider shows one of:

    A: unresolved
    B: unresolved or t
    C: unresolved, t, or one named alternative resolution
    D: anything

The coalition is decisive at that level for t when every admissible profile
puts t in the output.  Level A is almost-decisiveness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable

from .consensus import ConsensusRule, Profile, ProfileSpace, check_Ind, check_PO
from .errors import UnresolvedQuartetQuery
from .quartets import RESOLVED, Quartet, QuartetTopology, fourset_positions, restrict_tree, topology_vector

LEVELS = ("A", "B", "C", "D")


def literal_alternative(quartet: Quartet) -> Quartet:
    """For ``quartet`` written ``ab|cd`` (its normal text form), the resolution ``ac|bd``."""
    (a, b), (c, d) = quartet.sides()
    return Quartet.resolved_from((a, c), (b, d))


def other_resolutions(quartet: Quartet) -> list[Quartet]:
    return [Quartet(quartet.taxa, t) for t in RESOLVED if t != quartet.topology]


def outside_admitted(level: str, quartet: Quartet, alternative: Quartet | None = None) -> frozenset[int]:
    """Topology codes an outsider may show on the quartet's 4-subset."""
    u = int(QuartetTopology.UNRESOLVED)
    t = int(quartet.topology)
    if level == "A":
        return frozenset({u})
    if level == "B":
        return frozenset({u, t})
    if level == "C":
        alt = alternative or literal_alternative(quartet)
        if alt.taxa != quartet.taxa or not alt.resolved or alt.topology == quartet.topology:
            raise ValueError("the C-level alternative must be another resolution of the same 4-subset")
        return frozenset({u, t, int(alt.topology)})
    if level == "D":
        return frozenset({0, 1, 2, 3})
    raise ValueError(f"unknown level {level!r}")


def is_admissible(
    profile: Profile | Iterable, coalition: Iterable[int], quartet: Quartet, level: str,
    alternative: Quartet | None = None,
) -> bool:
    trees = list(profile)
    coalition = set(coalition)
    allowed = outside_admitted(level, quartet, alternative)
    for i, tree in enumerate(trees, start=1):
        topo = restrict_tree(tree, quartet.taxa).topologies[0]
        if i in coalition:
            if topo != quartet.topology:
                return False
        elif topo not in allowed:
            return False
    return True


@dataclass
class DecisivenessReport:
    rule: str
    coalition: tuple[int, ...]
    quartet: Quartet
    level: str
    holds: bool
    checked_profiles: int
    alternative: Quartet | None = None
    witness: Profile | None = None
    mode: str = "exhaustive"

    @property
    def degenerate(self) -> bool:
        return not self.coalition


def check_decisiveness(
    rule: ConsensusRule,
    coalition: Iterable[int],
    quartet: Quartet,
    level: str,
    space: ProfileSpace,
    alternative: Quartet | None = None,
) -> DecisivenessReport:
    if not quartet.resolved:
        raise UnresolvedQuartetQuery("decisiveness is defined for resolved quartets only")
    coalition = tuple(sorted(set(coalition)))
    if any(not 1 <= i <= space.k for i in coalition):
        raise ValueError(f"coalition {coalition} is not inside 1..{space.k}")
    if level == "C":
        alternative = alternative or literal_alternative(quartet)
    allowed = outside_admitted(level, quartet, alternative)
    position = fourset_positions(space.leaves.n)[quartet.taxa]
    t = int(quartet.topology)
    members = [i - 1 for i in coalition]
    outsiders = [i for i in range(space.k) if i + 1 not in coalition]
    report = DecisivenessReport(rule.name, coalition, quartet, level, True, 0,
                                alternative if level == "C" else None, mode=space.mode)
    outputs = space.outputs(rule)
    for ix, out in zip(space.indices, outputs):
        topos = [space.vectors[i][position] for i in ix]
        if any(topos[m] != t for m in members) or any(topos[o] not in allowed for o in outsiders):
            continue
        report.checked_profiles += 1
        if report.holds and topology_vector(out)[position] != t:
            report.holds = False
            report.witness = space.profile(ix)
    return report


def replay_decisiveness(report: DecisivenessReport, rule: ConsensusRule) -> bool:
    """True if the stored witness is admissible and the output misses the quartet."""
    if report.witness is None:
        return False
    q = report.quartet
    return is_admissible(report.witness, report.coalition, q, report.level, report.alternative) and (
        restrict_tree(rule(report.witness), q.taxa).topologies[0] != q.topology
    )


def resolved_quartets(space: ProfileSpace) -> list[Quartet]:
    return [Quartet(f, t) for f in fourset_positions(space.leaves.n) for t in RESOLVED]  # type: ignore[arg-type]


def level_queries(quartet: Quartet) -> list[tuple[str, Quartet | None]]:
    """(level, alternative) pairs covering every reading of a quartet: C is run for both alternatives."""
    return [("A", None), ("B", None), *(("C", alt) for alt in other_resolutions(quartet)), ("D", None)]


def coalitions(k: int) -> list[tuple[int, ...]]:
    members = range(1, k + 1)
    return list(chain.from_iterable(combinations(members, r) for r in range(k + 1)))


def holds_for_all(rule: ConsensusRule, coalition: Iterable[int], level: str, space: ProfileSpace) -> bool:
    """Decisive at ``level`` for every resolved quartet (C: under both alternatives)."""
    coalition = tuple(coalition)
    for q in resolved_quartets(space):
        alts = other_resolutions(q) if level == "C" else [None]
        for alt in alts:
            if not check_decisiveness(rule, coalition, q, level, space, alt).holds:
                return False
    return True


def decisive_family(rule: ConsensusRule, level: str, space: ProfileSpace) -> list[tuple[int, ...]]:
    """All coalitions decisive at ``level`` for every resolved quartet (A gives the almost-decisive family)."""
    return [I for I in coalitions(space.k) if holds_for_all(rule, I, level, space)]


def admissible_rows(space: ProfileSpace, coalition, quartet: Quartet, level: str, alternative=None) -> set[int]:
    allowed = outside_admitted(level, quartet, alternative)
    position = fourset_positions(space.leaves.n)[quartet.taxa]
    out = set()
    for row, ix in enumerate(space.indices):
        topos = [space.vectors[i][position] for i in ix]
        if all(
            (topos[i - 1] == quartet.topology) if i in coalition else (topos[i - 1] in allowed)
            for i in range(1, space.k + 1)
        ):
            out.add(row)
    return out


@dataclass
class ChainReport:
    rule: str
    coalition: tuple[int, ...]
    hypotheses_met: bool
    results: dict[str, dict[str, bool]] = field(default_factory=dict)
    nested: bool = True
    monotone: bool = True
    contradictions: list[str] = field(default_factory=list)
    witnesses: list[DecisivenessReport] = field(default_factory=list)
    mode: str = "exhaustive"

    @property
    def label(self) -> str:
        return "checked" if self.hypotheses_met else "hypotheses unmet"

    @property
    def degenerate(self) -> bool:
        return not self.coalition


def verify_chain(rule: ConsensusRule, coalition: Iterable[int], space: ProfileSpace) -> ChainReport:
    """Run every level on every resolved quartet for one coalition and audit the implications.

    Checked claims: A for one quartet gives A for all; A for all gives B, C
    (both alternatives) and D for all; per quartet, D => C => B => A and the
    admissible-profile sets are nested.  Only a rule that satisfies Ind and PO
    can contradict the first two.
    """
    coalition = tuple(sorted(set(coalition)))
    met = check_Ind(rule, space).holds and check_PO(rule, space).holds
    report = ChainReport(rule.name, coalition, met, mode=space.mode)
    for q in resolved_quartets(space):
        key = q.text(space.leaves)
        row = {}
        level_reports = {}
        for level, alt in level_queries(q):
            r = check_decisiveness(rule, coalition, q, level, space, alt)
            name = level if level != "C" else f"C[{alt.text(space.leaves)}]"
            row[name] = r.holds
            level_reports[name] = r
            if r.witness is not None:
                report.witnesses.append(r)
        report.results[key] = row
        c_names = [n for n in row if n.startswith("C")]
        for c in c_names:
            chain_ok = (not row["D"] or row[c]) and (not row[c] or row["B"]) and (not row["B"] or row["A"])
            if not chain_ok:
                report.monotone = False
                report.contradictions.append(f"monotonicity broken on {key} ({c})")
            alt = level_reports[c].alternative
            sets = [
                admissible_rows(space, coalition, q, "A"),
                admissible_rows(space, coalition, q, "B"),
                admissible_rows(space, coalition, q, "C", alt),
                admissible_rows(space, coalition, q, "D"),
            ]
            if not all(a <= b for a, b in zip(sets, sets[1:])):
                report.nested = False
                report.contradictions.append(f"admissible sets not nested on {key} ({c})")
    any_a = any(row["A"] for row in report.results.values())
    all_a = all(row["A"] for row in report.results.values())
    if met and any_a and not all_a:
        report.contradictions.append("A holds for some quartet but not for all")
    if met and all_a:
        for key, row in report.results.items():
            for name, ok in row.items():
                if not ok:
                    report.contradictions.append(f"A for all quartets but {name} fails on {key}")
    return report
