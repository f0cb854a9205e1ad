"""Plain-dict and text renderings of the harness reports.

Dicts are built in a fixed key order so JSON output is stable.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .consensus import AxiomReport, Witness
from .decisive import ChainReport, DecisivenessReport
from .lemmas import FlawCertificate, LemmaReport
from .newick import write_newick
from .trees import LeafSet


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def witness_dict(w: Witness | None, leaves: LeafSet) -> dict | None:
    if w is None:
        return None
    out: dict = {"profile": w.profile.newick()}
    if w.other is not None:
        out["other"] = w.other.newick()
    if w.subset is not None:
        out["subset"] = [leaves.name(i) for i in w.subset]
    if w.quartet is not None:
        out["quartet"] = w.quartet.text(leaves)
    if w.coordinate is not None:
        out["coordinate"] = w.coordinate
    return out


def axiom_dict(r: AxiomReport, leaves: LeafSet) -> dict:
    return {
        "axiom": r.axiom,
        "rule": r.rule,
        "holds": r.holds,
        "mode": r.mode,
        "checked_profiles": r.checked,
        "violations": r.violations,
        "dictator": r.dictator,
        "witness": witness_dict(r.witness, leaves),
        "candidates": {str(j): witness_dict(w, leaves) for j, w in sorted(r.candidates.items())},
    }


def axiom_text(r: AxiomReport, leaves: LeafSet) -> str:
    head = f"{r.axiom:<4} {r.rule}: {'holds' if r.holds else 'FAILS'} ({r.mode}, {r.checked} profiles)"
    if r.dictator:
        head += f", dictator {r.dictator}"
    lines = [head]
    if r.axiom == "Dct" and not r.holds:
        for j, w in sorted(r.candidates.items()):
            lines.append(f"     candidate {j}: {w.quartet.text(leaves)} lost on {' '.join(w.profile.newick())}")
    elif r.witness is not None:
        w = r.witness
        if w.subset is not None:
            lines.append(f"     X={{{','.join(leaves.name(i) for i in w.subset)}}}")
            lines.append(f"     P ={' '.join(w.profile.newick())}")
            lines.append(f"     P'={' '.join(w.other.newick())}")
        else:
            lines.append(f"     {w.quartet.text(leaves)} lost on {' '.join(w.profile.newick())}")
    return "\n".join(lines)


def decisiveness_dict(r: DecisivenessReport, leaves: LeafSet) -> dict:
    return {
        "rule": r.rule,
        "coalition": list(r.coalition),
        "quartet": r.quartet.text(leaves),
        "level": r.level,
        "alternative": r.alternative.text(leaves) if r.alternative else None,
        "holds": r.holds,
        "degenerate": r.degenerate,
        "mode": r.mode,
        "checked_profiles": r.checked_profiles,
        "witness": r.witness.newick() if r.witness else None,
    }


def decisiveness_text(r: DecisivenessReport, leaves: LeafSet) -> str:
    level = r.level + (f"[{r.alternative.text(leaves)}]" if r.alternative else "")
    text = (
        f"{r.rule} I={{{','.join(map(str, r.coalition))}}} {r.quartet.text(leaves)} level {level}: "
        f"{'holds' if r.holds else 'fails'} over {r.checked_profiles} admissible profiles"
    )
    if r.degenerate:
        text += " (degenerate: empty coalition)"
    if r.witness:
        text += f"\n  witness {' '.join(r.witness.newick())}"
    return text


def chain_dict(r: ChainReport, leaves: LeafSet) -> dict:
    return {
        "rule": r.rule,
        "coalition": list(r.coalition),
        "label": r.label,
        "degenerate": r.degenerate,
        "mode": r.mode,
        "nested": r.nested,
        "monotone": r.monotone,
        "contradictions": list(r.contradictions),
        "results": r.results,
    }


def chain_text(r: ChainReport, leaves: LeafSet) -> str:
    lines = [f"{r.rule} I={{{','.join(map(str, r.coalition))}}}: {r.label}"
             + (" (degenerate)" if r.degenerate else "")]
    for q, row in r.results.items():
        cells = " ".join(f"{name}={'y' if ok else 'n'}" for name, ok in row.items())
        lines.append(f"  {q:<6} {cells}")
    lines.append(f"  nested admissible sets: {r.nested}; monotone: {r.monotone}")
    for c in r.contradictions:
        lines.append(f"  CONTRADICTION: {c}")
    return "\n".join(lines)


def lemma_dict(r: LemmaReport) -> dict:
    return {
        "lemma": r.lemma,
        "verdict": r.verdict,
        "admitted_outside": r.admitted,
        "uncovered": r.uncovered,
        "branches": [asdict(b) for b in r.branches],
        "inferences": [
            {
                "inference": i.inference,
                "sound": i.sound,
                "dyadic_pattern": i.dyadic,
                "trees_checked": i.trees_checked,
                "counterexample": write_newick(i.counterexample) if i.counterexample else None,
            }
            for i in r.inferences
        ],
        "profiles": asdict(r.profiles) if r.profiles else None,
        "notes": r.notes,
        "extra": r.extra,
    }


def lemma_text(r: LemmaReport) -> str:
    lines = [f"lemma {r.lemma}: {r.verdict}"]
    for b in r.branches:
        lines.append(
            f"  {b.label:<12} realizable={b.realizable} witnesses={b.witness_count} "
            f"on X: {', '.join(b.forced_restriction) or '-'}"
        )
    if r.admitted:
        lines.append(f"  outsiders may show: {', '.join(r.admitted)}")
        lines.append(f"  uncovered: {', '.join(r.uncovered) or 'none'}")
    for i in r.inferences:
        lines.append(f"  {i.inference}: {'sound' if i.sound else 'UNSOUND'} on {i.trees_checked} trees")
    if r.profiles:
        p = r.profiles
        lines.append(
            f"  profiles k={p.k}: {p.admissible} admissible, {p.built} built, {p.agree} agree on X, "
            f"{p.steps_met} meet the weaker hypotheses"
        )
        if p.example_failure:
            lines.append(f"  first failure: {p.example_failure}")
    for key, value in r.extra.items():
        lines.append(f"  {key}: {value}")
    for n in r.notes:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


def flaw_dict(c: FlawCertificate) -> dict:
    return {
        "reproduced": c.reproduced,
        "witness_counts": c.empty_sets,
        "implied_on_wxyz": c.implied,
        "uncovered": c.recipe.uncovered,
        "recipe_verdict": c.recipe.verdict,
        "example": c.example,
    }


def flaw_text(c: FlawCertificate) -> str:
    lines = [f"flaw reproduced: {c.reproduced}"]
    for cs, count in c.empty_sets.items():
        lines.append(f"  {{{cs}}}: {count} witnesses")
    lines.append(f"  {{vwxy, vwxz}} allows on wxyz only: {', '.join(c.implied)}")
    lines.append(f"  original recipe: {c.recipe.verdict}; uncovered {', '.join(c.recipe.uncovered)}")
    if c.example:
        lines.append(f"  e.g. {c.example}")
    return "\n".join(lines)
