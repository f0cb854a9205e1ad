"""Command-line driver.

Exit codes: 0 when every verdict agrees with the theorem and lemmas, 2 when a
contradiction is detected, 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import string
import sys
from pathlib import Path

from . import report
from .consensus import ProfileSpace, all_witnesses, check_axioms, replay_witness, rule_from_name
from .decisive import LEVELS, check_decisiveness, replay_decisiveness, verify_chain
from .errors import PhyloError
from .lemmas import reproduce_flaw, verify_lemma1_construction, verify_recipe
from .newick import parse_newick, write_newick
from .quartets import QuartetConstraintSet, parse_quartet, quartet_system
from .realize import BUILTIN_RECIPES, parse_recipe, trees_realizing
from .trees import MAX_LEAVES, LeafSet, enumerate_phylogenies

EXIT_OK, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2
LEMMA_IDS = ("1-only-if", *BUILTIN_RECIPES)


def theorem_taxa(n: int) -> LeafSet:
    """The last ``n`` letters, so five taxa are v, w, x, y, z."""
    if n < 5:
        raise ValueError(f"theorem commands need n >= 5, got {n}")
    if n > 26:
        raise ValueError("at most 26 default taxa")
    return LeafSet.of(string.ascii_lowercase[-n:])


def plain_taxa(n: int) -> LeafSet:
    if n > 26:
        raise ValueError("at most 26 default taxa")
    return LeafSet.of(string.ascii_lowercase[:n])


def _emit(args, text: str, data) -> None:
    out = report.dumps(data) if args.format == "json" else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _space(args, leaves: LeafSet) -> ProfileSpace:
    return ProfileSpace(leaves, args.k, samples=args.samples, seed=args.seed)


def cmd_enumerate(args) -> int:
    leaves = LeafSet.of(args.taxa) if args.taxa else plain_taxa(args.n)
    trees = enumerate_phylogenies(leaves, args.binary, max_leaves=args.max_n)
    lines = [write_newick(t) for t in trees]
    _emit(args, "\n".join([str(len(trees)), *lines]), {"count": len(trees), "trees": lines})
    return EXIT_OK


def cmd_quartets(args) -> int:
    tree = parse_newick(args.newick, LeafSet.of(args.taxa) if args.taxa else None)
    texts = quartet_system(tree).texts()
    _emit(args, "\n".join(texts), {"tree": write_newick(tree), "quartets": texts})
    return EXIT_OK


def _constraint_taxa(text: str, n: int | None) -> LeafSet:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    used = sorted({c for c in body if c.isalnum()})
    n = n or max(5, len(used))
    if len(used) > n:
        raise ValueError(f"constraints mention {len(used)} taxa but n={n}")
    spare = [c for c in string.ascii_lowercase if c not in used]
    return LeafSet.of(sorted(used + spare[: n - len(used)]))


def cmd_realize(args) -> int:
    text = Path(args.constraints).read_text()
    leaves = LeafSet.of(args.taxa) if args.taxa else _constraint_taxa(text, args.n)
    constraints = QuartetConstraintSet.parse(text, leaves)
    result = trees_realizing(constraints, max_leaves=args.max_n)
    lines = [write_newick(t) for t in result.witnesses]
    _emit(
        args,
        "\n".join([f"{len(lines)} witnesses", *lines]),
        {"taxa": list(leaves.names), "constraints": constraints.texts(), "witnesses": lines,
         "exhaustive": result.exhaustive},
    )
    return EXIT_OK


def cmd_check_axioms(args) -> int:
    leaves = theorem_taxa(args.n)
    space = _space(args, leaves)
    status = EXIT_OK
    texts, data = [], []
    for name in args.rule or ["dictator:1"]:
        rule = rule_from_name(name, args.k)
        reports = check_axioms(rule, space)
        replayed = all(replay_witness(a, w, rule) for a, r in reports.items() for w in all_witnesses(r))
        consistent = reports["Dct"].holds == (reports["Ind"].holds and reports["PO"].holds)
        if not (replayed and consistent):
            status = EXIT_CONTRADICTION
        texts.extend(report.axiom_text(r, leaves) for r in reports.values())
        texts.append(f"     Dct <=> Ind and PO: {'consistent' if consistent else 'CONTRADICTED'}; "
                     f"witnesses replay: {replayed}")
        data.append({"rule": name, "consistent": consistent, "witnesses_replay": replayed,
                     "reports": [report.axiom_dict(r, leaves) for r in reports.values()]})
    _emit(args, "\n".join(texts), data)
    return status


def cmd_verify_lemma(args) -> int:
    if args.recipe:
        recipe = parse_recipe(Path(args.recipe).read_text(), args.lemma or Path(args.recipe).stem)
        r = verify_recipe(recipe, k=args.k)
        expected_valid = True
    elif args.lemma == "1-only-if":
        r = verify_lemma1_construction()
        expected_valid = True
    elif args.lemma in BUILTIN_RECIPES:
        r = verify_recipe(args.lemma, k=args.k)
        expected_valid = args.lemma != "flawed-original"
    else:
        raise ValueError(f"unknown lemma {args.lemma!r}; choose from {', '.join(LEMMA_IDS)} or pass --recipe")
    _emit(args, report.lemma_text(r), report.lemma_dict(r))
    return EXIT_OK if r.valid == expected_valid else EXIT_CONTRADICTION


def cmd_reproduce_flaw(args) -> int:
    cert = reproduce_flaw()
    _emit(args, report.flaw_text(cert), report.flaw_dict(cert))
    return EXIT_OK if cert.reproduced else EXIT_CONTRADICTION


def cmd_decisive(args) -> int:
    leaves = theorem_taxa(args.n)
    space = _space(args, leaves)
    rule = rule_from_name(args.rule, args.k)
    coalition = tuple(int(c) for c in args.coalition.split(",") if c.strip()) if args.coalition else ()
    if args.chain:
        r = verify_chain(rule, coalition, space)
        _emit(args, report.chain_text(r, leaves), report.chain_dict(r, leaves))
        return EXIT_CONTRADICTION if r.contradictions else EXIT_OK
    quartet = parse_quartet(args.quartet, leaves)
    alt = parse_quartet(args.alternative, leaves) if args.alternative else None
    r = check_decisiveness(rule, coalition, quartet, args.level, space, alt)
    if r.witness is not None and not replay_decisiveness(r, rule):
        return EXIT_CONTRADICTION
    _emit(args, report.decisiveness_text(r, leaves), report.decisiveness_dict(r, leaves))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for contradictions
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--max-n", type=int, default=MAX_LEAVES, help="enumeration cap")

    space = _Parser(add_help=False)
    space.add_argument("--n", type=int, default=5)
    space.add_argument("--k", type=int, default=2)
    space.add_argument("--seed", type=int, help="sample the profile space (required when it is too large)")
    space.add_argument("--samples", type=int, help="number of sampled profiles")

    parser = _Parser(prog="quartet-arrow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list all phylogenies on n taxa")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--taxa", help="taxon names as one string of letters")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("quartets", parents=[common], help="quartet system of a Newick tree")
    p.add_argument("newick")
    p.add_argument("--taxa")
    p.set_defaults(func=cmd_quartets)

    p = sub.add_parser("realize", parents=[common], help="trees realizing a quartet constraint file")
    p.add_argument("constraints")
    p.add_argument("--n", type=int)
    p.add_argument("--taxa")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check-axioms", parents=[common, space], help="check Dct, Ind and PO for rules")
    p.add_argument("--rule", action="append", help="dictator:<j>, majority, constant:star (repeatable)")
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("verify-lemma", parents=[common], help="audit a lemma construction")
    p.add_argument("lemma", nargs="?", help=", ".join(LEMMA_IDS))
    p.add_argument("--recipe", help="audit a recipe file instead of a built-in one")
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("reproduce-flaw", parents=[common], help="certificate that the unrefined construction is unrealizable")
    p.set_defaults(func=cmd_reproduce_flaw)

    p = sub.add_parser("decisive", parents=[common, space], help="decisiveness of a coalition")
    p.add_argument("--rule", default="dictator:1")
    p.add_argument("--coalition", default="1", help="comma-separated individuals, e.g. 1,2 (empty allowed)")
    p.add_argument("--quartet", default="wx|yz")
    p.add_argument("--level", choices=LEVELS, default="D")
    p.add_argument("--alternative", help="C level: the other resolution admitted outside")
    p.add_argument("--chain", action="store_true", help="run every level on every quartet")
    p.set_defaults(func=cmd_decisive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PhyloError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
