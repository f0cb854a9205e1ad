import random

import pytest

from quartet_arrow.errors import ParseError, TriggerMismatch, UnrealizableBranch
from quartet_arrow.newick import parse_newick
from quartet_arrow.quartets import QuartetConstraintSet, QuartetTopology, quartet_system, restrict_profile
from quartet_arrow.realize import (
    build_profile_prime,
    implied_restriction,
    load_builtin_recipe,
    parse_recipe,
    trees_realizing,
)
from quartet_arrow.trees import LeafSet, enumerate_phylogenies

U = QuartetTopology.UNRESOLVED


def cs(text, leaves):
    return QuartetConstraintSet.parse(text, leaves)


def test_one_step_group_realizable():
    leaves = LeafSet.of("abcdv")
    res = trees_realizing(cs("ab|cd ab|cv ab|dv av|cd bv|cd", leaves))
    assert parse_newick("((a,b),v,(c,d));", leaves) in res.witnesses
    assert res.exhaustive


def test_flaw_set_empty(vwxyz):
    assert trees_realizing(cs("vwxy vwxz wy|xz", vwxyz)).witnesses == ()


def test_empty_constraints(abcde):
    assert len(trees_realizing(cs("", abcde)).witnesses) == 26


def test_witnesses_satisfy_constraints(trees6):
    leaves = trees6[0].leaves
    constraints = cs("ab|cd ef|ac bcde", leaves)
    for t in trees_realizing(constraints).witnesses:
        assert constraints.satisfied_by(t)
        texts = quartet_system(t).texts()
        assert {"ab|cd", "ac|ef", "bcde"} <= set(texts)


def test_completeness_spot_check(trees6):
    rng = random.Random(2024)
    for _ in range(100):
        tree = rng.choice(trees6)
        quartets = quartet_system(tree).quartets()
        chosen = rng.sample(quartets, rng.randint(0, len(quartets)))
        constraints = QuartetConstraintSet(tree.leaves, chosen)
        assert tree in trees_realizing(constraints).witnesses


def test_implied_restriction(vwxyz):
    assert implied_restriction(cs("vwxy vwxz", vwxyz), "wxyz") == {U, QuartetTopology.R12_34}
    assert implied_restriction(cs("wx|yz", vwxyz), "wxyz") == {QuartetTopology.R12_34}
    assert implied_restriction(cs("", vwxyz), "wxyz") == set(QuartetTopology)


def test_recipe_parse_errors():
    with pytest.raises(ParseError):
        parse_recipe("ab|cd\n")
    with pytest.raises(ParseError):
        parse_recipe("[group]\nwx|yz\n[case]\nvwxy\n")
    with pytest.raises(ParseError):
        parse_recipe("[bogus]\n")


def test_builtin_recipes_load():
    d = load_builtin_recipe("D")
    assert len(d.branches) == 4
    assert d.hypothesis == "D"
    assert d.role_x == ("w", "x", "y", "z") and d.role_v == "v"
    flawed = load_builtin_recipe("flawed-original")
    assert flawed.branches[0].trigger is None


def _profile(leaves, *texts):
    return [parse_newick(t, leaves) for t in texts]


def test_build_profile_prime_lemma4(vwxyz):
    recipe = load_builtin_recipe("B")
    P = _profile(vwxyz, "((w,x),v,(y,z));", "(v,w,x,y,z);")
    prime = build_profile_prime(P, {1}, "wxyz", "v", recipe)
    assert restrict_profile(prime, "wxyz") == restrict_profile(P, "wxyz")
    group = quartet_system(prime[0]).texts()
    assert {"wx|yz", "vy|wx", "vwyz", "vxyz"} <= set(group)


def test_build_profile_prime_lemma6_other_resolution(vwxyz):
    recipe = load_builtin_recipe("D")
    P = _profile(vwxyz, "((w,x),v,(y,z));", "((w,y),v,(x,z));")
    prime = build_profile_prime(P, {1}, "wxyz", "v", recipe)
    outside = set(quartet_system(prime[1]).texts())
    assert {"vwxy", "vwyz", "vw|xz", "vy|xz"} <= outside
    assert restrict_profile(prime, "wxyz") == restrict_profile(P, "wxyz")


def test_flawed_recipe_unrealizable(vwxyz):
    recipe = load_builtin_recipe("flawed-original")
    P = _profile(vwxyz, "((w,x),v,(y,z));", "((w,y),v,(x,z));")
    with pytest.raises(UnrealizableBranch):
        build_profile_prime(P, {1}, "wxyz", "v", recipe)


def test_trigger_mismatch(vwxyz):
    recipe = load_builtin_recipe("B")
    P = _profile(vwxyz, "((w,x),v,(y,z));", "((w,y),v,(x,z));")
    with pytest.raises(TriggerMismatch):
        build_profile_prime(P, {1}, "wxyz", "v", recipe)
    with pytest.raises(TriggerMismatch):
        build_profile_prime(P, {2}, "wxyz", "v", recipe)


def test_recipe_on_larger_leaf_set():
    leaves = LeafSet.of("abcdef")
    recipe = load_builtin_recipe("D")
    trees = enumerate_phylogenies(leaves)
    P = [parse_newick("((a,b),(c,d),(e,f));", leaves), trees[0]]
    prime = build_profile_prime(P, {1}, "abcd", "e", recipe)
    assert restrict_profile(prime, "abcd") == restrict_profile(P, "abcd")
