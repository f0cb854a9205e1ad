from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import path_vector
from quartet_arrow.errors import ConstraintConflict, ParseError, SubsetTooSmall
from quartet_arrow.newick import parse_newick
from quartet_arrow.quartets import (
    Quartet,
    QuartetConstraintSet,
    QuartetTopology,
    contains,
    dyadic_step,
    parse_quartet,
    quartet_system,
    restrict_profile,
    restrict_tree,
    topology_of,
    topology_vector,
)
from quartet_arrow.trees import LeafSet

U = QuartetTopology.UNRESOLVED


def test_star_topologies(star):
    for four in combinations("abcde", 4):
        assert topology_of(star, four) is U


def test_caterpillar_topology(caterpillar, abcde):
    assert topology_of(caterpillar, "abcd") == parse_quartet("ab|cd", abcde).topology
    assert topology_of(caterpillar, "dcba") == QuartetTopology.R12_34


def test_four_leaf_tree():
    t = parse_newick("((a,b),(c,d));")
    assert topology_of(t, "abcd") == QuartetTopology.R12_34


def test_systems(star, caterpillar):
    assert quartet_system(star).texts() == ["abcd", "abce", "abde", "acde", "bcde"]
    assert quartet_system(caterpillar).texts() == ["ab|cd", "ab|ce", "ab|de", "ac|de", "bc|de"]


def test_group_recipe_tree(vwxyz):
    # u adj {w,x,u2}, u2 adj {y,z,v,u}
    t = parse_newick("((w,x),(y,z,v));", vwxyz)
    texts = quartet_system(t).texts()
    for q in ("vy|wx", "vz|wx", "wx|yz", "vwyz", "vxyz"):
        assert q in texts


def test_paths_agree_with_networkx_oracle(trees6, trees5):
    # exactly one configuration per 4-subset, read literally off shared vertices
    for t in (*trees5, *trees6):
        assert topology_vector(t) == path_vector(t)


def test_restrictions(caterpillar, star, abcde):
    assert restrict_tree(caterpillar, "abcde") == quartet_system(caterpillar)
    assert restrict_tree(caterpillar, "abcd").texts() == ["ab|cd"]
    assert restrict_tree(star, "abcd").texts() == ["abcd"]
    with pytest.raises(SubsetTooSmall):
        restrict_tree(star, "abc")


def test_restrict_profile(caterpillar, star):
    assert [s.texts() for s in restrict_profile([star, star], "bcde")] == [["bcde"], ["bcde"]]
    assert [s.texts() for s in restrict_profile([caterpillar, star], "abde")] == [["ab|de"], ["abde"]]
    p = [caterpillar, star]
    assert restrict_profile(p, "abcd") == restrict_profile(p, "abcd")


def test_restriction_coherence(trees6):
    leaves = trees6[0].leaves
    for t in trees6[::7]:
        for big in combinations(leaves.names, 5):
            for small in combinations(big, 4):
                assert restrict_tree(t, big).restrict(small) == restrict_tree(t, small)


@pytest.mark.parametrize("text", ["ab|cd", "ba|dc", "cd|ab", "dc|ba"])
def test_notation_symmetry(text, abcde):
    q = parse_quartet(text, abcde)
    assert q == Quartet((0, 1, 2, 3), QuartetTopology.R12_34)
    assert q.text(abcde) == "ab|cd"


def test_quartet_text_forms(abcde):
    assert parse_quartet("ec|ab", abcde).text(abcde) == "ab|ce"
    assert parse_quartet("dbca", abcde).text(abcde) == "abcd"
    with pytest.raises(ParseError):
        parse_quartet("ab|ca", abcde)
    with pytest.raises(ParseError):
        parse_quartet("ab|c", abcde)


def test_constraint_file_format(abcde):
    cs = QuartetConstraintSet.parse("# comment\nab|cd\n\nbcde  # trailing\n", abcde)
    assert cs.texts() == ["ab|cd", "bcde"]
    with pytest.raises(ConstraintConflict):
        QuartetConstraintSet.parse("ab|cd\nac|bd\n", abcde)


def test_dyadic_step_examples():
    leaves = LeafSet.of("abcdefgh")
    q = lambda s: parse_quartet(s, leaves)  # noqa: E731
    assert dyadic_step(q("ab|cd"), q("ab|ec")) == q("ab|ed")
    assert dyadic_step(q("ab|cd"), q("av|cd".replace("v", "e"))) == q("be|cd")
    assert dyadic_step(q("ab|cd"), q("ef|gh")) is None
    assert dyadic_step(q("ab|cd"), q("abcd")) is None


def test_dyadic_step_respects_system(caterpillar, abcde):
    s = quartet_system(caterpillar)
    q = lambda t: parse_quartet(t, abcde)  # noqa: E731
    assert dyadic_step(q("ab|cd"), q("ab|ec"), s) == q("ab|de")
    assert dyadic_step(q("ac|bd"), q("ac|eb"), s) is None


def _all_dyadic_counterexamples(trees):
    bad = 0
    for t in trees:
        names = t.leaves.names
        for v, w, x, y, z in permutations(range(len(names)), 5):
            if contains(t, Quartet.resolved_from((w, x), (y, z))) and contains(t, Quartet.resolved_from((w, x), (v, y))):
                bad += not contains(t, Quartet.resolved_from((w, x), (v, z)))
            if contains(t, Quartet.resolved_from((v, w), (x, y))) and contains(t, Quartet.resolved_from((v, z), (x, y))):
                bad += not contains(t, Quartet.resolved_from((w, z), (x, y)))
    return bad


def test_dyadic_soundness(trees5):
    assert _all_dyadic_counterexamples(trees5) == 0


@given(st.permutations("abcdefgh"))
def test_dyadic_step_is_symmetric_in_notation(perm):
    leaves = LeafSet.of("abcdefgh")
    a, b, c, d, e = perm[:5]
    p1 = parse_quartet(f"{a}{b}|{c}{d}", leaves)
    p2 = parse_quartet(f"{b}{a}|{e}{c}", leaves)
    assert dyadic_step(p1, p2) == parse_quartet(f"{a}{b}|{d}{e}", leaves)
    assert dyadic_step(p2, p1) == parse_quartet(f"{a}{b}|{d}{e}", leaves)


def test_uniqueness_of_systems(trees5):
    systems = [quartet_system(t) for t in trees5]
    assert len(set(s.topologies for s in systems)) == 26
