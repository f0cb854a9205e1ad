import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import double_factorial, path_vector, split_systems, split_vector
from quartet_arrow.errors import DegreeTwoVertex, LeafLabelMismatch, NotTree, TooManyLeaves
from quartet_arrow.newick import parse_newick, write_newick
from quartet_arrow.quartets import quartet_system
from quartet_arrow.trees import LeafSet, canonical_code, enumerate_phylogenies, star_tree, validate


def test_star_is_valid(star):
    assert star.n == 5
    assert star.vertex_count == 6
    assert not star.internal_edges


def test_degree_two_rejected():
    with pytest.raises(DegreeTwoVertex):
        validate([("a", "u"), ("u", "b")], LeafSet.of("ab"))


def test_caterpillar_is_valid(caterpillar):
    assert sorted(caterpillar.degree(v) for v in caterpillar.internal_vertices) == [3, 3, 3]
    assert len(caterpillar.edges) == caterpillar.vertex_count - 1


def test_cycle_and_disconnected_rejected(abcde):
    spokes = [("o", t) for t in "abcde"]
    with pytest.raises(NotTree):
        validate(spokes + [("a", "b")], abcde)
    with pytest.raises(NotTree):
        validate([("o", "a"), ("o", "b"), ("o", "c"), ("p", "d"), ("p", "e"), ("p", "q"), ("q", "r")], abcde)


def test_leaf_label_mismatch(abcde):
    spokes = [("o", t) for t in "abcde"]
    with pytest.raises(LeafLabelMismatch):
        validate(spokes, abcde, {t: t for t in "abcd"})
    with pytest.raises(LeafLabelMismatch):
        validate(spokes, abcde, {"a": "a", "b": "b", "c": "c", "d": "d", "e": "o"})
    with pytest.raises(LeafLabelMismatch):
        validate([("o", t) for t in "abcdef"], abcde)


@pytest.mark.parametrize("n, total, binary", [(4, 4, 3), (5, 26, 15), (6, 236, 105)])
def test_enumeration_counts(n, total, binary):
    leaves = LeafSet.of("abcdef"[:n])
    assert len(enumerate_phylogenies(leaves)) == total
    assert len(enumerate_phylogenies(leaves, binary_only=True)) == binary == double_factorial(2 * n - 5)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_enumeration_matches_split_oracle(n):
    leaves = LeafSet.of("abcdef"[:n])
    ours = [path_vector(t) for t in enumerate_phylogenies(leaves)]
    oracle = [split_vector(s, n) for s in split_systems(n)]
    assert len(set(ours)) == len(ours)
    assert set(ours) == set(oracle)


def test_enumeration_sorted_and_valid(trees6):
    codes = [t.code for t in trees6]
    assert codes == sorted(codes)
    for t in trees6:
        degrees = [t.degree(v) for v in range(t.vertex_count)]
        assert all(d == 1 or d >= 3 for d in degrees)
        assert degrees.count(1) == 6
        assert len(t.edges) == t.vertex_count - 1


def test_enumeration_cap():
    with pytest.raises(TooManyLeaves):
        enumerate_phylogenies(LeafSet.of("abcdefgh"))


def test_canonical_code_ignores_vertex_names(abcde, caterpillar):
    renamed = validate(
        [("p", "a"), ("p", "b"), ("p", 7), (7, "c"), (7, "zz"), ("zz", "d"), ("zz", "e")], abcde
    )
    assert canonical_code(renamed) == canonical_code(caterpillar)
    assert renamed == caterpillar


def test_star_code_differs_from_binary(star, trees5):
    for t in trees5:
        if t.is_binary:
            assert t.code != star.code


def test_codes_iff_quartet_systems(trees5):
    for s, t in itertools.combinations(trees5, 2):
        assert (s.code == t.code) == (quartet_system(s) == quartet_system(t))
    assert len({t.code for t in trees5}) == 26


def test_permutation_closure(abcde, trees5):
    codes = {t.code for t in trees5}
    for perm in [("b", "a", "c", "d", "e"), ("e", "d", "c", "b", "a"), ("c", "e", "a", "b", "d")]:
        mapping = dict(zip("abcde", perm))
        assert {t.relabel(mapping).code for t in trees5} == codes


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 6).flatmap(lambda n: st.tuples(st.just(n), st.permutations("abcdef"[:n]), st.integers(0, 235))))
def test_relabel_keeps_enumeration(args):
    n, perm, i = args
    leaves = LeafSet.of("abcdef"[:n])
    trees = enumerate_phylogenies(leaves)
    t = trees[i % len(trees)].relabel(dict(zip(leaves.names, perm)))
    assert t in trees


def test_newick_round_trip(trees6, trees5):
    for t in (*trees5, *trees6):
        assert parse_newick(write_newick(t), t.leaves) == t


def test_star_tree_helper(abcde, star):
    assert star_tree(abcde) == star
