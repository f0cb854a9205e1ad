import pytest

from quartet_arrow.lemmas import (
    INVALID,
    VALID,
    alternative_text,
    check_inference,
    reproduce_flaw,
    verify_lemma1_construction,
    verify_recipe,
)
from quartet_arrow.quartets import parse_quartet
from quartet_arrow.realize import parse_recipe


@pytest.mark.parametrize("name, branches", [("B", 3), ("C", 4), ("D", 5)])
def test_corrected_recipes_valid(name, branches):
    r = verify_recipe(name)
    assert r.verdict == VALID, r.notes
    assert len(r.branches) == branches
    assert all(b.realizable and b.forces_restriction for b in r.branches)
    assert not r.uncovered
    assert all(i.sound for i in r.inferences)
    assert r.profiles.ok and r.profiles.admissible > 0


def test_lemma4_coverage():
    r = verify_recipe("B")
    assert set(r.admitted) == {"wx|yz", "wxyz"}


def test_lemma6_covers_everything():
    r = verify_recipe("D")
    assert set(r.admitted) == {"wx|yz", "wxyz", "wy|xz", "wz|xy"}


def test_flawed_recipe_invalid():
    r = verify_recipe("flawed-original")
    assert r.verdict == INVALID
    assert r.uncovered == ["wy|xz", "wz|xy"]
    assert r.profiles.failures == {"UnrealizableBranch": r.profiles.admissible - r.profiles.built}


def test_one_step_construction():
    r = verify_lemma1_construction()
    assert r.verdict == VALID, r.notes
    assert [b.realizable for b in r.branches] == [True, True]
    assert r.inferences[0].sound
    assert r.extra["one_step_targets"] == ["ab|cv", "ab|dv", "av|cd", "bv|cd"]
    assert len(r.extra["reachable"]) == 15
    assert r.extra["variants_failed"] == 0


def test_flaw_certificate():
    c = reproduce_flaw()
    assert c.reproduced
    assert set(c.empty_sets.values()) == {0}


def test_alternative_text():
    assert alternative_text("ab|cd") == "ac|bd"
    assert alternative_text("wx|vy") == "wv|xy"


def test_unsound_inference_detected(vwxyz):
    q = lambda t: parse_quartet(t, vwxyz)  # noqa: E731
    check = check_inference([q("wx|yz")], q("vw|xy"), vwxyz)
    assert not check.sound and check.counterexample is not None


def test_broken_recipe_is_reported():
    # the D recipe with its wz|xy case removed
    text = """
[hypothesis]
D
[group]
wx|yz wx|vy wyvz xyvz
[case wy|xz]
wyvx wyvz wv|xz vy|xz
[case wx|yz]
wxvy wxvz wv|yz xv|yz
[case wxyz]
wxvy wxvz wxyz wvyz xvyz
[steps]
C wx|vy
C wx|vz
"""
    r = verify_recipe(parse_recipe(text, "broken"))
    assert r.verdict == INVALID
    assert r.uncovered == ["wz|xy"]
    assert r.profiles.failures.get("TriggerMismatch")


def test_wrong_step_level_is_reported():
    # the B recipe cannot support C-level steps on an unrelated quartet
    text = """
[hypothesis]
B
[group]
wx|yz wx|vy vwyz vxyz
[case wxyz]
vwxy vwxz wxyz
[case wx|yz]
vwxy vwxz wx|yz
[steps]
A vw|yz
"""
    r = verify_recipe(parse_recipe(text, "bad-step"))
    assert r.verdict == INVALID
