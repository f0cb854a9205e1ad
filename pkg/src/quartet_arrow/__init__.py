"""Quartet combinatorics on small phylogenies and an exhaustive audit of the
invariance lemmas behind the Arrow-type theorem for quartet consensus."""

from .consensus import (
    ConsensusRule,
    Profile,
    ProfileSpace,
    check_Dct,
    check_Ind,
    check_PO,
    constant_rule,
    dictator_rule,
    majority_quartet_rule,
    replay_witness,
)
from .decisive import check_decisiveness, decisive_family, verify_chain
from .lemmas import reproduce_flaw, verify_lemma1_construction, verify_recipe
from .newick import parse_newick, write_newick
from .quartets import (
    Quartet,
    QuartetConstraintSet,
    QuartetSystem,
    QuartetTopology,
    dyadic_step,
    parse_quartet,
    quartet_system,
    restrict_profile,
    restrict_tree,
    topology_of,
)
from .realize import build_profile_prime, implied_restriction, load_builtin_recipe, parse_recipe, trees_realizing
from .trees import MAX_LEAVES, LeafSet, Phylogeny, canonical_code, enumerate_phylogenies, validate

__version__ = "0.1.0"
