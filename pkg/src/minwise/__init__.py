"""SAT search for minwise and rankwise independent permutation families."""

from .bounds import bargachev_bound, lcm_upto, lower_bound, subfactorial, upper_bound
from .encoder import ModelConfig, build
from .family import (
    double,
    jaccard,
    min_collision_prob,
    minhash_pairs,
    read_family,
    restrict,
    verify_minwise,
    verify_rankwise,
    write_family,
)
from .groups import Subgroup, class_representatives, closure, conjugacy_classes, subgroups_of_order
from .perm import compose, identity, inverse, reversal
from .solver import decode, solve, solve_internal

__all__ = [
    "ModelConfig",
    "Subgroup",
    "bargachev_bound",
    "build",
    "class_representatives",
    "closure",
    "compose",
    "conjugacy_classes",
    "decode",
    "double",
    "identity",
    "inverse",
    "jaccard",
    "lcm_upto",
    "lower_bound",
    "min_collision_prob",
    "minhash_pairs",
    "read_family",
    "restrict",
    "reversal",
    "solve",
    "solve_internal",
    "subfactorial",
    "subgroups_of_order",
    "upper_bound",
    "verify_minwise",
    "verify_rankwise",
    "write_family",
]
