"""Design families: random, OA-based, block Kronecker, annealed and two-level."""

from .anneal import AnnealConfig, anneal_nolhd
from .kronecker import (KroneckerInputs, KroneckerReport, Prop1Report, check_prop1_conditions,
                        joint_row_permute, kronecker_base, kronecker_construct)
from .lemma1 import Lemma1Inputs, lemma1_construct
from .random import iid_uniform_sample, is_stratified, random_latin_hypercube, stratum_indices
from .ssd import e_s2, es2_descent, es2_supersaturated, nearly_orthogonal_signs

__all__ = [
    "AnnealConfig", "anneal_nolhd",
    "KroneckerInputs", "KroneckerReport", "Prop1Report", "check_prop1_conditions",
    "joint_row_permute", "kronecker_base", "kronecker_construct",
    "Lemma1Inputs", "lemma1_construct",
    "iid_uniform_sample", "is_stratified", "random_latin_hypercube", "stratum_indices",
    "e_s2", "es2_descent", "es2_supersaturated", "nearly_orthogonal_signs",
]
