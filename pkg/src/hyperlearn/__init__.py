"""Reconstruction of orderly hypertrees with distance oracles."""

from .errors import (
    BudgetExceededError,
    ContractError,
    HyperlearnError,
    InconsistentOracleError,
    InstanceTooLargeError,
    PreconditionError,
    ValidationError,
)
from .hypergraph import UNREACHABLE, Hypergraph
from .offline import learn_dist1, learn_dist2, learn_offline
from .online import learn_online
from .oracle import (
    Beyond,
    adversary_oracle_hkn,
    bounded_adversary_oracle,
    consistent_witness,
    exact_oracle,
)
from .predicates import claim7_check, structural_predicates
from .skeleton import SkeletonTree, build_skeleton, hypergraph_from_skeleton, induced_sub_skeleton

__version__ = "0.1.0"
