"""Kimura 3-parameter model invariants on trivalent phylogenetic trees."""

from ._core import (
    Alignment,
    Binomial,
    InvariantSet,
    TopologyScore,
    Tree,
    __version__,
    deserialize,
    enumerate_topologies,
    jacobian_rank,
    joint_probability,
    lci,
    lci_size,
    p_to_q,
    parse_newick,
    phi,
    q_to_p,
    rank_topologies,
    read_fasta,
    score_topology,
    quadric_minors,
    simulate,
    three_leaf_generators,
    vanishes_on_model,
)

__all__ = [
    "Alignment",
    "Binomial",
    "InvariantSet",
    "TopologyScore",
    "Tree",
    "__version__",
    "deserialize",
    "enumerate_topologies",
    "jacobian_rank",
    "joint_probability",
    "lci",
    "lci_size",
    "p_to_q",
    "parse_newick",
    "phi",
    "q_to_p",
    "rank_topologies",
    "read_fasta",
    "score_topology",
    "quadric_minors",
    "simulate",
    "three_leaf_generators",
    "vanishes_on_model",
]
