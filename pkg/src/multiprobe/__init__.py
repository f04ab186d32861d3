"""Multipartite Gaussian probing of binary channel patterns.

Builds covariance-matrix probe states over channel patterns, propagates
them through Gaussian phase-insensitive channels, and computes classical
and quantum error-probability bounds for pattern discrimination.
"""

from .bounds import (
    BoundReport,
    FidelityTable,
    bounds_brute_force,
    bounds_by_counting,
    bounds_from_table,
    bounds_mutual_probing,
    bounds_tmsv_pairs,
    bounds_tmsv_pairs_odd,
    classical_benchmark,
    counting_census,
    guaranteed_advantage,
    tmsv_subfidelity,
)
from .channels import (
    ChannelFamily,
    GpiParams,
    IdlerLayout,
    apply_pattern,
    apply_pattern_with_idlers,
    pattern_scaling,
)
from .closedform import subfidelity_oracle
from .gaussian import (
    CovMatrix,
    coherent_cm,
    gaussian_fidelity,
    ghz_cm,
    symplectic_spectrum,
    tensor,
    tmsv_cm,
    vacuum_cm,
)
from .imagespace import (
    ExtendedImageSpace,
    ImageSpace,
    bcpf_space,
    cpf_space,
    full_space,
    hamming,
    pair_degeneracy_census,
)
from .probes import (
    DisjointPartition,
    IdlerPartition,
    NonDisjointPartition,
    ProbeSpec,
    assemble_probe,
    average_channel_use,
    decompose_rounds,
    extend_for_mutual_probing,
    format_partition,
    nn_partition,
    odd_m_disjoint_spec,
    parse_partition,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ChannelFamily",
    "CovMatrix",
    "DisjointPartition",
    "ExtendedImageSpace",
    "FidelityTable",
    "GpiParams",
    "IdlerLayout",
    "IdlerPartition",
    "ImageSpace",
    "NonDisjointPartition",
    "ProbeSpec",
    "apply_pattern",
    "apply_pattern_with_idlers",
    "assemble_probe",
    "average_channel_use",
    "bcpf_space",
    "bounds_brute_force",
    "bounds_by_counting",
    "bounds_from_table",
    "bounds_mutual_probing",
    "bounds_tmsv_pairs",
    "bounds_tmsv_pairs_odd",
    "classical_benchmark",
    "coherent_cm",
    "counting_census",
    "cpf_space",
    "decompose_rounds",
    "extend_for_mutual_probing",
    "format_partition",
    "full_space",
    "gaussian_fidelity",
    "ghz_cm",
    "guaranteed_advantage",
    "hamming",
    "nn_partition",
    "odd_m_disjoint_spec",
    "pair_degeneracy_census",
    "parse_partition",
    "pattern_scaling",
    "subfidelity_oracle",
    "symplectic_spectrum",
    "tensor",
    "tmsv_cm",
    "tmsv_subfidelity",
    "vacuum_cm",
]
