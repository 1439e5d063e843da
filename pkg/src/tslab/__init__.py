"""Exact Tsirelson norms, distortion between norms, and finite double-limit checks."""

from tslab.distortion import DistortionResult, PhiValue, distortion, distortion_growth, phi, phi_from_distortion
from tslab.norms import (
    NormSpec,
    base_norm,
    brute_force_iterate,
    norm,
    parse_spec,
    pointwise_limit,
    tsirelson_iterate,
    tsirelson_limit,
)
from tslab.polyhedral import NormingSet, eval_polyhedral, maximize_linear, norming_set
from tslab.stability import (
    NormSequence,
    PhiMatrix,
    StabilityReport,
    double_limit_probe,
    gap_report,
    phi_matrix,
    witness_search,
)
from tslab.vectors import (
    AdmissibleFamily,
    SparseVector,
    enumerate_admissible_intervals,
    enumerate_admissible_subsets,
    restrict,
)

__version__ = "0.1.0"

__all__ = [
    "DistortionResult",
    "PhiValue",
    "distortion",
    "distortion_growth",
    "phi",
    "phi_from_distortion",
    "NormSpec",
    "base_norm",
    "brute_force_iterate",
    "norm",
    "parse_spec",
    "pointwise_limit",
    "tsirelson_iterate",
    "tsirelson_limit",
    "NormingSet",
    "eval_polyhedral",
    "maximize_linear",
    "norming_set",
    "NormSequence",
    "PhiMatrix",
    "StabilityReport",
    "double_limit_probe",
    "gap_report",
    "phi_matrix",
    "witness_search",
    "AdmissibleFamily",
    "SparseVector",
    "enumerate_admissible_intervals",
    "enumerate_admissible_subsets",
    "restrict",
]
