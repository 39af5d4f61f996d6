"""Simulator and algebra toolkit for 3D subsystem abelian quantum double codes."""

from .pauli import PauliOp, multiply, symplectic_product
from .groups import GroupBasis, count_logical_qudits, group_structure, is_member
from .lattice import Lattice, Manifold, build_lattice
from .code import SubsystemCode, build_code
from .channel import NoiseParams, TrialEngine, corrupt_measurements, sample_z_error, trial_rng
from .checks import CheckMatrix, SyndromeGraph, build_correction_checks, build_syndrome_graph, build_validation_checks
from .cluster import cluster_decode
from .matching import minimum_weight_perfect_matching, mwpm_decode
from .experiment import (
    DataPoint,
    NoCrossing,
    RunConfig,
    ThresholdEstimate,
    agresti_coull,
    crossing_threshold,
    estimate_pfail,
    forward_rescale,
    read_csv,
    rescale_threshold,
    run_sweep,
)

__all__ = [
    "PauliOp", "multiply", "symplectic_product",
    "GroupBasis", "count_logical_qudits", "group_structure", "is_member",
    "Lattice", "Manifold", "build_lattice",
    "SubsystemCode", "build_code",
    "NoiseParams", "TrialEngine", "corrupt_measurements", "sample_z_error", "trial_rng",
    "CheckMatrix", "SyndromeGraph", "build_correction_checks", "build_syndrome_graph", "build_validation_checks",
    "cluster_decode", "mwpm_decode", "minimum_weight_perfect_matching",
    "DataPoint", "NoCrossing", "RunConfig", "ThresholdEstimate",
    "agresti_coull", "crossing_threshold", "estimate_pfail",
    "forward_rescale", "read_csv", "rescale_threshold", "run_sweep",
]
__version__ = "0.1.0"
