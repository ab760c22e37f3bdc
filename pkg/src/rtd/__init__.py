"""Convex tensor decomposition via reshuffling operators.

Public surface: reshuffle construction and algebra, the nuclear-norm
solver, recovery diagnostics, synthetic experiment drivers, and the
image-steganography pipeline built on top.
"""

__version__ = "0.1.0"

from .analysis import (
    IncoherenceEstimate,
    TangentBasisInfo,
    certificate_csv,
    certificate_threshold,
    cross_spectrum_report,
    estimate_component_count,
    exact_recovery_certificate,
    incoherence_lower_bound,
    recovery_bound_min_n,
    sir,
    tangent_basis,
    tangent_project,
    tsir,
)
from .errors import (
    AllZeroSignal,
    BadIndex,
    BadRank,
    DegenerateRank,
    DimMismatch,
    DivergenceDetected,
    KeyMismatch,
    MalformedHeader,
    NonFinite,
    RtdError,
    ShapeMismatch,
    StrengthOutOfRange,
    UnsupportedMaxval,
)
from .experiments import (
    DropoutSpec,
    NoiseSweepSpec,
    PhaseGrid,
    PhaseGridSpec,
    add_gaussian_noise,
    dropout_csv,
    make_instance,
    noise_csv,
    noise_sigma,
    phase_csv,
    render_heatmap,
    run_dropout_experiment,
    run_noise_sweep,
    run_phase_grid,
)
from .formats import OpSpec, read_ops, read_tensor, write_ops, write_tensor
from .kernels import BACKEND as KERNEL_BACKEND
from .linalg import (
    SvdFactors,
    nuclear_norm,
    random_semi_orthonormal_pair,
    spectral_norm,
    svd_full,
    svt,
)
from .netpbm import GrayImage, RgbImage, read_image, write_image
from .reshuffle import (
    ReshuffleOp,
    cross_map,
    dump_perm,
    reshuffle_from_seed,
    reshuffle_identity,
)
from .solver import (
    Problem,
    SolverConfig,
    SolverResult,
    decompose,
    history_csv,
    objective,
    primal_residual,
)
from .stego import Container, StegoKey, conceal, read_key, reveal, write_key

__all__ = [
    "AllZeroSignal",
    "BadIndex",
    "BadRank",
    "Container",
    "DegenerateRank",
    "DimMismatch",
    "DivergenceDetected",
    "DropoutSpec",
    "GrayImage",
    "IncoherenceEstimate",
    "KERNEL_BACKEND",
    "KeyMismatch",
    "MalformedHeader",
    "NoiseSweepSpec",
    "NonFinite",
    "OpSpec",
    "PhaseGrid",
    "PhaseGridSpec",
    "Problem",
    "ReshuffleOp",
    "RgbImage",
    "RtdError",
    "ShapeMismatch",
    "SolverConfig",
    "SolverResult",
    "StegoKey",
    "StrengthOutOfRange",
    "SvdFactors",
    "TangentBasisInfo",
    "UnsupportedMaxval",
    "add_gaussian_noise",
    "certificate_csv",
    "certificate_threshold",
    "conceal",
    "cross_map",
    "cross_spectrum_report",
    "decompose",
    "dropout_csv",
    "dump_perm",
    "estimate_component_count",
    "exact_recovery_certificate",
    "history_csv",
    "incoherence_lower_bound",
    "make_instance",
    "noise_csv",
    "noise_sigma",
    "nuclear_norm",
    "objective",
    "phase_csv",
    "primal_residual",
    "random_semi_orthonormal_pair",
    "read_image",
    "read_key",
    "read_ops",
    "read_tensor",
    "recovery_bound_min_n",
    "render_heatmap",
    "reshuffle_from_seed",
    "reshuffle_identity",
    "reveal",
    "run_dropout_experiment",
    "run_noise_sweep",
    "run_phase_grid",
    "sir",
    "spectral_norm",
    "svd_full",
    "svt",
    "tangent_basis",
    "tangent_project",
    "tsir",
    "write_image",
    "write_key",
    "write_ops",
    "write_tensor",
]
