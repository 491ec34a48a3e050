"""Kernel transforms on sampled signals and their uncertainty relations."""
from .bounds import (
    DeltaBlocks,
    UrReport,
    f_matrix,
    frft_bound,
    gtf_bound,
    lct_bound,
    pn_bound,
    squeeze_bound,
    ur_generic,
    ur_gtf,
    ur_quadratic,
    w_matrix,
)
from .errors import KernelURError
from .grid import Bump, Gaussian, Grid, Hermite, SampledSignal, Table, inner_product, make_grid, sample
from .kernels import (
    QuadPhaseKernel,
    apply_transform,
    check_additivity,
    check_parseval,
    covering_grid,
    eval_kernel,
    gtf_standard,
    make_frft,
    make_gtf,
    make_lct,
    make_squeeze,
)
from .moments import (
    HigherMoments,
    MomentSet,
    PolyObservable,
    commutator_expectation,
    covariance,
    expectation,
    higher_moments,
    moment_set,
    transformed_domain_moments,
    transformed_observable,
    variance,
)
from .number import NumberDecomposition, decompose, number_moments, reconstruct

__version__ = "0.1.0"

__all__ = [
    "Bump", "DeltaBlocks", "Gaussian", "Grid", "Hermite", "HigherMoments", "KernelURError",
    "MomentSet", "NumberDecomposition", "PolyObservable", "QuadPhaseKernel", "SampledSignal",
    "Table", "UrReport", "apply_transform", "check_additivity", "check_parseval",
    "commutator_expectation", "covariance", "covering_grid", "decompose", "eval_kernel",
    "expectation", "f_matrix", "frft_bound", "gtf_bound", "gtf_standard", "higher_moments",
    "inner_product", "lct_bound", "make_frft", "make_grid", "make_gtf", "make_lct",
    "make_squeeze", "moment_set", "number_moments", "pn_bound", "reconstruct", "sample",
    "squeeze_bound", "transformed_domain_moments", "transformed_observable", "ur_generic",
    "ur_gtf", "ur_quadratic", "variance", "w_matrix",
]
