"""Fully entangled fraction of d x d states via the Bloch representation."""

from .gellmann import GellMannBasis, IndexClass, Block, basis, index_class, generator_spectrum
from .bloch import (
    DensityMatrix,
    BlochDecomposition,
    validate_density,
    decompose,
    reconstruct,
    kyfan_norm,
)
from .bounds import (
    BoundBreakdown,
    BoundReport,
    Usefulness,
    fef_objective,
    fef_bloch_objective,
    singlet_fraction,
    upper_bound_thm1,
    upper_bound_cor1,
    upper_bound_prior,
    exact_fef_thm3,
    fef_two_qubit,
    delta_bound,
    optimal_fidelity,
    useful_for_teleportation,
    distillable_isotropic,
    full_report,
)
from .optimizer import OptimizerConfig, OptimizationResult, haar_unitary, maximize_fef, certify

__version__ = "0.1.0"
