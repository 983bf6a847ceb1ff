"""Closed-form FEF quantities evaluated from a Bloch decomposition.

Everything here works on :class:`~fefbloch.bloch.BlochDecomposition` so the
decomposition is paid for once per state. The correlation-matrix entries
``t_ij`` are combined with the overlaps ``Delta(U, i, j) = Tr(U^dag l_i U l_j)``
whose sign pattern is +1 for ``j`` in Omega1/Omega2 and -1 for ``j`` in Omega3.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .bloch import DensityMatrix, decompose, kyfan_norm
from .errors import DimensionError, DomainError, PreconditionError
from .gellmann import basis, index_class, Block

UNITARY_TOL = 1e-8
THM3_TOL = 1e-10


class Usefulness(str, Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class BoundBreakdown:
    t1: float
    t2: float
    t3: float
    t4: float

    @property
    def total(self):
        return self.t1 + self.t2 + self.t3 + self.t4


@dataclass(frozen=True)
class BoundReport:
    dim: int
    singlet_fraction: float
    thm1_bound: float
    thm1_breakdown: BoundBreakdown
    cor1_bound: float
    prior_bound: float
    exact_thm3: Optional[float]
    two_qubit_exact: Optional[float]
    numeric_fef: Optional[float]
    optimal_fidelity: float
    # "exact", "numeric" or "bound": where the F fed into f_max came from
    fidelity_source: str
    useful_for_teleportation: Usefulness
    optimizer: Optional[dict] = field(default=None, compare=False)

    @property
    def tightest_upper(self):
        return min(self.thm1_bound, self.cor1_bound, self.prior_bound)

    def to_dict(self):
        out = {
            "dim": self.dim,
            "singlet_fraction": self.singlet_fraction,
            "thm1_bound": self.thm1_bound,
            "thm1_breakdown": {
                "t1": self.thm1_breakdown.t1,
                "t2": self.thm1_breakdown.t2,
                "t3": self.thm1_breakdown.t3,
                "t4": self.thm1_breakdown.t4,
            },
            "cor1_bound": self.cor1_bound,
            "prior_bound": self.prior_bound,
            "exact_thm3": self.exact_thm3,
            "two_qubit_exact": self.two_qubit_exact,
            "numeric_fef": self.numeric_fef,
            "optimal_fidelity": self.optimal_fidelity,
            "fidelity_source": self.fidelity_source,
            "useful_for_teleportation": self.useful_for_teleportation.value,
        }
        if self.optimizer is not None:
            out["optimizer"] = self.optimizer
        return out


def _as_bloch(b):
    return decompose(b) if isinstance(b, DensityMatrix) else b


def _check_unitary(U, d):
    U = np.asarray(U, dtype=complex)
    if U.shape != (d, d):
        raise PreconditionError(f"expected a {d}x{d} unitary, got shape {U.shape}")
    dev = float(np.linalg.norm(U.conj().T @ U - np.eye(d)))
    if dev > UNITARY_TOL:
        raise PreconditionError(f"U is not unitary: ||U^dag U - I|| = {dev:.3g}")
    return U


def max_entangled_vector(d):
    return np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)


def fef_objective(rho, U):
    """``<phi+| (U^dag (x) I) rho (U (x) I) |phi+>`` for a single unitary."""
    d = rho.dim
    U = _check_unitary(U, d)
    # (U (x) I)|phi+> has amplitude U[a, s] / sqrt(d) on |a s>
    psi = U.reshape(d * d) / np.sqrt(d)
    val = np.vdot(psi, rho.data @ psi)
    return float(val.real)


def delta_matrix(U, d):
    """All overlaps ``Tr(U^dag lambda_i U lambda_j)`` as a (d^2-1)^2 real array."""
    lam = basis(d).generators
    rot = np.einsum("ba,ibc,cd->iad", U.conj(), lam, U)
    # Tr(A_i B_j) = sum_ad A_i[a, d] B_j[d, a]
    return np.einsum("iad,jda->ij", rot, lam).real


def fef_bloch_objective(b, U):
    d = b.dim
    U = _check_unitary(U, d)
    D = delta_matrix(U, d)
    signs = _column_signs(d)
    return float(1 / d**2 + np.sum(b.T * D * signs[None, :]) / d**3)


def _column_signs(d):
    return basis(d).signs


def signed_trace(b):
    """``sum_{Omega1 u Omega2} t_ii - sum_{Omega3} t_ii``."""
    return float(np.diag(b.T) @ _column_signs(b.dim))


def singlet_fraction(b):
    b = _as_bloch(b)
    d = b.dim
    return 1 / d**2 + 2 * signed_trace(b) / d**3


def thm1_weights(d):
    """Weight matrix ``w_ij`` with ``sum_b T_b = sum_ij w_ij |t_ij|``.

    Blocks: Omega1 x Omega1 carries ``2(ij + min(i,j)) / sqrt(ij(i+1)(j+1))``,
    Omega1 x rest carries ``sqrt(2(i+1)/i)`` keyed on the Omega1 index, and the
    off-diagonal-generator block carries 2.
    """
    n = d * d - 1
    w = np.full((n, n), 2.0)
    idx = np.arange(1, d)
    i, j = np.meshgrid(idx, idx, indexing="ij")
    w[: d - 1, : d - 1] = 2 * (i * j + np.minimum(i, j)) / np.sqrt(i * j * (i + 1) * (j + 1))
    mixed = np.sqrt(2 * (idx + 1) / idx)
    w[: d - 1, d - 1 :] = mixed[:, None]
    w[d - 1 :, : d - 1] = mixed[None, :]
    return w


def upper_bound_thm1(b):
    b = _as_bloch(b)
    d = b.dim
    A = np.abs(b.T)
    w = thm1_weights(d)
    k = d - 1
    terms = w * A
    parts = BoundBreakdown(
        t1=float(terms[:k, :k].sum()),
        t2=float(terms[:k, k:].sum()),
        t3=float(terms[k:, :k].sum()),
        t4=float(terms[k:, k:].sum()),
    )
    return 1 / d**2 + parts.total / d**3, parts


def upper_bound_cor1(b):
    b = _as_bloch(b)
    d = b.dim
    return 1 / d**2 + 2 * float(np.abs(b.T).sum()) / d**3


def upper_bound_prior(b, d=None):
    """Earlier bound ``1/d^2 + 4 ||M(rho)^T M(phi+)||_KF`` with ``M = T / d^2``."""
    b = _as_bloch(b)
    d = b.dim if d is None else d
    if d != b.dim:
        raise DimensionError(f"dimension {d} does not match decomposition dimension {b.dim}")
    M = b.T / d**2
    M_phi = _phi_plus_bloch(d).T / d**2
    return 1 / d**2 + 4 * kyfan_norm(M.T @ M_phi)


def _phi_plus_bloch(d):
    psi = max_entangled_vector(d)
    return decompose(np.outer(psi, psi.conj()))


def exact_fef_thm3(b, tol=THM3_TOL):
    """Exact FEF when T is diagonal with the right sign pattern, else ``None``.

    The conditions are ``t_ii >= 0`` on Omega1/Omega2, ``t_ii <= 0`` on
    Omega3 and ``t_ij = 0`` off the diagonal, each checked to ``tol``.
    """
    b = _as_bloch(b)
    d = b.dim
    T = b.T
    diag = np.diag(T)
    signs = basis(d).signs
    if np.any(diag * signs < -tol):
        return None
    off = T - np.diag(diag)
    if off.size and np.max(np.abs(off)) > tol:
        return None
    return (d + 2 * kyfan_norm(T)) / d**3


def fef_two_qubit(b):
    b = _as_bloch(b)
    if b.dim != 2:
        raise DimensionError(f"two-qubit formula needs d = 2, got d = {b.dim}")
    return (1 + kyfan_norm(b.T)) / 4


def two_qubit_attained(b):
    """Whether ``(1 + ||T||_KF)/4`` is attained by some local unitary.

    For d = 2 the overlaps ``Tr(U^dag l_i U l_j)/2`` sweep exactly SO(3), and the
    Omega3 sign flip has determinant -1, so the closed form is reached only
    when ``det T <= 0`` (or T is singular). Otherwise it is a strict upper bound.
    """
    b = _as_bloch(b)
    if b.dim != 2:
        raise DimensionError(f"two-qubit check needs d = 2, got d = {b.dim}")
    sv = np.linalg.svd(b.T, compute_uv=False)
    return bool(np.linalg.det(b.T) <= 0 or sv[-1] <= 1e-12)


def delta_bound(d, i, j):
    """Signed envelope ``(lo, hi)`` for ``Tr(U^dag lambda_i U lambda_j)``."""
    ci, cj = index_class(d, i), index_class(d, j)
    diag_i = ci.block is Block.OMEGA1
    diag_j = cj.block is Block.OMEGA1
    if diag_i and diag_j:
        norm = np.sqrt(i * j * (i + 1) * (j + 1))
        hi = 2 * (i * j + min(i, j)) / norm
        lo = -2 * (i + j) / norm if i + j < d + 1 else -2 * d / norm
    elif diag_i or diag_j:
        m = i if diag_i else j
        hi = np.sqrt(2 * (m + 1) / m)
        lo = -hi
    else:
        lo, hi = -2.0, 2.0
    return max(float(lo), -2.0), min(float(hi), 2.0)


def delta_bound_table(d):
    n = d * d - 1
    lo = np.empty((n, n))
    hi = np.empty((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            lo[i - 1, j - 1], hi[i - 1, j - 1] = delta_bound(d, i, j)
    return lo, hi


def optimal_fidelity(F, d):
    if not -1e-9 <= F <= 1 + 1e-9:
        raise DomainError(f"FEF must lie in [0, 1], got {F!r}")
    return (d * F + 1) / (d + 1)


def useful_for_teleportation(b):
    """Tri-state verdict on ``F > 1/d``.

    ``YES`` from the signed-trace sufficient condition, ``NO`` when an upper
    bound already sits at or below ``1/d``, ``UNDETERMINED`` in between.
    """
    b = _as_bloch(b)
    d = b.dim
    if signed_trace(b) > d * (d - 1) / 2:
        return Usefulness.YES
    if min(upper_bound_thm1(b)[0], upper_bound_cor1(b)) <= 1 / d:
        return Usefulness.NO
    return Usefulness.UNDETERMINED


def distillable_isotropic(theta, d):
    if not -1 / (d * d - 1) <= theta <= 1:
        raise DomainError(f"theta must lie in [-1/(d^2-1), 1] = [{-1 / (d * d - 1):.6g}, 1], got {theta!r}")
    return theta > 1 / (d + 1)


def full_report(rho, with_optimizer=False, config=None):
    """Collect every applicable closed-form quantity for ``rho``.

    With ``with_optimizer`` the numeric maximizer also runs (see
    :func:`fefbloch.optimizer.maximize_fef`) and its value is recorded as
    ``numeric_fef``; the numeric value also upgrades an undetermined
    usefulness verdict when it clears ``1/d``.
    """
    b = decompose(rho)
    d = b.dim
    f = singlet_fraction(b)
    thm1, parts = upper_bound_thm1(b)
    cor1 = upper_bound_cor1(b)
    prior = upper_bound_prior(b)
    thm3 = exact_fef_thm3(b)
    two_q = fef_two_qubit(b) if d == 2 else None
    useful = useful_for_teleportation(b)

    numeric = None
    opt_meta = None
    if with_optimizer:
        from .optimizer import maximize_fef, OptimizerConfig

        res = maximize_fef(rho, config or OptimizerConfig())
        numeric = res.best_value
        opt_meta = res.summary()
        if useful is Usefulness.UNDETERMINED and numeric > 1 / d + 1e-9:
            useful = Usefulness.YES

    if thm3 is not None:
        F, source = thm3, "exact"
    elif two_q is not None and two_qubit_attained(b):
        F, source = two_q, "exact"
    elif numeric is not None:
        F, source = numeric, "numeric"
    else:
        F, source = min(thm1, cor1, prior), "bound"
    F = min(max(F, 0.0), 1.0)

    return BoundReport(
        dim=d,
        singlet_fraction=f,
        thm1_bound=thm1,
        thm1_breakdown=parts,
        cor1_bound=cor1,
        prior_bound=prior,
        exact_thm3=thm3,
        two_qubit_exact=two_q,
        numeric_fef=numeric,
        optimal_fidelity=optimal_fidelity(F, d),
        fidelity_source=source,
        useful_for_teleportation=useful,
        optimizer=opt_meta,
    )

