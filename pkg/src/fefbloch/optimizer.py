"""Multi-start numerical maximization of the FEF objective over U(d).

The objective at a unitary ``U`` is the quadratic form
``u^dag rho u / d`` with ``u`` the row-major flattening of ``U``. Each local
search moves by ``U <- U exp(i H(v))`` where ``H(v)`` is the Hermitian matrix
built from ``d^2`` real parameters (diagonal, then real and imaginary parts of
the strict upper triangle). The step direction is the gradient in ``v`` at
``v = 0`` and the step length adapts per restart: grow on success, halve on
failure.

All restarts advance together as one batch, but every array operation acts
slice-wise, so the trajectory of restart ``k`` depends only on its own start
point. Start point 0 is the identity; start point ``k >= 1`` is a Haar sample
drawn from ``default_rng([seed, k])``.
"""

from dataclasses import dataclass

import numpy as np

from .bloch import DensityMatrix
from .bounds import fef_objective, full_report
from .errors import CertificationError, DimensionError, PreconditionError

DEFAULT_SEED = 20240917
REORTHO_EVERY = 50
MAX_STEP = 4.0


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 2000
    step_tol: float = 1e-10
    objective_tol: float = 1e-9
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise PreconditionError("restarts and max_iterations must be >= 1")
        if self.step_tol <= 0 or self.objective_tol <= 0:
            raise PreconditionError("tolerances must be positive")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_value: float
    best_unitary: np.ndarray
    restarts_agreeing: int
    iterations_total: int
    converged: bool
    final_values: np.ndarray

    def summary(self):
        return {
            "best_value": self.best_value,
            "restarts": int(len(self.final_values)),
            "restarts_agreeing": self.restarts_agreeing,
            "iterations_total": self.iterations_total,
            "converged": self.converged,
        }


def haar_unitary(d, rng):
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix."""
    if d < 2:
        raise DimensionError(f"d must be >= 2, got {d}")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_unitaries(d, n, rng):
    """``n`` independent Haar samples stacked as ``(n, d, d)``."""
    z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


def start_points(d, restarts, seed):
    starts = np.empty((restarts, d, d), dtype=complex)
    starts[0] = np.eye(d)
    for k in range(1, restarts):
        starts[k] = haar_unitary(d, np.random.default_rng([seed, k]))
    return starts


def hermitian_from_params(v, d):
    """Hermitian ``H(v)``; ``v`` may carry leading batch axes."""
    v = np.asarray(v, dtype=float)
    iu = np.triu_indices(d, 1)
    m = len(iu[0])
    H = np.zeros(v.shape[:-1] + (d, d), dtype=complex)
    idx = np.arange(d)
    H[..., idx, idx] = v[..., :d]
    upper = v[..., d : d + m] + 1j * v[..., d + m :]
    H[..., iu[0], iu[1]] = upper
    H[..., iu[1], iu[0]] = upper.conj()
    return H


def params_from_hermitian(H):
    d = H.shape[-1]
    iu = np.triu_indices(d, 1)
    idx = np.arange(d)
    upper = H[..., iu[0], iu[1]]
    return np.concatenate([H[..., idx, idx].real, upper.real, upper.imag], axis=-1)


def _values(rho, U):
    n, d, _ = U.shape
    u = U.reshape(n, d * d)
    # einsum keeps each row's arithmetic independent of the batch size
    ru = np.einsum("ij,nj->ni", rho, u)
    return np.einsum("ni,ni->n", u.conj(), ru).real / d, ru


def param_gradient(rho, U):
    """Gradient of ``v -> f(U exp(i H(v)))`` at ``v = 0``, batched over ``U``."""
    n, d, _ = U.shape
    _, ru = _values(rho, U)
    G = ru.reshape(n, d, d)
    M = np.conj(np.swapaxes(U, 1, 2)) @ G
    # first-order change: Re Tr(H K) with K = -2i M / d
    K = (-2j / d) * M
    Kh = (K + np.conj(np.swapaxes(K, 1, 2))) / 2
    iu = np.triu_indices(d, 1)
    idx = np.arange(d)
    upper = Kh[:, iu[0], iu[1]]
    return np.concatenate([Kh[:, idx, idx].real, 2 * upper.real, 2 * upper.imag], axis=1)


def _expi(H, scale):
    w, V = np.linalg.eigh(H)
    ph = np.exp(1j * w * scale[:, None])
    return (V * ph[:, None, :]) @ np.conj(np.swapaxes(V, 1, 2))


def _reorthonormalize(U):
    W, _, Vh = np.linalg.svd(U)
    return W @ Vh


def _ascend(rho, U, cfg):
    n, d, _ = U.shape
    f, _ = _values(rho, U)
    eta = np.full(n, 0.5)
    active = np.ones(n, dtype=bool)
    iters = np.zeros(n, dtype=int)
    for it in range(1, cfg.max_iterations + 1):
        if not active.any():
            break
        a = np.flatnonzero(active)
        Ua = U[a]
        g = param_gradient(rho, Ua)
        gnorm = np.linalg.norm(g, axis=1)
        done = eta[a] * gnorm < cfg.step_tol
        H = hermitian_from_params(g, d)
        Unew = Ua @ _expi(H, eta[a])
        fnew, _ = _values(rho, Unew)
        ok = (fnew > f[a]) & ~done
        U[a[ok]] = Unew[ok]
        f[a[ok]] = fnew[ok]
        eta[a[ok]] = np.minimum(eta[a[ok]] * 2.0, MAX_STEP)
        eta[a[~ok]] *= 0.5
        iters[a] += 1
        active[a[done]] = False
        if it % REORTHO_EVERY == 0:
            U[a] = _reorthonormalize(U[a])
            f[a], _ = _values(rho, U[a])
    return U, f, iters, ~active


def maximize_fef(rho, cfg=None):
    """Lower estimate of the FEF from ``cfg.restarts`` local ascents.

    Returns an :class:`OptimizationResult`; ``converged`` is true when at
    least one restart met the step tolerance before the iteration cap. The
    stored unitary always reproduces ``best_value`` through
    :func:`fefbloch.bounds.fef_objective`.
    """
    cfg = cfg or OptimizerConfig()
    if not isinstance(rho, DensityMatrix):
        raise PreconditionError("maximize_fef expects a validated DensityMatrix")
    d = rho.dim
    U = start_points(d, cfg.restarts, cfg.seed)
    U, f, iters, conv = _ascend(rho.data, U, cfg)
    U = _reorthonormalize(U)
    vals = np.array([fef_objective(rho, u) for u in U])
    k = int(np.argmax(vals))
    best = float(vals[k])
    return OptimizationResult(
        best_value=best,
        best_unitary=U[k],
        restarts_agreeing=int(np.sum(vals >= best - cfg.objective_tol)),
        iterations_total=int(iters.sum()),
        converged=bool(conv.any()),
        final_values=vals,
    )


CERT_SLACK = 1e-9


def certify(rho, cfg=None):
    """Full report with a numeric FEF that must sit inside the analytic sandwich."""
    report = full_report(rho, with_optimizer=True, config=cfg)
    upper = {
        "thm1": report.thm1_bound,
        "cor1": report.cor1_bound,
        "prior": report.prior_bound,
    }
    num = report.numeric_fef
    if num < report.singlet_fraction - CERT_SLACK or num > min(upper.values()) + CERT_SLACK:
        raise CertificationError(report.singlet_fraction, num, upper)
    return report
