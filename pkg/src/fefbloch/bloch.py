"""Density-matrix validation and the Bloch expansion of d x d states.

A state on ``C^d (x) C^d`` is written as::

    rho = (I(x)I + sum_i r_i lambda_i(x)I + sum_j s_j I(x)lambda_j
           + sum_ij t_ij lambda_i(x)lambda_j) / d^2

with ``r_i = d/2 Tr(rho lambda_i(x)I)``, ``s_j = d/2 Tr(rho I(x)lambda_j)`` and
``t_ij = d^2/4 Tr(rho lambda_i(x)lambda_j)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError, ValidationError
from .gellmann import basis

DEFAULT_TOL = 1e-10
IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int
    data: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    dim: int
    r: np.ndarray
    s: np.ndarray
    T: np.ndarray


def local_dim(n):
    """Local dimension ``d`` for a matrix side ``n = d^2``."""
    d = math.isqrt(n)
    if d * d != n or d < 2:
        raise ShapeError(f"matrix side {n} is not a square d^2 with d >= 2")
    return d


def validate_density(M, tol=DEFAULT_TOL):
    """Check that ``M`` is a d^2 x d^2 Hermitian, unit-trace, PSD matrix.

    Raises
    ------
    ShapeError
        If ``M`` is not square or its side is not a perfect square.
    ValidationError
        Naming the failed property (``hermiticity``, ``trace`` or
        ``positivity``) and the size of the violation.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    d = local_dim(M.shape[0])
    if not np.all(np.isfinite(M)):
        raise ValidationError("finiteness", float("inf"), "matrix has non-finite entries")
    herm = float(np.max(np.abs(M - M.conj().T)))
    if herm >= tol:
        raise ValidationError("hermiticity", herm, f"hermiticity violated: max|M - M^dag| = {herm:.3g}")
    tr = np.trace(M).real - 1.0
    if abs(tr) >= tol:
        raise ValidationError("trace", tr, f"trace deviates from 1 by {tr:.3g}")
    lo = float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])
    if lo < -tol:
        raise ValidationError("positivity", lo, f"smallest eigenvalue {lo:.3g} is negative")
    data = M.copy()
    data.setflags(write=False)
    return DensityMatrix(d, data, tol)


def _real(z, what):
    resid = float(np.max(np.abs(np.imag(z)))) if np.size(z) else 0.0
    if resid > IMAG_TOL:
        raise NumericError(f"{what} has imaginary residue {resid:.3g}; input is not Hermitian")
    return np.ascontiguousarray(np.real(z))


def decompose(rho):
    if isinstance(rho, DensityMatrix):
        d, M = rho.dim, rho.data
    else:
        M = np.asarray(rho, dtype=complex)
        d = local_dim(M.shape[0])
    lam = basis(d).generators
    R = M.reshape(d, d, d, d)
    rho_a = np.einsum("abcb->ac", R)
    rho_b = np.einsum("abad->bd", R)
    # Tr(A X) = sum_ac A_ac X_ca
    r = (d / 2) * np.einsum("ac,ica->i", rho_a, lam)
    s = (d / 2) * np.einsum("bd,idb->i", rho_b, lam)
    T = (d * d / 4) * np.einsum("abcd,ica,jdb->ij", R, lam, lam, optimize=True)
    return BlochDecomposition(d, _real(r, "r"), _real(s, "s"), _real(T, "T"))


def reconstruct(b):
    d = b.dim
    n = d * d - 1
    r, s, T = np.asarray(b.r, float), np.asarray(b.s, float), np.asarray(b.T, float)
    if r.shape != (n,) or s.shape != (n,) or T.shape != (n, n):
        raise ShapeError(
            f"for d={d} expected r, s of length {n} and T of shape ({n}, {n}); "
            f"got {r.shape}, {s.shape}, {T.shape}"
        )
    lam = basis(d).generators
    eye = np.eye(d)
    A = np.tensordot(r, lam, axes=1)
    B = np.tensordot(s, lam, axes=1)
    corr = np.einsum("ij,iac,jbe->abce", T, lam, lam).reshape(d * d, d * d)
    out = np.eye(d * d, dtype=complex) + np.kron(A, eye) + np.kron(eye, B) + corr
    return out / d**2


def kyfan_norm(T):
    """Sum of the singular values of ``T``."""
    T = np.asarray(T)
    if not np.all(np.isfinite(T)):
        raise NumericError("Ky-Fan norm of a matrix with non-finite entries")
    if T.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(T, compute_uv=False)))


def purity_from_bloch(b):
    d = b.dim
    return (1 + (2 / d) * (b.r @ b.r + b.s @ b.s) + (4 / d**2) * np.sum(b.T**2)) / d**2
