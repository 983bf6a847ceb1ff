"""Named state families, each returned as a validated :class:`DensityMatrix`."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bloch import BlochDecomposition, reconstruct, validate_density
from .bounds import max_entangled_vector
from .errors import ConstructionError, DimensionError, DomainError


class Family(str, Enum):
    MAX_ENTANGLED = "max_entangled"
    ISOTROPIC = "isotropic"
    EXAMPLE1 = "example1"
    EXAMPLE2 = "example2"
    PHI_X = "phix"
    PHI_MIXTURE = "phi_mixture"
    RHO3 = "rho3"
    RHO_ZERO = "rho_zero"
    PRODUCT_DIAG = "product_diag"
    RANDOM = "random"


def _check_dim(d):
    if int(d) != d or d < 2:
        raise DimensionError(f"local dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _in_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise DomainError(f"{name} must lie in [{lo:.6g}, {hi:.6g}], got {value!r}")


def _projector(psi):
    return np.outer(psi, psi.conj())


def max_entangled(d):
    d = _check_dim(d)
    return validate_density(_projector(max_entangled_vector(d)))


def isotropic(d, theta):
    d = _check_dim(d)
    _in_range("theta", theta, -1 / (d * d - 1), 1)
    n = d * d
    rho = (1 - theta) / n * np.eye(n) + theta * _projector(max_entangled_vector(d))
    return validate_density(rho)


def example1_matrix(a):
    """The unnormalized 9x9 matrix of the 3x3 family, trace ``8a + 1``."""
    M = np.zeros((9, 9))
    np.fill_diagonal(M, a)
    for p in (0, 4, 8):
        for q in (0, 4, 8):
            M[p, q] = a
    M[6, 6] = M[8, 8] = (1 + a) / 2
    M[6, 8] = M[8, 6] = np.sqrt(1 - a * a) / 2
    return M


def example1(a):
    _in_range("a", a, 0, 1)
    M = example1_matrix(a)
    return validate_density(M / np.trace(M))


def product_diag(p, q=None):
    """``diag(p) (x) diag(q)`` for probability vectors ``p`` and ``q``."""
    p = np.asarray(p, dtype=float)
    q = p if q is None else np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionError("both factors need the same local dimension")
    return validate_density(np.kron(np.diag(p), np.diag(q)).astype(complex))


def example2(x):
    """``8/9 sigma + 1/9 phi+`` with ``sigma = [x, 1-x, 0]`` on both sides, d = 3."""
    _in_range("x", x, 0, 1)
    loc = np.diag([x, 1 - x, 0.0])
    sigma = np.kron(loc, loc)
    rho = 8 / 9 * sigma + 1 / 9 * _projector(max_entangled_vector(3))
    return validate_density(rho)


def phi_x_vector(x):
    psi = np.zeros(9, dtype=complex)
    psi[0] = psi[4] = np.sqrt(x)
    psi[8] = np.sqrt(max(1 - 2 * x, 0.0))
    return psi


def phi_x(x):
    _in_range("x", x, 0, 0.5)
    return validate_density(_projector(phi_x_vector(x)))


def phi_mixture(weights):
    """Convex mixture ``sum_k p_k |phi_{x_k}><phi_{x_k}|`` from ``(p_k, x_k)`` pairs."""
    weights = [(float(p), float(x)) for p, x in weights]
    if not weights:
        raise DomainError("mixture needs at least one component")
    total = sum(p for p, _ in weights)
    if any(p <= 0 for p, _ in weights) or abs(total - 1) > 1e-12:
        raise DomainError(f"weights must be positive and sum to 1, got sum {total!r}")
    rho = np.zeros((9, 9), dtype=complex)
    for p, x in weights:
        _in_range("x_k", x, 0, 0.5)
        rho += p * _projector(phi_x_vector(x))
    return validate_density(rho)


def rho3_weights(y):
    _in_range("y", y, 0, 1)
    w = [(y, 1 / 3), ((1 - y) / 2, 0.5), ((1 - y) / 2, 0.0)]
    return [(p, x) for p, x in w if p > 0]


def rho3(y):
    return phi_mixture(rho3_weights(y))


def rho_zero(d, r, s, tol=1e-12):
    """Correlation-free state with local Bloch vectors ``c r`` and ``c s``.

    ``c`` is the largest factor in (0, 1] keeping the matrix PSD, found by
    bisection on the smallest eigenvalue.
    """
    d = _check_dim(d)
    n = d * d - 1
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    if r.shape != (n,) or s.shape != (n,):
        raise DimensionError(f"r and s must have length {n} for d = {d}")

    def build(c):
        return reconstruct(BlochDecomposition(d, c * r, c * s, np.zeros((n, n))))

    def min_eig(c):
        return np.linalg.eigvalsh(build(c))[0]

    if min_eig(1.0) >= 0:
        c = 1.0
    else:
        lo, hi = 0.0, 1.0
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if min_eig(mid) >= 0:
                lo = mid
            else:
                hi = mid
        c = lo
    rho = build(c)
    try:
        return validate_density((rho + rho.conj().T) / 2)
    except Exception as exc:
        raise ConstructionError(f"rho_zero could not be made PSD: {exc}") from exc


def random_density(d, rank=None, seed=0):
    """``A A^dag / Tr(A A^dag)`` with ``A`` a d^2 x rank complex Gaussian matrix."""
    d = _check_dim(d)
    n = d * d
    rank = n if rank is None else int(rank)
    if not 1 <= rank <= n:
        raise DomainError(f"rank must lie in 1..{n}, got {rank}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    A = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = A @ A.conj().T
    rho = (rho + rho.conj().T) / 2
    return validate_density(rho / np.trace(rho).real)


@dataclass(frozen=True)
class StateSpec:
    family: Family
    dim: int = 3
    params: dict = field(default_factory=dict)

    def build(self):
        p = self.params
        f = self.family
        if f is Family.MAX_ENTANGLED:
            return max_entangled(self.dim)
        if f is Family.ISOTROPIC:
            return isotropic(self.dim, p["theta"])
        if f is Family.EXAMPLE1:
            return example1(p["a"])
        if f is Family.EXAMPLE2:
            return example2(p["x"])
        if f is Family.PHI_X:
            return phi_x(p["x"])
        if f is Family.PHI_MIXTURE:
            return phi_mixture(p["weights"])
        if f is Family.RHO3:
            return rho3(p["y"])
        if f is Family.RHO_ZERO:
            return rho_zero(self.dim, p["r"], p["s"])
        if f is Family.PRODUCT_DIAG:
            return product_diag(p["p"], p.get("q"))
        if f is Family.RANDOM:
            return random_density(self.dim, p.get("rank"), p.get("seed", 0))
        raise DomainError(f"unknown family {f!r}")

    def to_json(self):
        return {"family": self.family.value, "dim": self.dim, "params": self.params}

    @classmethod
    def from_json(cls, obj):
        return cls(Family(obj["family"]), int(obj.get("dim", 3)), dict(obj.get("params", {})))
