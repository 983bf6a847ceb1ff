"""Randomized invariant suites behind ``fefbloch verify``.

Each suite draws from its own seeded stream and reports how many cases it
checked and the worst deviation seen against its tolerance.
"""

import time
from dataclasses import dataclass

import numpy as np

from .bloch import decompose, kyfan_norm, purity_from_bloch, reconstruct, validate_density
from .bounds import (
    delta_bound_table,
    delta_matrix,
    exact_fef_thm3,
    fef_bloch_objective,
    fef_objective,
    fef_two_qubit,
    max_entangled_vector,
    singlet_fraction,
    two_qubit_attained,
    upper_bound_cor1,
    upper_bound_thm1,
)
from .gellmann import Block, basis, generator_spectrum
from .optimizer import OptimizerConfig, haar_unitaries, haar_unitary, maximize_fef
from .states import isotropic, phi_mixture, random_density

LEVELS = {
    # suite sample counts: fast / full
    "fast": dict(roundtrip=20, prop1=100, thm2=50, delta=100, ordering=200, sandwich=8,
                 two_qubit=10, thm3=5, lu=3, restarts=12),
    "full": dict(roundtrip=200, prop1=1000, thm2=500, delta=1000, ordering=1000, sandwich=100,
                 two_qubit=100, thm3=30, lu=20, restarts=32),
}


@dataclass
class SuiteResult:
    name: str
    count: int
    max_dev: float
    tol: float
    seconds: float = 0.0

    @property
    def passed(self):
        return bool(self.max_dev <= self.tol)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name:<24} n={self.count:<6d} max_dev={self.max_dev:.3e} "
                f"tol={self.tol:.0e} ({self.seconds:.1f}s)")


def _rng(name):
    return np.random.default_rng([sum(map(ord, name)), 7])


def _random_states(d, n, rng):
    return [random_density(d, int(rng.integers(1, d * d + 1)), rng) for _ in range(n)]


def suite_gellmann(counts):
    dev = 0.0
    count = 0
    for d in (2, 3, 4, 5):
        B = basis(d)
        lam = B.generators
        gram = np.einsum("iab,jba->ij", lam, lam)
        dev = max(dev, np.max(np.abs(gram - 2 * np.eye(len(B)))))
        for i in range(1, len(B) + 1):
            g = B[i]
            cls = B.index_map[i - 1]
            expect = np.zeros((d, d), dtype=complex)
            if cls.block is Block.OMEGA1:
                a = np.sqrt(2 / (i * (i + 1)))
                expect[np.arange(i), np.arange(i)] = a
                expect[i, i] = -i * a
            else:
                l, k = cls.pair
                if cls.block is Block.OMEGA2:
                    expect[l, k] = expect[k, l] = 1
                else:
                    expect[k, l] = 1j
                    expect[l, k] = -1j
            dev = max(dev, np.max(np.abs(g - expect)))
            spec = np.sort(np.linalg.eigvalsh(g))[::-1]
            dev = max(dev, np.max(np.abs(spec - generator_spectrum(d, i))))
            count += 1
    return SuiteResult("gellmann", count, float(dev), 1e-12)


def suite_roundtrip(counts):
    rng = _rng("roundtrip")
    dev = 0.0
    count = 0
    for d in (2, 3, 4):
        for rho in _random_states(d, counts["roundtrip"], rng):
            dev = max(dev, np.max(np.abs(reconstruct(decompose(rho)) - rho.data)))
            count += 1
    return SuiteResult("bloch_roundtrip", count, float(dev), 1e-10)


def suite_purity(counts):
    rng = _rng("purity")
    dev = 0.0
    count = 0
    for d in (2, 3, 4):
        for rho in _random_states(d, counts["roundtrip"], rng):
            purity = np.trace(rho.data @ rho.data).real
            dev = max(dev, abs(purity - purity_from_bloch(decompose(rho))))
            count += 1
    return SuiteResult("purity_identity", count, float(dev), 1e-9)


def suite_kyfan(counts):
    rng = _rng("kyfan")
    dev = 0.0
    for _ in range(counts["roundtrip"]):
        n = int(rng.integers(2, 16))
        T = rng.standard_normal((n, n))
        O1, _ = np.linalg.qr(rng.standard_normal((n, n)))
        O2, _ = np.linalg.qr(rng.standard_normal((n, n)))
        dev = max(dev, abs(kyfan_norm(O1 @ T @ O2) - kyfan_norm(T)))
        D = np.diag(rng.standard_normal(n))
        dev = max(dev, abs(kyfan_norm(D) - np.abs(np.diag(D)).sum()))
    return SuiteResult("kyfan_invariance", counts["roundtrip"], float(dev), 1e-10)


def suite_prop1(counts):
    rng = _rng("prop1")
    dev = 0.0
    count = 0
    for d in (2, 3, 4):
        states = _random_states(d, counts["prop1"], rng)
        Us = haar_unitaries(d, counts["prop1"], rng)
        for rho, U in zip(states, Us):
            b = decompose(rho)
            dev = max(dev, abs(fef_bloch_objective(b, U) - fef_objective(rho, U)))
            count += 1
    return SuiteResult("prop1_equivalence", count, float(dev), 1e-9)


def suite_thm2(counts):
    rng = _rng("thm2")
    dev = 0.0
    count = 0
    for d in (2, 3, 4):
        psi = max_entangled_vector(d)
        for rho in _random_states(d, counts["thm2"], rng):
            direct = np.vdot(psi, rho.data @ psi).real
            dev = max(dev, abs(singlet_fraction(decompose(rho)) - direct))
            count += 1
    return SuiteResult("thm2_singlet_fraction", count, float(dev), 1e-10)


def suite_delta(counts):
    rng = _rng("delta")
    viol = 0.0
    count = 0
    for d in (2, 3, 4):
        lo, hi = delta_bound_table(d)
        for U in haar_unitaries(d, counts["delta"], rng):
            D = delta_matrix(U, d)
            viol = max(viol, float(np.max(lo - D)), float(np.max(D - hi)))
            count += 1
    return SuiteResult("delta_envelope", count, max(viol, 0.0), 1e-9)


def suite_ordering(counts):
    rng = _rng("ordering")
    viol = 0.0
    count = 0
    for d in (2, 3, 4):
        for rho in _random_states(d, counts["ordering"] // 3, rng):
            b = decompose(rho)
            viol = max(viol, upper_bound_thm1(b)[0] - upper_bound_cor1(b))
            count += 1
    return SuiteResult("bound_ordering", count, max(viol, 0.0), 1e-12)


def suite_sandwich(counts):
    rng = _rng("sandwich")
    cfg = OptimizerConfig(restarts=counts["restarts"])
    viol = 0.0
    count = 0
    for d in (2, 3):
        for rho in _random_states(d, counts["sandwich"], rng):
            b = decompose(rho)
            res = maximize_fef(rho, cfg)
            viol = max(viol, singlet_fraction(b) - res.best_value,
                       res.best_value - upper_bound_thm1(b)[0],
                       abs(fef_objective(rho, res.best_unitary) - res.best_value))
            count += 1
    return SuiteResult("sandwich", count, max(viol, 0.0), 1e-9)


def suite_two_qubit(counts):
    """Closed form matched where attained (det T <= 0), never exceeded elsewhere."""
    rng = _rng("two_qubit")
    cfg = OptimizerConfig(restarts=counts["restarts"])
    dev = 0.0
    for rho in _random_states(2, counts["two_qubit"], rng):
        b = decompose(rho)
        num = maximize_fef(rho, cfg).best_value
        closed = fef_two_qubit(b)
        if two_qubit_attained(b):
            dev = max(dev, abs(num - closed))
        else:
            dev = max(dev, num - closed)
    return SuiteResult("two_qubit_oracle", counts["two_qubit"], max(dev, 0.0), 1e-6)


def suite_thm3(counts):
    rng = _rng("thm3")
    cfg = OptimizerConfig(restarts=counts["restarts"])
    dev = 0.0
    count = 0
    for _ in range(counts["thm3"]):
        k = int(rng.integers(1, 4))
        p = rng.dirichlet(np.ones(k))
        xs = rng.uniform(0, 0.5, size=k)
        rho = phi_mixture(list(zip(p, xs)))
        dev = max(dev, abs(maximize_fef(rho, cfg).best_value - exact_fef_thm3(decompose(rho))))
        d = int(rng.integers(2, 5))
        rho = isotropic(d, float(rng.uniform(0, 1)))
        dev = max(dev, abs(maximize_fef(rho, cfg).best_value - exact_fef_thm3(decompose(rho))))
        count += 2
    return SuiteResult("thm3_oracle", count, float(dev), 1e-6)


def suite_local_unitary(counts):
    rng = _rng("lu")
    cfg = OptimizerConfig(restarts=counts["restarts"])
    dev = 0.0
    count = 0
    for d in (2, 3):
        for rho in _random_states(d, counts["lu"], rng):
            V = np.kron(haar_unitary(d, rng), haar_unitary(d, rng))
            rotated = V @ rho.data @ V.conj().T
            a = maximize_fef(rho, cfg).best_value
            b = maximize_fef(validate_density((rotated + rotated.conj().T) / 2, 1e-9), cfg).best_value
            dev = max(dev, abs(a - b))
            count += 1
    return SuiteResult("local_unitary_invariance", count, float(dev), 1e-5)


SUITES = [
    suite_gellmann,
    suite_roundtrip,
    suite_purity,
    suite_kyfan,
    suite_prop1,
    suite_thm2,
    suite_delta,
    suite_ordering,
    suite_sandwich,
    suite_two_qubit,
    suite_thm3,
    suite_local_unitary,
]


def run_suites(level="fast", suites=None, echo=None):
    counts = LEVELS[level]
    results = []
    for suite in suites or SUITES:
        t0 = time.perf_counter()
        res = suite(counts)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if echo is not None:
            echo(res.line())
    return results
