from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fefbloch.bloch import BlochDecomposition, decompose, validate_density
from fefbloch.bounds import (
    Usefulness,
    delta_bound,
    delta_bound_table,
    delta_matrix,
    distillable_isotropic,
    exact_fef_thm3,
    fef_bloch_objective,
    fef_objective,
    fef_two_qubit,
    full_report,
    optimal_fidelity,
    singlet_fraction,
    thm1_weights,
    upper_bound_cor1,
    upper_bound_prior,
    upper_bound_thm1,
    useful_for_teleportation,
)
from fefbloch.gellmann import basis
from fefbloch.errors import DimensionError, DomainError, PreconditionError
from fefbloch.optimizer import haar_unitaries, haar_unitary
from fefbloch.states import example1, example2, isotropic, max_entangled, phi_mixture, phi_x, rho_zero

from conftest import random_states

SQ3 = np.sqrt(3)


def zero_T(d):
    n = d * d - 1
    return BlochDecomposition(d, np.zeros(n), np.zeros(n), np.zeros((n, n)))


# -- objective ------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 3, 4])
def test_objective_trivial_values(d, rng):
    assert fef_objective(max_entangled(d), np.eye(d)) == pytest.approx(1, abs=1e-15)
    mixed = validate_density(np.eye(d * d) / d**2)
    assert fef_objective(mixed, haar_unitary(d, rng)) == pytest.approx(1 / d**2, abs=1e-15)


def test_objective_product_state():
    # |<phi+|00>|^2 = 1/2
    rho = validate_density(np.diag([1.0, 0, 0, 0]))
    assert fef_objective(rho, np.eye(2)) == pytest.approx(0.5, abs=1e-15)


def test_objective_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        fef_objective(max_entangled(2), np.diag([1.0, 1.1]))
    with pytest.raises(PreconditionError):
        fef_bloch_objective(decompose(max_entangled(2)), np.eye(3))


def test_bloch_objective_examples(rng):
    assert fef_bloch_objective(decompose(max_entangled(2)), np.eye(2)) == pytest.approx(1, abs=1e-14)
    for d in (2, 3, 4):
        assert fef_bloch_objective(zero_T(d), haar_unitary(d, rng)) == pytest.approx(1 / d**2, abs=1e-15)
    rho = example1(0.3)
    U = haar_unitary(3, np.random.default_rng(5))
    assert abs(fef_bloch_objective(decompose(rho), U) - fef_objective(rho, U)) < 1e-9


@pytest.mark.parametrize("d", [2, 3, 4])
def test_prop1_equivalence(d):
    states = random_states(d, 1000, seed=100 + d)
    Us = haar_unitaries(d, 1000, np.random.default_rng(200 + d))
    worst = max(abs(fef_bloch_objective(decompose(r), U) - fef_objective(r, U)) for r, U in zip(states, Us))
    assert worst < 1e-9


# -- singlet fraction -------------------------------------------------------

@pytest.mark.parametrize("a", np.linspace(0, 1, 11))
def test_singlet_fraction_example1(a):
    assert abs(singlet_fraction(decompose(example1(a))) - (17 * a + 1) / (48 * a + 6)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("theta", [-0.05, 0.0, 0.3, 1.0])
def test_singlet_fraction_isotropic(d, theta):
    theta = max(theta, -1 / (d * d - 1))
    f = singlet_fraction(decompose(isotropic(d, theta)))
    assert abs(f - (1 + theta * (d * d - 1)) / d**2) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_singlet_fraction_matches_overlap(d):
    psi = np.eye(d).reshape(-1) / np.sqrt(d)
    for rho in random_states(d, 100, seed=d):
        direct = np.vdot(psi, rho.data @ psi).real
        assert abs(singlet_fraction(decompose(rho)) - direct) < 1e-10
    assert singlet_fraction(zero_T(d)) == pytest.approx(1 / d**2)


# -- upper bounds -----------------------------------------------------------

@pytest.mark.parametrize("a", np.linspace(0, 1, 11))
def test_example1_bounds(a):
    b = decompose(example1(a))
    thm1, parts = upper_bound_thm1(b)
    assert abs(thm1 - (3 + 33 * a + 2 * np.sqrt(1 - a * a)) / (12 + 96 * a)) < 1e-12
    cor1 = (3 + SQ3 + (51 - SQ3) * a + 2 * np.sqrt(3 * (1 - a * a))) / (18 * (8 * a + 1))
    assert abs(upper_bound_cor1(b) - cor1) < 1e-12
    assert min(parts.t1, parts.t2, parts.t3, parts.t4) >= 0


def test_example1_pinch_at_one():
    b = decompose(example1(1.0))
    assert upper_bound_thm1(b)[0] == pytest.approx(1 / 3, abs=1e-15)
    assert upper_bound_thm1(b)[0] - singlet_fraction(b) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_bounds_of_uncorrelated_state(d):
    assert upper_bound_thm1(zero_T(d))[0] == 1 / d**2
    assert upper_bound_cor1(zero_T(d)) == 1 / d**2
    assert upper_bound_prior(zero_T(d)) == 1 / d**2


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cor1_isotropic(d):
    for theta in (-1 / (d * d - 1), -0.01, 0.2, 0.9):
        b = decompose(isotropic(d, theta))
        assert abs(upper_bound_cor1(b) - (1 + abs(theta) * (d * d - 1)) / d**2) < 1e-12


def test_thm1_weights_d2_all_two():
    assert np.allclose(thm1_weights(2), 2)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_thm1_weights_bounded_by_two(d):
    w = thm1_weights(d)
    assert np.all(w <= 2 + 1e-15) and np.all(w > 0)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_thm1_below_cor1(d):
    for rho in random_states(d, 200, seed=50 + d):
        b = decompose(rho)
        assert upper_bound_thm1(b)[0] <= upper_bound_cor1(b) + 1e-12


def test_prior_bound_examples():
    assert upper_bound_prior(decompose(max_entangled(2))) == pytest.approx(1, abs=1e-14)
    assert upper_bound_prior(decompose(max_entangled(3))) == pytest.approx(1, abs=1e-14)
    b = decompose(example2(0.5))
    # independent evaluation: M(phi+) = (d/2) diag(+-1) / d^2
    d = 3
    M_phi = np.diag(decompose(max_entangled(3)).T.diagonal()) / d**2
    oracle = 1 / d**2 + 4 * np.abs(np.linalg.svd((b.T / d**2).T @ M_phi, compute_uv=False)).sum()
    assert upper_bound_prior(b) == pytest.approx(oracle, abs=1e-14)
    assert upper_bound_prior(b) >= singlet_fraction(b) - 1e-12
    with pytest.raises(DimensionError):
        upper_bound_prior(b, 2)


# -- exact classes ------------------------------------------------------------

@pytest.mark.parametrize("x", np.linspace(0, 0.5, 11))
def test_thm3_phi_x(x):
    val = exact_fef_thm3(decompose(phi_x(x)))
    assert abs(val - (1 + 2 * x + 4 * np.sqrt(x * (1 - 2 * x))) / 3) < 1e-12


def test_thm3_mixture():
    w = [(0.2, 0.05), (0.5, 0.3), (0.3, 0.45)]
    expect = (1 + 2 * sum(p * (x + 2 * np.sqrt(x * (1 - 2 * x))) for p, x in w)) / 3
    assert abs(exact_fef_thm3(decompose(phi_mixture(w))) - expect) < 1e-12


def test_thm3_absent_when_off_diagonal():
    T = np.zeros((3, 3))
    T[0, 1] = 0.5
    assert exact_fef_thm3(BlochDecomposition(2, np.zeros(3), np.zeros(3), T)) is None
    T = np.diag([0.1, 0.1, 0.1])  # wrong sign on the Omega3 entry
    assert exact_fef_thm3(BlochDecomposition(2, np.zeros(3), np.zeros(3), T)) is None


@pytest.mark.parametrize("d", [2, 3, 4])
def test_thm3_consistency_with_sandwich(d):
    for rho in random_states(d, 50, seed=d) + [isotropic(d, 0.4), max_entangled(d)]:
        b = decompose(rho)
        ex = exact_fef_thm3(b)
        if ex is None:
            continue
        f = singlet_fraction(b)
        assert f - 1e-9 <= ex <= upper_bound_cor1(b) + 1e-9
        assert abs(ex - f) < 1e-12


def test_two_qubit_formula():
    assert fef_two_qubit(decompose(max_entangled(2))) == pytest.approx(1)
    assert fef_two_qubit(decompose(validate_density(np.eye(4) / 4))) == pytest.approx(0.25)
    with pytest.raises(DimensionError):
        fef_two_qubit(decompose(max_entangled(3)))


# -- Delta envelope -----------------------------------------------------------

def test_delta_bound_examples():
    assert delta_bound(3, 1, 1) == pytest.approx((-2, 2))
    assert delta_bound(3, 1, 4) == pytest.approx((-2, 2))
    assert delta_bound(3, 4, 7) == pytest.approx((-2, 2))
    # i + j = 4 >= d + 1 switches the lower branch: -2d / sqrt(ij(i+1)(j+1))
    assert delta_bound(3, 2, 2)[0] == pytest.approx(-6 / 6)
    assert delta_bound(3, 2, 2)[1] == pytest.approx(2 * (4 + 2) / 6)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_delta_envelope_sound(d):
    lo, hi = delta_bound_table(d)
    assert np.all(np.abs(lo) <= 2) and np.all(np.abs(hi) <= 2)
    for U in haar_unitaries(d, 1000, np.random.default_rng(d)):
        D = delta_matrix(U, d)
        assert np.all(D >= lo - 1e-9) and np.all(D <= hi + 1e-9)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_delta_envelope_hi_is_attained_on_diagonal_pairs(d):
    # permutation matrices realize every pairing of the two diagonal spectra

    lam = basis(d).generators[: d - 1]
    for i in range(1, d):
        for j in range(1, d):
            lo, hi = delta_bound(d, i, j)
            vals = []
            for perm in permutations(range(d)):
                P = np.eye(d)[list(perm)]
                vals.append(np.trace(P.T @ lam[i - 1] @ P @ lam[j - 1]).real)
            assert max(vals) == pytest.approx(hi)
            assert min(vals) == pytest.approx(lo)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_delta_envelope_property(d, seed):
    U = haar_unitary(d, np.random.default_rng(seed))
    lo, hi = delta_bound_table(d)
    D = delta_matrix(U, d)
    assert np.all(D >= lo - 1e-9) and np.all(D <= hi + 1e-9)


# -- fidelity, usefulness, distillability --------------------------------------

def test_optimal_fidelity():
    assert optimal_fidelity(1, 2) == 1
    assert optimal_fidelity(1 / 9, 3) == pytest.approx(1 / 3)
    assert optimal_fidelity(1 / 3, 3) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        optimal_fidelity(1.1, 3)


def test_usefulness():
    assert useful_for_teleportation(decompose(example2(0.05))) is Usefulness.YES
    assert useful_for_teleportation(zero_T(3)) is Usefulness.NO
    b = decompose(rho_zero(3, np.full(8, 0.1), np.full(8, -0.1)))
    assert useful_for_teleportation(b) is Usefulness.NO
    b = decompose(example2(0.5))
    # f(x=1/2) = (8/27)(1/2) + 1/9 = 7/27 < 1/3
    assert singlet_fraction(b) == pytest.approx(7 / 27)
    assert useful_for_teleportation(b) is not Usefulness.YES


def test_usefulness_undetermined_case():
    # f < 1/d but bounds > 1/d; sufficient usefulness test fails while T is large
    b = decompose(example1(0.0))
    assert singlet_fraction(b) < 1 / 3 < upper_bound_thm1(b)[0]
    assert useful_for_teleportation(b) is Usefulness.UNDETERMINED


def test_distillable():
    assert distillable_isotropic(1, 3)
    assert not distillable_isotropic(1 / 4, 3)
    assert not distillable_isotropic(0, 2)
    assert distillable_isotropic(1 / 4 + 1e-12, 3)
    with pytest.raises(DomainError):
        distillable_isotropic(-0.2, 3)


# -- report -------------------------------------------------------------------

def test_report_phi_plus():
    rep = full_report(max_entangled(2))
    for v in (rep.singlet_fraction, rep.thm1_bound, rep.cor1_bound, rep.prior_bound, rep.two_qubit_exact):
        assert v == pytest.approx(1, abs=1e-12)
    assert rep.useful_for_teleportation is Usefulness.YES
    assert rep.fidelity_source == "exact"


def test_report_example1_pinned():
    rep = full_report(example1(1.0))
    assert rep.thm1_bound == pytest.approx(1 / 3, abs=1e-15)
    assert rep.thm1_bound - rep.singlet_fraction < 1e-12


def test_report_isotropic():
    rep = full_report(isotropic(3, 0.5))
    assert rep.exact_thm3 == pytest.approx(5 / 9, abs=1e-12)
    assert rep.two_qubit_exact is None
    assert rep.optimal_fidelity == pytest.approx((3 * 5 / 9 + 1) / 4)


@pytest.mark.parametrize("d", [2, 3])
def test_report_invariants(d):
    for rho in random_states(d, 30, seed=9):
        rep = full_report(rho)
        assert rep.singlet_fraction <= min(rep.thm1_bound, rep.cor1_bound) + 1e-9
        assert rep.thm1_bound <= rep.cor1_bound + 1e-9
        # the upper-bound formulas themselves can exceed 1 on generic states
        assert 0 <= rep.singlet_fraction <= 1 + 1e-9
        assert 0 <= rep.optimal_fidelity <= 1 + 1e-9
        assert min(rep.thm1_bound, rep.cor1_bound, rep.prior_bound) >= 0
        assert rep.fidelity_source in ("exact", "bound")
        d_ = rep.to_dict()
        assert d_["useful_for_teleportation"] in ("yes", "no", "undetermined")
