import math

import numpy as np
import pytest

from flipchain import (
    AlgebraElement,
    Bernoulli,
    CylinderFunction,
    DegenerateSpectrum,
    DepthTooSmall,
    FlipWord,
    GroupoidElement,
    InvalidSpec,
    IsingBoltzmann,
    ModularHamiltonian,
    NonCocyclePerturbation,
    Prefix,
    TransitionEnergy,
    attained_spectrum,
    dfs_check,
    e,
    heisenberg_equivalence_check,
    ising_dfs_coefficients,
    ising_dfs_table,
    ising_energy_brute,
    ising_transition_energy,
    is_exact,
    l2_norm,
    max_abs_diff,
    modular_hamiltonian_eval,
    modular_spectrum_points,
    random_algebra_element,
    rng_for,
    tt_evolve,
)


def test_transition_energy_values():
    x = Prefix(4, 0)
    E = TransitionEnergy(0.7)
    assert E.value(GroupoidElement(x, e(2))) == pytest.approx(4 * 0.7)
    assert E.value(GroupoidElement(x, e(1))) == pytest.approx(2 * 0.7)
    assert ising_transition_energy(2.0, GroupoidElement(x, e(3))) == 8.0
    with pytest.raises(InvalidSpec):
        TransitionEnergy(math.nan)


def test_transition_energy_tables():
    E = TransitionEnergy(1.0)
    w = FlipWord.from_sites([2])
    coeffs = E.coefficient_table(w, 4)
    assert coeffs.dtype == np.int64
    assert np.array_equal(E.table(w, 4), coeffs.astype(float))
    with pytest.raises(DepthTooSmall):
        E.coefficient_table(w, 2)
    assert isinstance(E.measure(), IsingBoltzmann)


def test_energy_brute_force_agreement():
    # closed form vs the H_D difference route, exhaustive at small depth
    for D in range(2, 7):
        for mask in range(1 << (D - 1)):
            w = FlipWord(mask)
            for bits in range(1 << D):
                g = GroupoidElement(Prefix(D, bits), w)
                closed = ising_transition_energy(1.0, g)
                assert ising_energy_brute(1.0, g) == pytest.approx(closed, abs=1e-12)


def test_energy_matches_measure_delta():
    spec = IsingBoltzmann(0.8)
    E = TransitionEnergy(0.8)
    for bits in range(16):
        g = GroupoidElement(Prefix(4, bits), FlipWord.from_sites([1, 3]))
        assert spec.delta(g) == pytest.approx(math.exp(-E.value(g)), rel=1e-14)


def test_modular_hamiltonian_lattice():
    ham = ModularHamiltonian(0.3)
    assert ham.step == pytest.approx(math.log(7 / 3), rel=1e-15)
    g = GroupoidElement(Prefix(2, 0b11), FlipWord.from_sites([1, 2]))
    assert ham.integer_eval(g) == 2
    assert ham.value(g) == pytest.approx(2 * ham.step)
    assert modular_hamiltonian_eval(0.3, g) == ham.value(g)
    table = ham.integer_table(FlipWord.from_sites([1, 2]), 2)
    assert list(table) == [-2, 0, 0, 2]
    with pytest.raises(DepthTooSmall):
        ham.integer_table(e(3), 2)
    with pytest.raises(InvalidSpec):
        ModularHamiltonian(1.2)


def test_modular_hamiltonian_is_log_delta():
    spec = Bernoulli(0.3)
    ham = ModularHamiltonian(0.3)
    for bits in range(8):
        g = GroupoidElement(Prefix(3, bits), FlipWord.from_sites([1, 3]))
        assert float(spec.delta(g)) == pytest.approx(math.exp(ham.value(g)), rel=1e-13)


def test_ising_dfs_tables_exact():
    S = ising_dfs_coefficients(3, 5)
    rep = dfs_check(S)
    assert rep["exact_zero"] is True and rep["max_violation"] == 0.0
    with pytest.raises(DepthTooSmall):
        ising_dfs_coefficients(3, 3)
    T = ising_dfs_table(0.5, 2, 4)
    rep_f = dfs_check(T)
    assert rep_f["passed"] and rep_f["max_violation"] < 1e-13
    assert np.array_equal(T.entry(e(1)).values, 0.5 * S.entry(e(1)).values[:16])


def test_ising_table_is_coboundary_at_truncation():
    S = ising_dfs_coefficients(2, 4)
    H = is_exact(S)
    assert H is not None


def test_spectrum_points():
    step = math.log(7 / 3)
    pts = modular_spectrum_points(0.3, 2)
    assert pts == {k * step for k in (-2, -1, 0, 1, 2)}
    with pytest.raises(DegenerateSpectrum):
        modular_spectrum_points(0.5, 3)
    with pytest.raises(InvalidSpec):
        modular_spectrum_points(0.7, 3)
    with pytest.raises(InvalidSpec):
        modular_spectrum_points(0.0, 3)


def test_attained_spectrum_window():
    for horizon in (1, 2, 3, 4):
        rep = attained_spectrum(0.3, horizon)
        assert rep["matches_window"] is True
        assert rep["attained_k"] == list(range(-horizon, horizon + 1))


def test_tt_evolve_basics():
    energy = TransitionEnergy(1.0)
    rng = rng_for(51, 0)
    F = random_algebra_element(rng, 5, horizon=4)
    spec = energy.measure()
    assert max_abs_diff(tt_evolve(F, 0.0, energy), F) < 1e-15
    # phases have modulus one, so the flow is isometric
    assert abs(l2_norm(tt_evolve(F, 0.9, energy), spec) - l2_norm(F, spec)) < 1e-12
    # group law in t
    twice = tt_evolve(tt_evolve(F, 0.4, energy), 0.5, energy)
    assert max_abs_diff(twice, tt_evolve(F, 0.9, energy)) < 1e-12


def test_heisenberg_equivalence_ising():
    rng = rng_for(52, 0)
    F = random_algebra_element(rng, 5, horizon=4)
    psi = random_algebra_element(rng, 5, 2, horizon=4)
    rep = heisenberg_equivalence_check(F, psi, 0.37, J=1.0)
    assert rep["max_deviation"] < 1e-12
    assert abs(rep["norms_before"]["l2"] - rep["norms_after"]["l2"]) < 1e-12
    assert abs(rep["norms_before"]["hahn"] - rep["norms_after"]["hahn"]) < 1e-12
    assert rep["J"] == 1.0 and rep["lambda"] is None


def test_heisenberg_equivalence_bernoulli_side():
    # the log-modular lattice energy is additive too, so the same identity holds
    rng = rng_for(53, 0)
    F = random_algebra_element(rng, 4, horizon=3)
    psi = random_algebra_element(rng, 4, 2, horizon=3)
    rep = heisenberg_equivalence_check(F, psi, 1.3, energy=ModularHamiltonian(0.3))
    assert rep["max_deviation"] < 1e-12
    assert rep["lambda"] == 0.3 and rep["J"] is None


def pinned_pair():
    one = AlgebraElement({e(1): CylinderFunction.constant(1.0, 1)})
    rng = rng_for(54, 0)
    F = random_algebra_element(rng, 4, horizon=3) + one
    psi = random_algebra_element(rng, 4, 2, horizon=3) + one
    return F, psi


def test_non_cocycle_control_breaks_equivalence():
    broken = NonCocyclePerturbation(TransitionEnergy(1.0))
    F, psi = pinned_pair()
    for t in (0.37, 1.0, math.pi):
        rep = heisenberg_equivalence_check(F, psi, t, energy=broken)
        assert rep["max_deviation"] > 1e-3


def test_non_cocycle_amplitude_resonance():
    # with amplitude 1 the identity defect is +-2, which e^{i . t} cannot see
    # at t = pi; the default amplitude 1/2 avoids exactly this
    energy = TransitionEnergy(1.0)
    F, psi = pinned_pair()
    resonant = NonCocyclePerturbation(energy, amplitude=1.0)
    rep = heisenberg_equivalence_check(F, psi, math.pi, energy=resonant)
    assert rep["max_deviation"] < 1e-9
    half = NonCocyclePerturbation(energy, amplitude=0.5)
    rep_half = heisenberg_equivalence_check(F, psi, math.pi, energy=half)
    assert rep_half["max_deviation"] > 1e-3


def test_non_cocycle_plumbing():
    base = TransitionEnergy(0.6)
    broken = NonCocyclePerturbation(base)
    assert broken.J == 0.6
    assert isinstance(broken.measure(), IsingBoltzmann)
    assert broken.min_depth(e(1)) == 2
    w = FlipWord.from_sites([1, 2])
    diff = broken.table(w, 3) - base.table(w, 3)
    psi2 = CylinderFunction.psi(2, 3).values
    assert np.array_equal(diff, 0.5 * psi2)
    # words avoiding site 1 are untouched
    assert np.array_equal(broken.table(e(2), 3), base.table(e(2), 3))
