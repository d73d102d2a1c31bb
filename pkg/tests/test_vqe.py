import csv
import io

import numpy as np
import pytest

from helpers import LIH_EQ_CCSD, lih_optimized, lih_problem, random_coeffs
from pairvqe.ansatz import PuccdParameters
from pairvqe.integrals import SeniorityZeroCoeffs
from pairvqe.optimize import implicit_filtering, nelder_mead
from pairvqe.oracle import SeniorityZeroBasis, doci_ground
from pairvqe.pauli import qubitize
from pairvqe.vqe import VqeConfig, run_vqe

rng = np.random.default_rng(7707)

TOY = qubitize(SeniorityZeroCoeffs(0.0, np.array([[-2.0, 0.4], [0.4, -1.0]]), np.zeros((2, 2))))
TOY_GROUND = -1.5 - np.sqrt(0.25 + 0.16)


def double_well(x):
    return (x[0] ** 2 - 1) ** 2 + 0.5 * np.sum(x[1:] ** 2)


@pytest.mark.parametrize("optimizer", ["implicit_filtering", "nelder_mead"])
def test_toy_reaches_lower_eigenvalue(optimizer):
    result = run_vqe(TOY, 1, VqeConfig(optimizer=optimizer))
    assert result.best_energy == pytest.approx(TOY_GROUND, abs=1e-8)
    assert result.converged


def test_single_evaluation_returns_hf():
    p = lih_problem()
    result = run_vqe(p.hamiltonian, 2, VqeConfig(max_evaluations=1))
    assert len(result.trace) == 1
    assert result.best_energy == pytest.approx(p.e_hf, abs=1e-10)
    assert not result.converged


def test_exact_run_is_bitwise_deterministic():
    c = random_coeffs(rng, 4)
    h = qubitize(c)
    a = run_vqe(h, 2, VqeConfig(max_evaluations=300))
    b = run_vqe(h, 2, VqeConfig(max_evaluations=300))
    assert a.trace_csv() == b.trace_csv()


@pytest.mark.parametrize("n, ne", [(4, 2), (5, 2), (6, 3)])
def test_variational_bound_and_monotone_best(n, ne):
    c = random_coeffs(rng, n)
    h = qubitize(c)
    e_doci, _ = doci_ground(c, SeniorityZeroBasis(n, ne))
    result = run_vqe(h, ne, VqeConfig(max_evaluations=400))
    energies = np.array([e for _, _, e in result.trace])
    assert np.all(energies >= e_doci - 1e-10)
    running = np.minimum.accumulate(energies)
    assert np.all(np.diff(running) <= 0)
    assert result.best_energy == energies.min()
    assert [k for _, k, _ in result.trace] == list(range(1, len(energies) + 1))


def test_lih_exact_matches_doci():
    result = lih_optimized()
    assert abs(result.best_energy - lih_problem().e_doci) < 1.6e-6


def test_parameter_shape_checked():
    with pytest.raises(ValueError):
        run_vqe(TOY, 1, VqeConfig(initial_parameters=PuccdParameters.zeros(3, 1)))


@pytest.mark.parametrize(
    "kwargs",
    [dict(max_evaluations=0), dict(objective="sampled", target_sigma=0.0), dict(optimizer="bfgs")],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        VqeConfig(**kwargs)


def test_sampled_trace_and_determinism():
    p = lih_problem()
    init = PuccdParameters.load(LIH_EQ_CCSD, 6, 2)
    config = VqeConfig(objective="sampled", initial_parameters=init, max_evaluations=40, seed=4)
    a = run_vqe(p.hamiltonian, 2, config)
    b = run_vqe(p.hamiltonian, 2, config)
    assert a.trace_csv() == b.trace_csv()
    shots = [s for s, _, _ in a.trace]
    assert np.all(np.diff(shots) > 0)
    assert shots[0] == config.pilot_shots * 3 + sum(a.shots_per_group.values())
    rows = list(csv.reader(io.StringIO(a.trace_csv())))
    assert rows[0] == ["shots_cumulative", "evaluations", "energy_hartree"]


def test_angles_clamped():
    result = run_vqe(TOY, 1, VqeConfig(initial_parameters=PuccdParameters(2, 1, {(1, 0): 3.1})))
    assert np.all(np.abs(result.best_parameters.as_vector()) <= np.pi)


def test_imfil_separable_quadratic():
    res = implicit_filtering(lambda x: np.sum((x - 1) ** 2), np.zeros(3), 1.0, 1e-6, 10_000)
    assert res.success
    np.testing.assert_allclose(res.x, 1.0, atol=1e-6)


def test_imfil_budget_one():
    res = implicit_filtering(double_well, np.array([0.3, 0.2]), 0.1, 1e-6, 1)
    assert res.nfev == 1 and not res.success
    np.testing.assert_array_equal(res.x, [0.3, 0.2])
    assert res.fun == double_well(np.array([0.3, 0.2]))


def test_imfil_budget_respected():
    calls = []

    def f(x):
        calls.append(1)
        return double_well(x)

    res = implicit_filtering(f, np.array([0.3, 0.2, -0.1]), 0.1, 1e-9, 37)
    assert len(calls) == res.nfev == 37
    assert res.message == "evaluation budget exhausted"


def test_imfil_tie_break_prefers_lowest_coordinate():
    res = implicit_filtering(lambda x: -abs(x[0]) - abs(x[1]), np.zeros(2), 1.0, 0.9, 3)
    np.testing.assert_array_equal(res.x, [1.0, 0.0])


def test_imfil_noise_keeps_basin():
    noiseless = implicit_filtering(double_well, np.array([0.3, 0.4]), 0.1, 1e-3, 2000)
    target = np.sign(noiseless.x[0])
    agree = 0
    for seed in range(20):
        noise = np.random.default_rng(seed)
        res = implicit_filtering(
            lambda x: double_well(x) + noise.normal(scale=1e-3), np.array([0.3, 0.4]), 0.1, 1e-3, 2000
        )
        agree += np.sign(res.x[0]) == target and abs(abs(res.x[0]) - 1) < 0.1
    assert agree >= 18


def test_imfil_validates_steps():
    with pytest.raises(ValueError):
        implicit_filtering(double_well, np.zeros(2), 1e-7, 1e-6, 10)


def test_nelder_mead_stops_on_simplex_size():
    res = nelder_mead(lambda x: np.sum((x - 1) ** 2), np.zeros(3), 0.5, 5000, xatol=1e-6)
    assert res.success and res.message == "simplex diameter below tolerance"
    np.testing.assert_allclose(res.x, 1.0, atol=1e-5)
