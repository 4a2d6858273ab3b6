"""Parameterized measurements, constraint repair and the numerical searches."""

import math

import numpy as np
import pytest

import helpers
import property_suites
from qrelay import (DomainError, Hermitian2, OptimizerConfig, ParamPom,
                    constraint_residuals, error_probability, fidelity_of_strategy,
                    is_feasible, max_fidelity_analytic, min_error_analytic,
                    optimize_error, optimize_fidelity, repair,
                    square_root_measurement, symmetric_ensemble, to_pom,
                    validate_pom)
from qrelay.qubit import MINUS, PLUS


def x_basis_params() -> ParamPom:
    return ParamPom(weights=(0.5, 0.5), colatitudes=(math.pi / 2, math.pi / 2),
                    longitudes=(0.0, math.pi))


def test_parampom_structural_checks():
    with pytest.raises(DomainError):
        ParamPom(weights=(0.5,), colatitudes=(0.1, 0.2), longitudes=(0.0, 0.0))
    with pytest.raises(DomainError):
        ParamPom(weights=(), colatitudes=(), longitudes=())
    p = x_basis_params()
    assert p.n == 2
    assert not p.weights.flags.writeable


def test_constraint_residuals_on_known_candidate():
    lopsided = ParamPom(weights=(0.6, 0.4), colatitudes=(math.pi / 2, math.pi / 2),
                        longitudes=(0.0, math.pi))
    r_sum, r_polar, r_azimuthal = constraint_residuals(lopsided)
    assert r_sum == pytest.approx(0.0, abs=1e-15)
    assert r_polar == pytest.approx(0.0, abs=1e-15)
    assert r_azimuthal == pytest.approx(0.2, abs=1e-12)
    assert not is_feasible(lopsided)
    assert is_feasible(x_basis_params())


def test_to_pom_x_basis():
    pom = to_pom(x_basis_params())
    assert validate_pom(pom) == []
    assert helpers.entrywise_gap(pom.elements[0], Hermitian2(0.5, 0.5, 0.5 + 0.0j)) <= 1e-12
    assert helpers.entrywise_gap(pom.elements[1], Hermitian2(0.5, 0.5, -0.5 + 0.0j)) <= 1e-12


def test_to_pom_poles():
    p = ParamPom(weights=(0.5, 0.5), colatitudes=(0.0, math.pi), longitudes=(1.7, 0.3))
    pom = to_pom(p)
    assert helpers.entrywise_gap(pom.elements[0], Hermitian2.projector(PLUS)) <= 1e-12
    assert helpers.entrywise_gap(pom.elements[1], Hermitian2.projector(MINUS)) <= 1e-12


def test_to_pom_reproduces_square_root_measurement():
    theta = 0.8
    p = ParamPom(weights=(1 / 3, 1 / 3, 1 / 3),
                 colatitudes=(math.pi / 2,) * 3,
                 longitudes=(0.0, 2 * math.pi / 3, 4 * math.pi / 3))
    pom = to_pom(p)
    srm = square_root_measurement(symmetric_ensemble(3, theta))
    for ours, ref in zip(pom.elements, srm.elements):
        assert helpers.entrywise_gap(ours, ref) <= 1e-12


def test_to_pom_rejects_infeasible_candidate():
    lopsided = ParamPom(weights=(0.6, 0.4), colatitudes=(math.pi / 2, math.pi / 2),
                        longitudes=(0.0, math.pi))
    with pytest.raises(DomainError, match="residuals"):
        to_pom(lopsided)


def test_repair_is_identity_on_feasible_input():
    p = x_basis_params()
    fixed = repair(p)
    assert np.array_equal(fixed.weights, p.weights)
    assert np.array_equal(fixed.colatitudes, p.colatitudes)
    assert np.array_equal(fixed.longitudes, p.longitudes)


def test_repair_rebalances_forced_weights():
    lopsided = ParamPom(weights=(0.6, 0.4), colatitudes=(math.pi / 2, math.pi / 2),
                        longitudes=(0.0, math.pi))
    fixed = repair(lopsided)
    assert fixed.weights[0] == pytest.approx(0.5, abs=1e-9)
    assert fixed.weights[1] == pytest.approx(0.5, abs=1e-9)
    assert np.allclose(fixed.colatitudes, lopsided.colatitudes, atol=1e-9)
    # longitudes may come back shifted by a full turn
    wrapped = np.mod(np.asarray(fixed.longitudes) - lopsided.longitudes + math.pi,
                     2 * math.pi) - math.pi
    assert np.allclose(wrapped, 0.0, atol=1e-9)


def test_repair_random_infeasible_candidate():
    rng = np.random.default_rng(7)
    p = ParamPom(weights=rng.uniform(0.05, 1.0, size=4),
                 colatitudes=rng.uniform(0.0, math.pi, size=4),
                 longitudes=rng.uniform(0.0, 2 * math.pi, size=4))
    fixed = repair(p)
    assert max(constraint_residuals(fixed)) <= 1e-8
    assert float(fixed.weights.min()) >= 0.0
    assert validate_pom(to_pom(fixed)) == []


def test_config_validation():
    with pytest.raises(DomainError):
        OptimizerConfig(restarts=0)
    with pytest.raises(DomainError):
        OptimizerConfig(max_iterations=0)
    with pytest.raises(DomainError):
        OptimizerConfig(step_scale=0.0)
    with pytest.raises(DomainError):
        OptimizerConfig(tolerance=-1e-9)
    with pytest.raises(DomainError):
        OptimizerConfig(seed=-1)
    with pytest.raises(DomainError):
        OptimizerConfig(seed=2 ** 64)
    cfg = OptimizerConfig()
    assert cfg.restarts == 16 and cfg.max_iterations == 2000
    assert cfg.step_scale == pytest.approx(0.3)


def test_optimize_fidelity_degenerate_ensemble():
    e = symmetric_ensemble(4, 0.0)
    cfg = OptimizerConfig(n_elements=2, restarts=4, max_iterations=300, seed=1)
    strategy, value, trace = optimize_fidelity(e, cfg)
    assert value == pytest.approx(1.0, abs=1e-10)
    assert trace.objective == "fidelity"


def test_optimize_fidelity_reaches_the_floor():
    e = symmetric_ensemble(3, math.pi / 2)
    cfg = OptimizerConfig(n_elements=3, restarts=8, seed=1)
    strategy, value, trace = optimize_fidelity(e, cfg)
    assert abs(value - 0.75) <= 1e-4
    assert validate_pom(strategy.pom) == []
    assert value == pytest.approx(fidelity_of_strategy(e, strategy), abs=1e-10)


def test_optimize_fidelity_two_signal_support(m2_concentration):
    strategy, value, trace = m2_concentration[:3]
    assert abs(value - max_fidelity_analytic(2, math.pi / 4)) <= 1e-4
    weights = sorted((0.5 * (el.a + el.d) for el in strategy.pom.elements), reverse=True)
    assert weights[0] + weights[1] >= 0.999 * sum(weights)


def test_optimize_fidelity_trace_contract(m2_concentration):
    trace = m2_concentration.trace
    assert 0 <= trace.best_restart < 16
    assert trace.evaluations > 0
    assert len(trace.records) + len(trace.failed_restarts) <= 16
    assert all(rec.final_value >= rec.start_value - 1e-12 for rec in trace.records)
    assert is_feasible(trace.best_params)


def test_optimize_error_degenerate_ensemble():
    e = symmetric_ensemble(5, 0.0)
    cfg = OptimizerConfig(n_elements=2, restarts=4, max_iterations=300, seed=1)
    pom, assignment, error, trace = optimize_error(e, cfg)
    assert error == pytest.approx(1 - 1 / 5, abs=1e-9)
    assert trace.objective == "error"


def test_optimize_error_matches_closed_form():
    e = symmetric_ensemble(3, math.pi / 2)
    cfg = OptimizerConfig(n_elements=3, restarts=8, seed=1)
    pom, assignment, error, trace = optimize_error(e, cfg)
    assert abs(error - min_error_analytic(3, math.pi / 2)) <= 1e-4
    assert validate_pom(pom) == []
    assert error == pytest.approx(error_probability(e, pom, assignment), abs=1e-12)


def test_optimize_error_interior_point():
    e = symmetric_ensemble(4, math.pi / 5)
    cfg = OptimizerConfig(n_elements=4, restarts=8, seed=1)
    _, _, error, _ = optimize_error(e, cfg)
    assert abs(error - min_error_analytic(4, math.pi / 5)) <= 1e-4


def test_never_beats_bound_property(default_fidelity_sweep):
    assert property_suites.optimizer_bound_suite(default_fidelity_sweep) == 25


def test_search_soundness_property(default_fidelity_sweep):
    traces = [res.trace for res in default_fidelity_sweep.results.values()]
    assert property_suites.optimizer_soundness_suite(traces) > 0


def test_determinism_property():
    assert property_suites.optimizer_determinism_suite() == 4


def test_element_count_invariance_property():
    assert property_suites.optimizer_invariance_suite() == 4
