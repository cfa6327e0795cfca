import numpy as np
import pytest

from eprdistill import (
    EquivalentSolve,
    EquivalentState,
    equivalent_variances,
    solve_equivalent,
)

FIXTURE = EquivalentState(gamma_eq=0.3, eta_a_eq=0.45, eta_b_eq=0.3)
# forward values of FIXTURE, frozen from direct evaluation of the formula
FIXTURE_V_DIFF = 0.8356279939641077
FIXTURE_V_SUM = 1.303470919717593


class TestEquivalentVariances:
    def test_zero_squeezing_is_unit(self):
        for eta_a, eta_b in ((1.0, 1.0), (0.4, 0.9)):
            v_diff, v_sum = equivalent_variances(EquivalentState(0.0, eta_a, eta_b))
            assert v_diff == pytest.approx(1.0)
            assert v_sum == pytest.approx(1.0)

    def test_unit_efficiencies_give_pure_hyperbolic_pair(self):
        v_diff, v_sum = equivalent_variances(EquivalentState(0.3, 1.0, 1.0))
        assert v_diff == pytest.approx(np.exp(-0.6), abs=1e-14)
        assert v_sum == pytest.approx(np.exp(0.6), abs=1e-14)

    def test_fixture_forward_values(self):
        v_diff, v_sum = equivalent_variances(FIXTURE)
        assert v_diff == pytest.approx(FIXTURE_V_DIFF, abs=1e-12)
        assert v_sum == pytest.approx(FIXTURE_V_SUM, abs=1e-12)

    def test_ordering(self):
        v_diff, v_sum = equivalent_variances(EquivalentState(0.5, 0.7, 0.2))
        assert v_sum >= v_diff

    def test_state_validation(self):
        with pytest.raises(ValueError):
            EquivalentState(-0.1, 0.5, 0.5)
        with pytest.raises(ValueError):
            EquivalentState(0.1, 0.0, 0.5)
        with pytest.raises(ValueError):
            EquivalentState(0.1, 0.5, 1.1)


class TestSolveEquivalent:
    def test_fixture_round_trip(self):
        solved = solve_equivalent(FIXTURE_V_DIFF, FIXTURE_V_SUM, 0.45)
        assert solved.ok
        assert solved.state.gamma_eq == pytest.approx(0.3, abs=1e-6)
        assert solved.state.eta_b_eq == pytest.approx(0.3, abs=1e-6)

    def test_grid_round_trip(self):
        # forward/inverse identity across the documented grid; where the
        # variance pair has two physical preimages both are reported and one
        # must match the original parameters
        for gamma in np.linspace(0.05, 1.0, 5):
            for eta_a in (0.1, 0.4, 0.7, 1.0):
                for eta_b in (0.1, 0.4, 0.7, 1.0):
                    v_diff, v_sum = equivalent_variances(
                        EquivalentState(gamma, eta_a, eta_b)
                    )
                    solved = solve_equivalent(v_diff, v_sum, eta_a)
                    assert solved.ok, (gamma, eta_a, eta_b, solved.reason)
                    err = min(
                        max(abs(b.gamma_eq - gamma), abs(b.eta_b_eq - eta_b))
                        for b in solved.branches
                    )
                    assert err < 1e-6

    def test_unique_in_moderate_regime(self):
        # with (v_sum - v_diff)/2 <= 2 eta_a the solution is unique and the
        # primary branch is the exact preimage
        for gamma in (0.1, 0.3, 0.5):
            for eta_b in (0.2, 0.6, 1.0):
                v_diff, v_sum = equivalent_variances(EquivalentState(gamma, 0.45, eta_b))
                assert 0.5 * (v_sum - v_diff) <= 2 * 0.45
                solved = solve_equivalent(v_diff, v_sum, 0.45)
                assert len(solved.branches) == 1
                assert solved.state.gamma_eq == pytest.approx(gamma, abs=1e-6)
                assert solved.state.eta_b_eq == pytest.approx(eta_b, abs=1e-6)

    def test_round_trips_in_variance_space(self):
        solved = solve_equivalent(0.9, 1.3, 0.6)
        assert solved.ok
        back = equivalent_variances(solved.state)
        assert back[0] == pytest.approx(0.9, abs=1e-9)
        assert back[1] == pytest.approx(1.3, abs=1e-9)

    def test_unit_variances_degenerate(self):
        solved = solve_equivalent(1.0, 1.0, 0.5)
        assert solved.status == "degenerate"
        assert solved.state is None

    def test_infeasible_low_energy(self):
        # v_sum + v_diff <= 2 cannot be produced by any lossy squeezed source
        solved = solve_equivalent(0.5, 1.1, 0.45)
        assert solved.status == "infeasible"
        assert "v_sum + v_diff" in solved.reason

    def test_infeasible_ordering(self):
        solved = solve_equivalent(1.2, 1.1, 0.45)
        assert solved.status == "infeasible"
        assert "v_sum > v_diff" in solved.reason

    def test_infeasible_required_efficiency(self):
        # variances built from an unphysical eta_b = 1.2 demand it back
        solved = solve_equivalent(0.8026573319889356, 1.2744181420301273, 0.5)
        assert solved.status == "infeasible"
        assert "eta_b_eq" in solved.reason

    def test_infeasible_no_root(self):
        # correlation too strong for any squeezing level at eta_a = 0.1
        solved = solve_equivalent(0.55, 1.5, 0.1)
        assert solved.status == "infeasible"
        assert "no root" in solved.reason

    def test_never_nan(self):
        for v_diff, v_sum in ((1.0, 1.0), (0.5, 1.1), (1.2, 1.1), (0.9, 1.2)):
            solved = solve_equivalent(v_diff, v_sum, 0.45)
            assert isinstance(solved, EquivalentSolve)
            if solved.state is not None:
                assert np.isfinite(solved.state.gamma_eq)
                assert np.isfinite(solved.state.eta_b_eq)

    def test_solution_continuity(self):
        # small input perturbations move the solution a little, away from
        # the degenerate boundary
        base = solve_equivalent(FIXTURE_V_DIFF, FIXTURE_V_SUM, 0.45)
        for eps in (1e-6, -1e-6):
            moved = solve_equivalent(FIXTURE_V_DIFF + eps, FIXTURE_V_SUM - eps, 0.45)
            assert moved.ok
            assert abs(moved.state.gamma_eq - base.state.gamma_eq) < 1e-3
            assert abs(moved.state.eta_b_eq - base.state.eta_b_eq) < 1e-3
