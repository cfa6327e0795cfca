"""Equivalent-EPR-state inversion.

Given measured sum/difference variances of a (possibly non-Gaussian)
distilled state, find the pure two-mode squeezed state plus two-sided loss
that would show the same statistics.  The recovered channel efficiency of
mode B benchmarks how much loss the distillation effectively undid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import tolerances

GAMMA_EQ_MAX = 5.0
_SCAN_POINTS = 20001


@dataclass(frozen=True)
class EquivalentState:
    """Pure squeezed source (hyperbolic strength gamma_eq) plus two-sided loss."""

    gamma_eq: float
    eta_a_eq: float
    eta_b_eq: float

    def __post_init__(self):
        if self.gamma_eq < 0.0:
            raise ValueError(f"gamma_eq must be >= 0, got {self.gamma_eq}")
        for name in ("eta_a_eq", "eta_b_eq"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {value}")


@dataclass(frozen=True)
class EquivalentSolve:
    """Typed outcome of the inversion; never carries NaN.

    status is "ok" (state set), "degenerate" (unit variances: gamma_eq = 0,
    eta_b_eq indeterminate) or "infeasible" (no physical solution; the
    reason records which constraint failed).  Near-boundary inputs are
    common in practice because small variance changes move the solution a
    lot.

    `branches` lists every physical solution in ascending gamma_eq and
    `state` is the first of them.  The variance pair pins the parameters
    uniquely whenever (v_sum - v_diff)/2 <= 2 eta_a_eq, which covers all
    experimentally relevant inputs; outside that regime a second branch
    with larger squeezing and lower efficiency can reproduce the same
    variances, and both are reported.
    """

    status: str
    state: EquivalentState | None = None
    branches: tuple[EquivalentState, ...] = field(default_factory=tuple)
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def equivalent_variances(eq: EquivalentState) -> tuple[float, float]:
    """Forward map: sum/difference variances of the equivalent state.

    v_diff/sum = 1 + (eta_a + eta_b)/2 (cosh 2g - 1) -/+ sqrt(eta_a eta_b)
    sinh 2g, which reduces to (exp(-2g), exp(+2g)) at unit efficiencies.
    """
    c = np.cosh(2.0 * eq.gamma_eq) - 1.0
    s = np.sinh(2.0 * eq.gamma_eq)
    mean_eta = 0.5 * (eq.eta_a_eq + eq.eta_b_eq)
    root = np.sqrt(eq.eta_a_eq * eq.eta_b_eq)
    return 1.0 + mean_eta * c - root * s, 1.0 + mean_eta * c + root * s


def _sum_residual(gamma, k: float, d: float, eta_a: float):
    """Residual of the variance-sum equation after eliminating eta_b.

    The difference of the two forward equations gives
    eta_b = d^2 / (eta_a sinh^2 2g); substituting into their sum yields
    k = eta_a (cosh 2g - 1) + d^2 / (eta_a (cosh 2g + 1)), regular at g = 0.
    """
    c = np.cosh(2.0 * gamma)
    return k - eta_a * (c - 1.0) - d * d / (eta_a * (c + 1.0))


def solve_equivalent(v_diff: float, v_sum: float, eta_a_eq: float) -> EquivalentSolve:
    """Invert the forward map for (gamma_eq, eta_b_eq) at fixed eta_a_eq.

    Strategy: closed-form elimination of eta_b_eq from the difference of the
    two variance equations, then bracketed root solves in gamma_eq on
    (0, 5].  Brackets come from a dense sign scan, so the solve needs no
    initial guess.  Every returned branch round-trips through
    equivalent_variances to 1e-9.
    """
    if not 0.0 < eta_a_eq <= 1.0:
        return EquivalentSolve("infeasible", reason=f"eta_a_eq {eta_a_eq} outside (0, 1]")
    if (
        abs(v_diff - 1.0) < tolerances.EQUIV_SOLVER_ATOL
        and abs(v_sum - 1.0) < tolerances.EQUIV_SOLVER_ATOL
    ):
        return EquivalentSolve(
            "degenerate", reason="unit variances: gamma_eq = 0, eta_b_eq indeterminate"
        )
    k = v_sum + v_diff - 2.0
    d = 0.5 * (v_sum - v_diff)
    if d <= 0.0:
        return EquivalentSolve(
            "infeasible", reason=f"need v_sum > v_diff, got ({v_diff:.6g}, {v_sum:.6g})"
        )
    if k <= 0.0:
        return EquivalentSolve(
            "infeasible",
            reason=f"need v_sum + v_diff > 2, got {v_sum + v_diff:.6g}",
        )

    grid = np.linspace(1e-9, GAMMA_EQ_MAX, _SCAN_POINTS)
    values = _sum_residual(grid, k, d, eta_a_eq)
    flips = np.nonzero(np.diff(np.sign(values)) != 0)[0]
    if flips.size == 0:
        return EquivalentSolve(
            "infeasible",
            reason=f"variance-sum equation has no root in (0, {GAMMA_EQ_MAX}]",
        )

    branches = []
    rejected_eta = []
    for i in flips:
        gamma_eq = brentq(
            _sum_residual, grid[i], grid[i + 1],
            args=(k, d, eta_a_eq), xtol=1e-15, rtol=8.9e-16,
        )
        eta_b = d * d / (eta_a_eq * np.sinh(2.0 * gamma_eq) ** 2)
        if not 0.0 < eta_b <= 1.0 + tolerances.CROSS_MOMENT_SLACK:
            rejected_eta.append(eta_b)
            continue
        state = EquivalentState(gamma_eq, eta_a_eq, min(eta_b, 1.0))
        back_diff, back_sum = equivalent_variances(state)
        if (
            abs(back_diff - v_diff) <= tolerances.EQUIV_SOLVER_ATOL
            and abs(back_sum - v_sum) <= tolerances.EQUIV_SOLVER_ATOL
        ):
            branches.append(state)
    if not branches:
        if rejected_eta:
            return EquivalentSolve(
                "infeasible",
                reason=f"required eta_b_eq = {rejected_eta[0]:.6g} outside (0, 1]",
            )
        return EquivalentSolve("infeasible", reason="no root survives the round trip")
    branches.sort(key=lambda s: s.gamma_eq)
    return EquivalentSolve("ok", state=branches[0], branches=tuple(branches))
