"""State preparation and physical channels for the distillation circuit.

Provides the two-mode squeezed vacuum source, photon loss, the heralded
single-photon ancilla, the mixing beamsplitter, click heralding, and the
composed noiseless-amplification step (quantum catalysis).

Sign conventions, pinned once so every downstream number is reproducible:

* The two-mode squeezed source uses +gamma^n coefficients on |nn>, which
  makes <X_A X_B> positive and the X-difference the squeezed combination.
* The beamsplitter acts as the real rotation [[t, r], [-r, t]] on the
  annihilation operators of (mode_a, mode_b), t = sqrt(1 - r^2).

With these choices the heralded output of the catalysis step approaches the
superposition of |00> and |11> with weights (r, gamma*tau) and a positive
cross-correlation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, cos, radians

import numpy as np
from scipy.linalg import expm

from . import tolerances
from .fock import (
    DensityMatrix,
    HilbertConfig,
    OperatorMatrix,
    annihilation_operator,
    apply_unitary,
    normalize,
    partial_trace,
    pure_state,
    tensor_product,
)


class HeraldingImpossibleError(ValueError):
    """A click was conditioned on but carries (numerically) zero probability."""

    def __init__(self, probability: float):
        self.probability = probability
        super().__init__(f"heralding probability {probability:.3e} is vanishing")


@dataclass(frozen=True)
class ChannelParams:
    """Physical knobs of one distillation run.

    tau          amplitude transmissivity of the loss channel (intensity tau^2)
    r            beamsplitter amplitude reflectivity; the NLA gain is g = 1/r
    eta_ancilla  single-photon preparation efficiency of the ancilla source
    """

    tau: float = 1.0
    r: float = 0.1
    eta_ancilla: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"r must be in (0, 1], got {self.r}")
        if not 0.0 <= self.eta_ancilla <= 1.0:
            raise ValueError(f"eta_ancilla must be in [0, 1], got {self.eta_ancilla}")

    @property
    def gain(self) -> float:
        return 1.0 / self.r


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")


def tmsv_state(gamma: float, config: HilbertConfig) -> DensityMatrix:
    """Two-mode squeezed vacuum with coefficients gamma^n on |nn>, truncated.

    gamma is the coefficient ratio of consecutive |nn> terms (equivalently the
    tanh of the squeezing strength), so <(X_A - X_B)^2> = (1-gamma)/(1+gamma)
    up to cutoff error.
    """
    _check_gamma(gamma)
    if config.mode_count != 2:
        raise ValueError("two-mode squeezed vacuum needs a 2-mode space")
    vec = np.zeros(config.dim, dtype=complex)
    for n in range(config.dim_per_mode):
        vec[config.index_of((n, n))] = gamma**n
    return pure_state(config, vec)


def pump_rotation_degrade(gamma: float, theta_deg: float) -> float:
    """Squeezing reduction from rotating the pump polarization by theta."""
    _check_gamma(gamma)
    if not 0.0 <= theta_deg <= 90.0:
        raise ValueError(f"theta must be in [0, 90] degrees, got {theta_deg}")
    return gamma * cos(radians(theta_deg))


def loss_kraus_operators(n_max: int, tau: float) -> list[np.ndarray]:
    """Single-mode photon-loss Kraus family for amplitude transmissivity tau.

    K_k removes k photons: K_k[n-k, n] = sqrt(C(n,k)) tau^(n-k) (1-tau^2)^(k/2).
    The family is complete on the truncated space (sum K^dag K = 1 exactly).
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    d = n_max + 1
    one_minus_t2 = max(0.0, 1.0 - tau * tau)
    ops = []
    for k in range(d):
        mat = np.zeros((d, d), dtype=complex)
        for n in range(k, d):
            mat[n - k, n] = np.sqrt(comb(n, k)) * tau ** (n - k) * one_minus_t2 ** (k / 2.0)
        ops.append(mat)
    completeness = sum(op.conj().T @ op for op in ops)
    defect = np.max(np.abs(completeness - np.eye(d)))
    if defect > 1e-12:
        raise AssertionError(f"Kraus completeness defect {defect:.3e}")
    return ops


def loss_channel(state: DensityMatrix, mode: int, tau: float) -> DensityMatrix:
    """Photon loss on one mode, trace preserving, vacuum fixed point."""
    cfg = state.config
    cfg.check_mode(mode)
    d = cfg.dim_per_mode
    out = np.zeros_like(state.elements)
    eye = np.eye(d)
    for kraus in loss_kraus_operators(cfg.n_max, tau):
        full = np.array([[1.0 + 0.0j]])
        for m in range(cfg.mode_count):
            full = np.kron(full, kraus if m == mode else eye)
        out += full @ state.elements @ full.conj().T
    return DensityMatrix(cfg, out)


def ancilla_photon(eta: float, config: HilbertConfig) -> DensityMatrix:
    """Heralded ancilla: single photon with probability eta, else vacuum."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    if config.mode_count != 1:
        raise ValueError("ancilla lives in a single mode")
    diag = np.zeros(config.dim)
    diag[0] = 1.0 - eta
    diag[1] = eta
    return DensityMatrix(config, np.diag(diag).astype(complex))


def beamsplitter_unitary(
    config: HilbertConfig, mode_a: int, mode_b: int, r: float
) -> OperatorMatrix:
    """Beamsplitter unitary exp(theta (a^dag b - a b^dag)), sin(theta) = r.

    In the single-photon sector this is [[t, r], [-r, t]] on (|1 0>, |0 1>):
    a photon entering mode_b reaches mode_a with amplitude +r, one entering
    mode_a reaches mode_b with amplitude -r.  Total photon number is
    conserved exactly, including at the cutoff.
    """
    config.check_mode(mode_a)
    config.check_mode(mode_b)
    if mode_a == mode_b:
        raise ValueError("beamsplitter needs two distinct modes")
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"reflectivity must be in [0, 1], got {r}")
    a = annihilation_operator(config, mode_a).elements
    b = annihilation_operator(config, mode_b).elements
    generator = a.conj().T @ b - a @ b.conj().T
    theta = np.arcsin(r)
    return OperatorMatrix(config, expm(theta * generator))


def beamsplitter(
    state: DensityMatrix, mode_a: int, mode_b: int, r: float
) -> DensityMatrix:
    """Mix two modes on a beamsplitter of amplitude reflectivity r."""
    return apply_unitary(state, beamsplitter_unitary(state.config, mode_a, mode_b, r))


def herald_click(state: DensityMatrix, mode: int) -> tuple[DensityMatrix, float]:
    """Condition on a click of a non-number-resolving detector on one mode.

    Applies the click POVM E = 1 - |0><0| (diagonal, so E^(1/2) rho E^(1/2)
    reduces to masking the Fock-diagonal blocks), traces out the detected
    mode, and returns the normalized conditional state together with the
    click probability p = Tr[(1 (x) E) rho].
    """
    cfg = state.config
    cfg.check_mode(mode)
    mask = (cfg.mode_occupations(mode) >= 1).astype(float)
    masked = state.elements * np.outer(mask, mask)
    prob = float(np.real(np.trace(masked)))
    if prob <= tolerances.HERALD_MIN_PROBABILITY:
        raise HeraldingImpossibleError(prob)
    reduced = partial_trace(DensityMatrix(cfg, masked), mode)
    conditional, traced_prob = normalize(reduced)
    return conditional, traced_prob


def nla_catalysis(
    epr: DensityMatrix, params: ChannelParams
) -> tuple[DensityMatrix, float]:
    """One noiseless-amplification step on mode B of a two-mode state.

    The signal mode interferes with a heralded single-photon ancilla on a
    beamsplitter of reflectivity r; a click of the detector watching the
    port into which the ancilla is reflected heralds success.  The surviving
    output port (carrying the transmitted ancilla plus the reflected signal)
    replaces mode B of the returned two-mode state.

    Returns the distilled state and the heralding probability.  For a
    vacuum-signal input the probability is exactly eta_ancilla * r^2.
    """
    if epr.config.mode_count != 2:
        raise ValueError("catalysis expects a 2-mode input state")
    ancilla_cfg = HilbertConfig(epr.config.n_max, 1)
    ancilla = ancilla_photon(params.eta_ancilla, ancilla_cfg)
    joint = tensor_product(epr, ancilla)
    mixed = beamsplitter(joint, 1, 2, params.r)
    # Under the pinned convention the lone-ancilla path reaches the port
    # labeled 1 with amplitude r; that port is the detector.  The port
    # labeled 2 carries the distilled light and becomes the new mode B.
    return herald_click(mixed, 1)
