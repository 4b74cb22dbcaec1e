"""Continuous-variable teleportation evaluated directly on Wigner grids.

The input mode is mixed with the microwave half of the resource on a balanced
beamsplitter, q_- and p_+ are measured, and the optical half is displaced by
-kappa * x~ with x~ = sqrt(2) (q_-, -p_+). Everything here is brute-force
quadrature over the input grid, so it serves as an oracle for the channel
reduction in ``channels.tp_channel``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import tp_noise
from .errors import DomainError
from .gaussian_core import WignerGrid, integrate, trapezoid_weights

TRUNCATION_TOL = 1e-6


@dataclass(frozen=True)
class HomodyneOutcome:
    """Rescaled homodyne record x~ = sqrt(2) (q_-, -p_+)."""

    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise DomainError("homodyne outcome must be finite")

    @classmethod
    def from_measurement(cls, q_minus, p_plus):
        return cls(math.sqrt(2.0) * q_minus, -math.sqrt(2.0) * p_plus)

    def as_array(self):
        return np.array([self.q, self.p])


def _gauss_matrix(rows, cols, weights, centre_scale, shift, inv_width):
    """M[i, k] = exp(-inv_width * (cols_k - centre_scale * rows_i + shift)^2) * weights_k."""
    d = cols[None, :] - centre_scale * rows[:, None] + shift
    return np.exp(-inv_width * d * d) * weights[None, :]


def outcome_pdf(cm, w_in, outcome):
    """Probability density of the homodyne record x~."""
    x = w_in.axis
    wts = trapezoid_weights(x.size, w_in.spacing)
    t = outcome.as_array()
    gq = np.exp(-(x + t[0]) ** 2 / cm.u) * wts
    gp = np.exp(-(x + t[1]) ** 2 / cm.u) * wts
    return float(gq @ w_in.values @ gp) / (math.pi * cm.u)


def conditional_output(cm, w_in, outcome, kappa):
    """Output Wigner function for one homodyne record, on the input lattice."""
    if outcome_pdf(cm, w_in, outcome) < 1e-12:
        raise DomainError(f"improbable outcome {outcome}: density below 1e-12")
    x = w_in.axis
    wts = trapezoid_weights(x.size, w_in.spacing)
    t = outcome.as_array()
    det = cm.u * cm.w - cm.v ** 2
    ratio = cm.v / cm.w
    inv_width = cm.w / det
    shift = (1.0 - ratio * kappa) * t
    Kq = _gauss_matrix(x, x, wts, ratio, shift[0], inv_width)
    Kp = _gauss_matrix(x, x, wts, ratio, shift[1], inv_width)
    inner = Kq @ w_in.values @ Kp.T
    envelope = np.exp(-(x[:, None] + kappa * t[0]) ** 2 / cm.w - (x[None, :] + kappa * t[1]) ** 2 / cm.w)
    raw = envelope * inner
    norm = integrate(raw, w_in.spacing)
    if not norm > 1e-300:
        raise DomainError(f"improbable outcome {outcome}: conditional state vanishes on the grid")
    return w_in.with_values(raw / norm)


def average_output(cm, w_in, kappa):
    """Outcome-averaged output state, from the closed-form average kernel."""
    if not kappa >= 0:
        raise DomainError("kappa must be non-negative")
    a = tp_noise(cm, kappa)
    x = w_in.axis
    wts = trapezoid_weights(x.size, w_in.spacing)
    d = x[:, None] - kappa * x[None, :]
    K = np.exp(-d * d / a) * wts[None, :] / math.sqrt(math.pi * a)
    out = K @ w_in.values @ K.T
    mass = integrate(out, w_in.spacing)
    if abs(mass - 1.0) > TRUNCATION_TOL:
        need = suggested_half_width(w_in, cm, kappa)
        raise DomainError(
            f"grid too narrow for kappa={kappa}: output mass {mass:.8f}; use half_width >= {need:.2f}")
    return w_in.with_values(out / mass)


def suggested_half_width(w_in, cm, kappa):
    """Half width holding the input scaled by kappa plus six kernel standard deviations."""
    mean, cov = w_in.moments()
    reach = np.abs(mean).max() + 6.0 * math.sqrt(max(cov[0, 0], cov[1, 1]))
    return max(kappa, 1.0) * reach + 6.0 * math.sqrt(tp_noise(cm, kappa) / 2.0)


def outcome_lattice(cm, w_in, points=21, n_std=6.0):
    """Square lattice of homodyne records covering the bulk of the outcome density."""
    mean, cov = w_in.moments()
    # x~ is distributed as -(x_in) + N(0, u/2) per quadrature
    std = math.sqrt(max(cov[0, 0], cov[1, 1]) + cm.u / 2.0)
    centre = -mean
    half = n_std * std
    return np.linspace(-half, half, points) + centre[0], np.linspace(-half, half, points) + centre[1]


def assembled_average(cm, w_in, kappa, points=21, workers=None):
    """Average output built by summing P(x~) W(x_B | x~) over a discrete outcome lattice."""
    tq, tp = outcome_lattice(cm, w_in, points)
    hq, hp = tq[1] - tq[0], tp[1] - tp[0]
    wq, wp = trapezoid_weights(points, hq), trapezoid_weights(points, hp)
    jobs = [(i, j) for i in range(points) for j in range(points)]

    def one(ij):
        i, j = ij
        o = HomodyneOutcome(tq[i], tp[j])
        prob = outcome_pdf(cm, w_in, o)
        if prob < 1e-12:
            return None
        return prob * wq[i] * wp[j] * conditional_output(cm, w_in, o, kappa).values

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(one, jobs))
    total = np.zeros_like(w_in.values)
    for part in parts:  # deterministic order
        if part is not None:
            total += part
    return w_in.with_values(total)
