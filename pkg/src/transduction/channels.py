"""Phase-insensitive Gaussian channels for the two transduction schemes.

Noise units: ``n_th`` is the mean photon number of the thermal environment
mode; ``AdditiveNoise.n_add`` and ``AdditiveReduction.sigma2`` are the variance
added to each quadrature (vacuum variance being 1/2). With these units the
additive-noise limit of a thermal attenuator is n_add = lim (1 - eta) n_th,
and the concatenation rules below map onto sigma2 without rescaling.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConsistencyError, DomainError
from .gaussian_core import GaussianState, WignerGrid, integrate, trapezoid_weights

log = logging.getLogger(__name__)

KAPPA_ADDITIVE_TOL = 1e-6


@dataclass(frozen=True)
class Attenuator:
    """Thermal loss: beamsplitter of transmissivity eta with a thermal mode.

    ``depolarizing`` marks the eta = 0 limit, where the output no longer
    depends on the input at all.
    """

    eta: float
    n_th: float = 0.0
    depolarizing: bool = False

    def __post_init__(self):
        if self.depolarizing:
            if self.eta != 0.0:
                raise DomainError("a depolarizing attenuator has eta = 0")
        elif not 0.0 < self.eta <= 1.0:
            raise DomainError(f"attenuator transmissivity must lie in (0, 1], got {self.eta}")
        if not self.n_th >= 0:
            raise DomainError(f"thermal occupation must be >= 0, got {self.n_th}")


@dataclass(frozen=True)
class Amplifier:
    gain: float
    n_th: float = 0.0

    def __post_init__(self):
        if not self.gain > 1.0:
            raise DomainError(f"amplifier gain must exceed 1, got {self.gain}")
        if not self.n_th >= 0:
            raise DomainError(f"thermal occupation must be >= 0, got {self.n_th}")


@dataclass(frozen=True)
class AdditiveNoise:
    n_add: float

    def __post_init__(self):
        if not self.n_add >= 0:
            raise DomainError(f"additive noise must be >= 0, got {self.n_add}")


PhaseInsensitiveChannel = Union[Attenuator, Amplifier, AdditiveNoise]


@dataclass(frozen=True)
class AdditiveReduction:
    """Additive-noise channel reached by a quantum-limited pre-amplifier or post-loss."""

    pre_gain: float
    post_loss: float
    sigma2: float

    def __post_init__(self):
        if self.pre_gain < 1.0 or not 0.0 < self.post_loss <= 1.0:
            raise DomainError("pre_gain must be >= 1 and post_loss in (0, 1]")
        if self.pre_gain > 1.0 and self.post_loss < 1.0:
            raise DomainError("only one of pre_gain and post_loss may be active")
        if self.sigma2 < 0:
            raise DomainError("sigma2 must be >= 0")


def gain_and_noise(ch):
    """Amplitude gain and added variance per quadrature: x -> gain * x + noise."""
    if isinstance(ch, Attenuator):
        return math.sqrt(ch.eta), (1.0 - ch.eta) * (ch.n_th + 0.5)
    if isinstance(ch, Amplifier):
        return math.sqrt(ch.gain), (ch.gain - 1.0) * (ch.n_th + 0.5)
    if isinstance(ch, AdditiveNoise):
        return 1.0, ch.n_add
    raise TypeError(f"not a phase-insensitive channel: {ch!r}")


def transmissivity(ch):
    """Power gain of the channel (eta, G, or 1 for additive noise)."""
    return gain_and_noise(ch)[0] ** 2


# ---------------------------------------------------------------------------
# Direct conversion


def dc_efficiency(p):
    return p.zeta_m * p.zeta_o * 4.0 * p.C / (1.0 + p.C) ** 2


def dc_channel(p):
    eta = dc_efficiency(p)
    if eta == 0.0:
        return Attenuator(0.0, 0.0, depolarizing=True)
    leaked = (1.0 - p.zeta_m) * p.zeta_o * 4.0 * p.C / (1.0 + p.C) ** 2 * p.n_in
    # eta == 1 forces zeta_m == 1, hence leaked == 0
    n_th = 0.0 if leaked == 0.0 else leaked / (1.0 - eta)
    return Attenuator(min(eta, 1.0), n_th)


def dc_threshold(zeta_o, zeta_m):
    """Smallest cooperativity giving eta_DC > 1/2, or None if it never exceeds 1/2."""
    z = zeta_o * zeta_m
    if not 0.0 <= z <= 1.0:
        raise DomainError("zeta_o * zeta_m must lie in [0, 1]")
    if z <= 0.5:
        return None
    return -1.0 + 4.0 * z - math.sqrt(8.0 * z * (2.0 * z - 1.0))


# ---------------------------------------------------------------------------
# Teleportation


def tp_noise(cm, kappa):
    """u kappa^2 - 2 v kappa + w: total added noise of the averaged teleported state."""
    return cm.u * kappa ** 2 - 2.0 * cm.v * kappa + cm.w


def tp_channel(cm, kappa):
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    kappa = float(kappa)
    k2 = kappa * kappa
    if abs(1.0 - k2) < KAPPA_ADDITIVE_TOL:
        return AdditiveNoise(0.5 * (cm.u + cm.w - 2.0 * cm.v))
    n_th = 0.5 * (tp_noise(cm, kappa) / abs(1.0 - k2) - 1.0)
    # round-off in u k^2 - 2 v k + w grows with the size of the terms
    scale = (cm.u * k2 + 2.0 * cm.v * kappa + cm.w) / abs(1.0 - k2)
    if n_th < -1e-9 - 1e-12 * scale:
        raise ConsistencyError(f"teleportation noise {n_th} < 0: resource state {cm} is unphysical")
    n_th = max(n_th, 0.0)
    if k2 < 1.0:
        return Attenuator(k2, n_th)
    return Amplifier(k2, n_th)


# ---------------------------------------------------------------------------
# Action on states


def apply_to_gaussian(ch, s):
    if s.modes != 1:
        raise DomainError("channels act on single-mode states")
    g, noise = gain_and_noise(ch)
    return GaussianState(g * s.mean, g * g * s.cov + noise * np.eye(2))


def _kernel(axis, weights, gain, var):
    """K[i, k] = density of output y_i given input x_k, times quadrature weight of x_k."""
    d = axis[:, None] - gain * axis[None, :]
    return np.exp(-0.5 * d * d / var) / math.sqrt(2.0 * math.pi * var) * weights[None, :]


def gaussian_channel_map(w, gain, var):
    """Push a Wigner grid through x -> gain * x + N(0, var) per quadrature."""
    x = w.axis
    K = _kernel(x, trapezoid_weights(x.size, w.spacing), gain, var)
    return K @ w.values @ K.T


def apply_to_wigner(ch, w):
    g, var = gain_and_noise(ch)
    if var == 0.0 and g == 1.0:
        return w.with_values(np.array(w.values))
    if isinstance(ch, Attenuator) and ch.depolarizing:
        Q, P = np.meshgrid(w.axis, w.axis, indexing="ij")
        return w.with_values(np.exp(-0.5 * (Q * Q + P * P) / var) / (2.0 * math.pi * var))
    if math.sqrt(var) < w.spacing:
        raise DomainError(
            f"channel kernel width {math.sqrt(var):.3g} is below the grid spacing {w.spacing:.3g}")
    out = gaussian_channel_map(w, g, var)
    factor = integrate(out, w.spacing)
    log.debug("apply_to_wigner renormalisation factor %.12g", factor)
    if abs(factor - 1.0) > 1e-3:
        log.warning("Wigner grid lost %.3g of its weight through %r; grid may be too small",
                    1.0 - factor, ch)
    return w.with_values(out / factor)


def reduce_to_additive(ch):
    if isinstance(ch, Attenuator):
        if ch.depolarizing:
            raise DomainError("a zero-transmissivity channel cannot be pre-amplified")
        return AdditiveReduction(1.0 / ch.eta, 1.0, (1.0 - ch.eta) * (ch.n_th + 1.0))
    if isinstance(ch, Amplifier):
        return AdditiveReduction(1.0, 1.0 / ch.gain, (1.0 - 1.0 / ch.gain) * (ch.n_th + 1.0))
    if isinstance(ch, AdditiveNoise):
        return AdditiveReduction(1.0, 1.0, ch.n_add)
    raise TypeError(f"not a phase-insensitive channel: {ch!r}")
