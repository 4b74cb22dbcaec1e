"""State-transfer figures of merit for both transduction schemes.

Fidelities are Tr(rho_in rho_out) for pure inputs. Every closed form here is
written in terms of two numbers describing the averaged channel, the added
noise ``a`` and the amplitude gain ``b``, so the same cat/coherent formula
serves direct conversion and teleportation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .capacity import KAPPA_MIN, kappa_candidates, kappa_max, maximize_on_interval
from .channels import dc_channel, tp_noise
from .errors import ConsistencyError, DomainError
from .gaussian_core import cat_norm2


@dataclass(frozen=True)
class SchemeNoiseParams:
    """Added noise ``a`` and amplitude gain ``b`` of an averaged channel.

    Any physical channel has a >= |1 - b^2|; the fidelity formulas assume it.
    """

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise DomainError(f"noise parameters must be non-negative, got {self}")

    @classmethod
    def dc(cls, p):
        ch = dc_channel(p)
        return cls((1.0 + 2.0 * ch.n_th) * (1.0 - ch.eta), math.sqrt(ch.eta))

    @classmethod
    def tp(cls, cm, kappa):
        return cls(tp_noise(cm, kappa), kappa)

    @property
    def denominator(self):
        return 1.0 + self.a + self.b ** 2


@dataclass(frozen=True)
class GkpSpec:
    sigma_gkp: float

    def __post_init__(self):
        if self.sigma_gkp < 0:
            raise DomainError("sigma_gkp must be >= 0")
        if self.sigma_gkp >= math.sqrt(math.pi) / 2:
            warnings.warn(f"sigma_gkp={self.sigma_gkp} is outside the leading-order regime",
                          stacklevel=2)


# ---------------------------------------------------------------------------
# Coherent and cat states


def _coherent_ab(a, b, alpha):
    d = 1.0 + a + b * b
    return 2.0 / d * np.exp(-2.0 * abs(alpha) ** 2 * (1.0 - b) ** 2 / d)


def _cat_ab(a, b, alpha, parity):
    x = abs(alpha) ** 2
    d = 1.0 + a + b * b
    n4 = cat_norm2(alpha, parity) ** 2
    terms = (
        np.exp(-2 * x * (1 - b) ** 2 / d)
        + np.exp(-2 * x * (1 + b) ** 2 / d)
        + parity * 2 * np.exp(-2 * x * (2 + a) / d)
        + parity * 2 * np.exp(-2 * x * (a + 2 * b * b) / d)
        + np.exp(-2 * x * (2 * a + (1 + b) ** 2) / d)
        + np.exp(-2 * x * (2 * a + (1 - b) ** 2) / d)
    )
    return 4.0 * n4 / d * terms


def fidelity_coherent(noise, alpha):
    return float(_coherent_ab(noise.a, noise.b, alpha))


def fidelity_coherent_dc(p, alpha):
    ch = dc_channel(p)
    d = 1.0 + ch.n_th * (1.0 - ch.eta)
    return math.exp(-abs(alpha) ** 2 * (1.0 - math.sqrt(ch.eta)) ** 2 / d) / d


def fidelity_coherent_tp(cm, kappa, alpha):
    A = (cm.u + 1.0) * kappa ** 2 - 2.0 * cm.v * kappa + cm.w + 1.0
    if A <= 0:
        raise ConsistencyError(f"A = {A} <= 0 for resource {cm}")
    return 2.0 / A * math.exp(-2.0 * abs(alpha) ** 2 * (kappa - 1.0) ** 2 / A)


def fidelity_cat(noise, alpha, parity=+1):
    return float(_cat_ab(noise.a, noise.b, alpha, parity))


def best_kappa(cm, fidelity_of_noise, f_grid=None):
    """kappa maximising ``fidelity_of_noise(SchemeNoiseParams.tp(cm, kappa))``: (kappa, F)."""
    return maximize_on_interval(lambda k: fidelity_of_noise(SchemeNoiseParams.tp(cm, k)),
                                KAPPA_MIN, kappa_max(cm), points=200, extra=kappa_candidates(cm),
                                f_grid=f_grid)


def tp_fidelity_coherent(cm, alpha):
    """Teleportation coherent-state fidelity at the best kappa: (kappa, F)."""
    return best_kappa(cm, lambda n: fidelity_coherent(n, alpha),
                      lambda k: _coherent_ab(tp_noise(cm, k), k, alpha))


def tp_fidelity_cat(cm, alpha, parity=+1):
    return best_kappa(cm, lambda n: fidelity_cat(n, alpha, parity),
                      lambda k: _cat_ab(tp_noise(cm, k), k, alpha, parity))


# ---------------------------------------------------------------------------
# Additive-noise reduction and GKP


def additive_sigma_dc(p):
    if p.C == 0 or p.zeta_o * p.zeta_m == 0:
        raise DomainError("direct conversion with zero efficiency needs infinite pre-gain")
    s = 4.0 * p.C / (1.0 + p.C) ** 2
    return 1.0 + s * (p.n_in * (1.0 - p.zeta_m) - p.zeta_m) * p.zeta_o


def _sigma_tp_attenuating(cm, k):
    return 0.5 * ((cm.u - 1.0) * k * k - 2.0 * cm.v * k + 1.0 + cm.w)


def _sigma_tp_amplifying(cm, k):
    return 0.5 * ((cm.w - 1.0) / (k * k) - 2.0 * cm.v / k + 1.0 + cm.u)


def additive_sigma_tp(cm):
    """Smallest additive-noise variance reachable by teleportation: (sigma2, kappa)."""
    candidates = [(_sigma_tp_attenuating(cm, 1.0), 1.0)]
    if cm.u > 1.0:
        k = min(1.0, cm.v / (cm.u - 1.0))
        if k > 0:
            candidates.append((_sigma_tp_attenuating(cm, k), k))
    if cm.v > 0:
        k = max(1.0, (cm.w - 1.0) / cm.v)
        candidates.append((_sigma_tp_amplifying(cm, k), k))
    return min(candidates)


def additive_sigma_tp_device(p):
    """``additive_sigma_tp(entanglement_cm(p))`` in a cancellation-free form.

    Near C = 1 the constants u, v, w grow like (1 - C)^-2 while the variances
    stay O(1), so the differences above lose all precision. Written in the
    device parameters each candidate reduces to a short product.
    """
    if p.C >= 1.0:
        raise DomainError("teleportation needs C < 1")
    C = p.C
    m = p.n_in * (1.0 - p.zeta_m)
    X, Y, Z = 1.0 + m, C + m, 1.0 + C + 2.0 * m
    s, a, b = math.sqrt(C), math.sqrt(p.zeta_o), math.sqrt(p.zeta_m)
    d = (1.0 - C) ** 2
    candidates = [(1.0 + 4.0 * (s * a - b) * (X * a * s - Y * b) / d, 1.0)]
    if s * a > 0:
        k = b * Z / (2.0 * s * a * X)  # v / (u - 1)
        if k < 1.0:
            candidates.append((1.0 - p.zeta_m / X, k))
        if Y > 0:
            k = 2.0 * b * Y / (a * s * Z)  # (w - 1) / v
            if k > 1.0:
                candidates.append((1.0 - C * p.zeta_o / Y, k))
    return min(candidates)


def gkp_success(sigma2, spec):
    if sigma2 < 0:
        raise DomainError("sigma2 must be >= 0")
    total = sigma2 + 2.0 * spec.sigma_gkp ** 2
    if total == 0:
        return 1.0
    return math.erf(math.sqrt(math.pi) / (2.0 * math.sqrt(2.0 * total))) ** 2


def squeezing_db(spec):
    s2 = spec.sigma_gkp ** 2
    if not 0 < s2 < 1:
        raise DomainError("squeezing in dB needs 0 < sigma_gkp^2 < 1")
    delta = math.log((1.0 + s2) / (1.0 - s2))
    return 10.0 * math.log10(1.0 / delta)
