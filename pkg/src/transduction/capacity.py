"""Quantum-capacity bounds for phase-insensitive channels and kappa optimisation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import AdditiveNoise, Amplifier, Attenuator, dc_channel, tp_channel
from .device import entanglement_cm
from .errors import DomainError

LN2 = math.log(2.0)
KAPPA_MIN = 0.01


def g_entropy(x):
    """Entropy in bits of a thermal state with mean occupation x."""
    if x < 0:
        raise DomainError(f"g is defined for x >= 0, got {x}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return math.inf
    # (x + 1) ln(x + 1) - x ln x, rearranged so large x does not cancel
    return (math.log1p(x) + x * math.log1p(1.0 / x)) / LN2


def h_func(x):
    """Entropy of a thermal state with symplectic eigenvalue x/2, i.e. g((x - 1)/2)."""
    if x < 1:
        if x > 1 - 1e-12:
            return 0.0
        raise DomainError(f"h is defined for x >= 1, got {x}")
    return g_entropy(0.5 * (x - 1.0))


def _clamp(q):
    return max(q, 0.0)


def _lower_raw(ch):
    """Coherent-information bound before clamping at zero (smooth in kappa)."""
    if isinstance(ch, Attenuator):
        if ch.depolarizing:
            return -math.inf
        if ch.eta == 1.0:
            return math.inf
        return math.log2(ch.eta / (1.0 - ch.eta)) - g_entropy(ch.n_th)
    if isinstance(ch, Amplifier):
        return math.log2(ch.gain / (ch.gain - 1.0)) - g_entropy(ch.n_th)
    if isinstance(ch, AdditiveNoise):
        if ch.n_add == 0.0:
            return math.inf
        return -math.log2(ch.n_add) - 1.0 / LN2
    raise TypeError(f"not a phase-insensitive channel: {ch!r}")


def q_lower(ch):
    return _clamp(_lower_raw(ch))


def q_plob(ch):
    if isinstance(ch, Attenuator):
        if ch.depolarizing:
            return 0.0
        if ch.eta == 1.0:
            return math.inf
        eta, N = ch.eta, ch.n_th
        return _clamp(-math.log2(1.0 - eta) - N * math.log2(eta) - g_entropy(N))
    if isinstance(ch, Amplifier):
        G, N = ch.gain, ch.n_th
        return _clamp((N + 1.0) * math.log2(G) - math.log2(G - 1.0) - g_entropy(N))
    if isinstance(ch, AdditiveNoise):
        if ch.n_add == 0.0:
            return math.inf
        return _clamp(-math.log2(ch.n_add) - 1.0 / LN2 + ch.n_add / LN2)
    raise TypeError(f"not a phase-insensitive channel: {ch!r}")


def _additive_de(n_add):
    if n_add == 0.0:
        return math.inf
    return _clamp(-math.log2(n_add) - 1.0 / LN2 + 2.0 * h_func(math.sqrt(1.0 + n_add * n_add)))


def q_de(ch):
    """Degradable-extension upper bound."""
    if isinstance(ch, Attenuator):
        if ch.depolarizing:
            return 0.0
        if ch.eta == 1.0:
            return math.inf
        eta, N = ch.eta, ch.n_th
        q = (math.log2(eta / (1.0 - eta))
             + h_func((1.0 - eta) * (2.0 * N + 1.0) + eta)
             - h_func(eta * (2.0 * N + 1.0) + 1.0 - eta))
        return _clamp(q)
    if isinstance(ch, Amplifier):
        return _additive_de((ch.gain - 1.0) * ch.n_th)
    if isinstance(ch, AdditiveNoise):
        return _additive_de(ch.n_add)
    raise TypeError(f"not a phase-insensitive channel: {ch!r}")


def q_upper(ch):
    return min(q_plob(ch), q_de(ch))


@dataclass(frozen=True)
class CapacityBounds:
    q_lower: float
    q_upper: float
    kappa_star: Optional[float] = None

    @property
    def gap(self):
        return self.q_upper - self.q_lower


def kappa_max(cm):
    """Upper end of the kappa search.

    For weak entanglement the lower bound peaks on the amplifier side at
    kappa of roughly 1.8 / v, far beyond 2, so the range grows like 4 / v.
    """
    k = max(2.0, 2.0 * math.sqrt(cm.w / cm.u))
    if cm.v > 0:
        k = max(k, min(4.0 / cm.v, 1e6))
    return k


def maximize_on_interval(f, lo, hi, points=400, extra=(), refine=3, xtol=1e-8, f_grid=None):
    """Global maximum of a piecewise-smooth scalar function on [lo, hi].

    Scans a log-spaced grid merged with the ``extra`` candidates, then polishes
    the ``refine`` best local maxima of the scan with a bounded scalar search
    on the bracket formed by their grid neighbours. Returns (argmax, max).
    ``f_grid``, if given, evaluates f on a whole array at once for the scan.
    """
    extra = [float(x) for x in extra if lo <= x <= hi]
    grid = np.unique(np.concatenate([np.geomspace(lo, hi, points), extra]))
    if f_grid is None:
        values = np.array([f(x) for x in grid])
    else:
        values = np.asarray(f_grid(grid), dtype=float)
    i_best = int(values.argmax())
    best_x, best_f = float(grid[i_best]), float(values[i_best])
    if best_f == math.inf:
        return best_x, best_f
    # polish only the strongest local maxima of the scan; the extra candidates
    # are on the grid, so a narrow peak next to one of them shows up here
    padded = np.concatenate([[-np.inf], values, [-np.inf]])
    peaks = np.flatnonzero((values >= padded[:-2]) & (values >= padded[2:]))
    seeds = peaks[np.argsort(values[peaks])[::-1][:refine]]
    for i in sorted(seeds.tolist()):
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        res = minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                              options={"xatol": xtol})
        if -res.fun > best_f:
            best_x, best_f = float(res.x), float(-res.fun)
    return best_x, best_f


def _g_array(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    out = (np.log1p(safe) + safe * np.log1p(1.0 / safe)) / LN2
    return np.where(x > 0, out, 0.0)


def tp_lower_array(cm, kappa):
    """Unclamped teleportation lower bound on an array of kappa values (scan helper)."""
    from .channels import KAPPA_ADDITIVE_TOL, tp_noise

    k2 = np.asarray(kappa, dtype=float) ** 2
    den = np.abs(1.0 - k2)
    additive = den < KAPPA_ADDITIVE_TOL
    den = np.where(additive, 1.0, den)
    n_th = np.maximum(0.5 * (tp_noise(cm, np.sqrt(k2)) / den - 1.0), 0.0)
    with np.errstate(divide="ignore"):
        q = np.log2(k2 / den) - _g_array(n_th)
        n_add = 0.5 * (cm.u + cm.w - 2.0 * cm.v)
        q_add = -np.log2(n_add) - 1.0 / LN2 if n_add > 0 else np.inf
    return np.where(additive, q_add, q)


def kappa_candidates(cm):
    """Points the kappa scan must contain besides its log-spaced grid.

    The added noise u k^2 - 2 v k + w dips sharply around k = v/u once u is
    large (C close to 1); the dip is about sqrt(w/u - v^2/u^2) wide, much
    narrower than the scan spacing, so it gets a dense cluster of its own.
    """
    out = [1.0]
    if cm.v > 0:
        for centre, scale in ((cm.v / cm.u, cm.u), (cm.v / (cm.u + 1.0), cm.u + 1.0)):
            width = math.sqrt(max(cm.w / scale - centre * centre, 1.0 / scale))
            out.extend((centre + width * np.linspace(-30.0, 30.0, 121)).tolist())
    return [k for k in out if k > 0]


def optimize_kappa(cm, kmax=None):
    """kappa maximising the teleportation lower bound; kappa = 1 if it is zero everywhere.

    The noise u k^2 - 2 v k + w is smallest at k = v/u, which is where the
    (very narrow, for C close to 1) optimum sits; see ``kappa_candidates``.
    """
    hi = kappa_max(cm) if kmax is None else kmax
    f = lambda k: _lower_raw(tp_channel(cm, k))
    k, q = maximize_on_interval(f, KAPPA_MIN, hi, extra=kappa_candidates(cm),
                                f_grid=lambda ks: tp_lower_array(cm, ks))
    if q <= 0.0:
        return 1.0, 0.0
    return k, q


def dc_bounds(p):
    ch = dc_channel(p)
    return CapacityBounds(q_lower(ch), q_upper(ch))


def tp_bounds(p):
    cm = entanglement_cm(p)
    k, q = optimize_kappa(cm)
    ch = tp_channel(cm, k)
    return CapacityBounds(q, q_upper(ch), k)
