"""Independent cross-checks of the closed forms.

Every check compares two routes to the same number and reports the largest
discrepancy seen, so a failure says by how much, not just that it failed.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import List

import numpy as np

from .capacity import dc_bounds, tp_bounds
from .channels import apply_to_wigner, dc_channel, dc_threshold, tp_channel
from .device import (DeviceParams, LangevinParams, entanglement_cm, langevin_cm,
                     to_standard_form, tmsv)
from .gaussian_core import cat_wigner, coherent, gaussian_wigner, vacuum, wigner_overlap
from .teleport_sim import assembled_average, average_output
from .transfer import (GkpSpec, SchemeNoiseParams, additive_sigma_dc, additive_sigma_tp_device,
                       fidelity_cat, fidelity_coherent, gkp_success)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<44s} max error {self.max_error:.3e}"
                f"  (tol {self.tolerance:.1e}, {self.seconds:.2f} s)")


def _timed(name, tol, fn):
    t0 = time.perf_counter()
    err = float(fn())
    return CheckResult(name, bool(err <= tol), err, tol, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Grids


def device_grid(full=False):
    """(C, zeta_o, zeta_m, n_in) tuples for the device and bound checks."""
    cs = np.arange(1, 20) * 0.05 if full else np.linspace(0.05, 0.95, 10)
    return list(itertools.product(cs, (0.5, 0.9, 1.0), (0.5, 0.95, 1.0), (0.0, 2.0)))


def resource_states():
    return [tmsv(1.0),
            entanglement_cm(DeviceParams(0.1, 0.9, 0.95, 2.0)),
            entanglement_cm(DeviceParams(0.5, 1.0, 1.0, 0.0))]


KAPPAS = (0.5, 0.8, 1.0, 1.2, 1.5)
QUADRATURE_HALF_WIDTH = 14.0


def quadrature_inputs(points):
    hw = QUADRATURE_HALF_WIDTH
    return [("vacuum", gaussian_wigner(vacuum(1), hw, points)),
            ("coherent", gaussian_wigner(coherent(2.0), hw, points)),
            ("cat+", cat_wigner(2.0, +1, hw, points))]


# ---------------------------------------------------------------------------
# Individual checks


def device_oracle_error(grid):
    """Largest componentwise gap between closed-form and Langevin (u, v, w)."""
    worst = 0.0
    for C, zo, zm, n in grid:
        p = DeviceParams(C, zo, zm, n)
        closed = entanglement_cm(p).as_array()
        numeric = to_standard_form(langevin_cm(LangevinParams.from_device(p))).as_array()
        worst = max(worst, float(np.abs(closed - numeric).max()))
    return worst


def channel_reduction_error(points, kappas=KAPPAS):
    """L-infinity gap between outcome-averaged teleportation and the tp channel."""
    worst = 0.0
    for cm in resource_states():
        for kappa in kappas:
            for _, w in quadrature_inputs(points):
                a = average_output(cm, w, kappa).values
                b = apply_to_wigner(tp_channel(cm, kappa), w).values
                worst = max(worst, float(np.abs(a - b).max()))
    return worst


def assembled_error(points=129, lattice=41):
    """Gap between the sum over homodyne records and the closed-form average."""
    cm = entanglement_cm(DeviceParams(0.3, 0.9, 0.95, 1.0))
    w = gaussian_wigner(coherent(1.0), 10.0, points)
    worst = 0.0
    for kappa in (0.7, 1.0, 1.3):
        ref = average_output(cm, w, kappa).values
        got = assembled_average(cm, w, kappa, points=lattice).values
        worst = max(worst, float(np.abs(ref - got).max()))
    return worst


def fidelity_quadrature_error(points, kappas=KAPPAS):
    """Closed-form coherent/cat fidelities against Wigner overlaps on the grid."""
    worst = 0.0
    closed = {"vacuum": lambda n: fidelity_coherent(n, 0.0),
              "coherent": lambda n: fidelity_coherent(n, 2.0),
              "cat+": lambda n: fidelity_cat(n, 2.0, +1)}
    inputs = quadrature_inputs(points)
    for cm in resource_states():
        for kappa in kappas:
            noise = SchemeNoiseParams.tp(cm, kappa)
            for name, w in inputs:
                out = average_output(cm, w, kappa)
                worst = max(worst, abs(wigner_overlap(w, out) - closed[name](noise)))
    for C in (0.1, 0.5, 0.9):
        p = DeviceParams(C, 0.9, 0.95, 2.0)
        noise = SchemeNoiseParams.dc(p)
        for name, w in inputs:
            out = apply_to_wigner(dc_channel(p), w)
            worst = max(worst, abs(wigner_overlap(w, out) - closed[name](noise)))
    return worst


def bound_ordering_violation(grid):
    """Largest q_lower - q_upper over both schemes (should be <= 0)."""
    worst = -math.inf
    for C, zo, zm, n in grid:
        p = DeviceParams(C, zo, zm, n)
        for b in (dc_bounds(p), tp_bounds(p)):
            worst = max(worst, b.q_lower - b.q_upper)
    return max(worst, 0.0)


def additive_dominance_violation(zetas=np.linspace(0.5, 1.0, 11)):
    """Largest sigma2_TP - sigma2_DC near C = 1 and at C = 0.1 (should be <= 0)."""
    worst = -math.inf
    for C in (1.0 - 1e-6, 0.1):
        for zo, zm, n in itertools.product(zetas, zetas, (0.0, 2.0)):
            p = DeviceParams(C, zo, zm, n)
            worst = max(worst, additive_sigma_tp_device(p)[0] - additive_sigma_dc(p))
    return max(worst, 0.0)


def threshold_errors():
    a = abs(dc_threshold(1.0, 1.0) - (3.0 - 2.0 * math.sqrt(2.0)))
    b = abs(dc_threshold(0.9, 0.95) - 0.216)
    return a, b


def gkp_erf_error():
    # sigma2 + 2 sigma_gkp^2 = pi/8 puts the Erf argument at exactly 1
    got = gkp_success(math.pi / 8.0, GkpSpec(0.0))
    return abs(got - 0.842700792949715 ** 2)


# ---------------------------------------------------------------------------


def run_checks(grid="coarse"):
    """Run the oracle suite; ``grid`` is "coarse" (quick) or "full"."""
    if grid not in ("coarse", "full"):
        raise ValueError(f"grid must be 'coarse' or 'full', got {grid!r}")
    full = grid == "full"
    points = 513 if full else 257
    kappas = KAPPAS if full else (0.5, 1.0, 1.5)
    dgrid = device_grid(full)
    checks: List[CheckResult] = [
        _timed("threshold dc_threshold(1, 1) = 3 - 2 sqrt 2", 1e-12, lambda: threshold_errors()[0]),
        _timed("threshold dc_threshold(0.9, 0.95) = 0.216", 1e-3, lambda: threshold_errors()[1]),
        _timed("device: closed form vs Langevin", 1e-9, lambda: device_oracle_error(dgrid)),
        _timed("teleport: averaged output vs tp_channel", 1e-4,
               lambda: channel_reduction_error(points, kappas)),
        _timed("teleport: homodyne-record sum vs average", 1e-6,
               lambda: assembled_error(lattice=41 if full else 21)),
        _timed("fidelity: closed form vs quadrature", 1e-4,
               lambda: fidelity_quadrature_error(points, kappas)),
        _timed("capacity: q_lower <= q_upper", 1e-12, lambda: bound_ordering_violation(dgrid)),
        _timed("additive noise: sigma2_TP <= sigma2_DC", 1e-9, additive_dominance_violation),
        _timed("gkp: P_s at Sigma = pi/8 equals Erf(1)^2", 1e-12, gkp_erf_error),
    ]
    return checks
