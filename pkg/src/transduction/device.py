"""Electro-optic transducer: device parameters and the microwave-optical resource state.

Two independent routes to the covariance of the entangled output pair:
``entanglement_cm`` evaluates the closed-form constants (u, v, w), and
``langevin_cm`` solves the frequency-domain Heisenberg-Langevin input-output
problem with plain linear algebra. ``to_standard_form`` brings the latter to
the (u, v, w) parametrisation so the two can be compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .gaussian_core import symplectic_eigenvalues


@dataclass(frozen=True)
class DeviceParams:
    """Dimensionless transducer description.

    C is the cooperativity, zeta_o / zeta_m the optical / microwave extraction
    efficiencies and n_in the microwave thermal occupation. Direct conversion
    accepts any C >= 0; entanglement generation additionally needs C < 1.
    """

    C: float
    zeta_o: float = 1.0
    zeta_m: float = 1.0
    n_in: float = 0.0

    def __post_init__(self):
        if not self.C >= 0:
            raise DomainError(f"cooperativity must be >= 0, got {self.C}")
        for name in ("zeta_o", "zeta_m"):
            z = getattr(self, name)
            if not 0.0 <= z <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {z}")
        if not self.n_in >= 0:
            raise DomainError(f"n_in must be >= 0, got {self.n_in}")


@dataclass(frozen=True)
class LangevinParams:
    """Physical rates (rad/s) of the triply-resonant electro-optic device."""

    g_e: float
    gamma_pc: float
    gamma_pi: float
    gamma_ec: float
    gamma_ei: float
    delta_p: float = 0.0
    delta_e: float = 0.0
    n_in: float = 0.0

    def __post_init__(self):
        rates = (self.g_e, self.gamma_pc, self.gamma_pi, self.gamma_ec, self.gamma_ei, self.n_in)
        if min(rates) < 0:
            raise DomainError("rates and thermal occupation must be non-negative")
        if self.gamma_p <= 0 or self.gamma_e <= 0:
            raise DomainError("total optical and microwave loss rates must be positive")
        if self.cooperativity >= 1.0:
            raise DomainError(f"cooperativity {self.cooperativity} >= 1: entanglement generation is unstable")

    @property
    def gamma_p(self):
        return self.gamma_pc + self.gamma_pi

    @property
    def gamma_e(self):
        return self.gamma_ec + self.gamma_ei

    @property
    def cooperativity(self):
        return 4.0 * self.g_e ** 2 / (self.gamma_p * self.gamma_e)

    @classmethod
    def from_device(cls, p, gamma_p=1.0, gamma_e=1.0, delta_p=0.0, delta_e=0.0):
        """Rates reproducing ``p`` for chosen total loss rates."""
        return cls(
            g_e=0.5 * math.sqrt(p.C * gamma_p * gamma_e),
            gamma_pc=p.zeta_o * gamma_p,
            gamma_pi=(1.0 - p.zeta_o) * gamma_p,
            gamma_ec=p.zeta_m * gamma_e,
            gamma_ei=(1.0 - p.zeta_m) * gamma_e,
            delta_p=delta_p,
            delta_e=delta_e,
            n_in=p.n_in,
        )


@dataclass(frozen=True)
class EntanglementCM:
    """Standard form V = 1/2 [[u I, v Z], [v Z, w I]] of the resource state."""

    u: float
    v: float
    w: float

    def __post_init__(self):
        if self.u < 1 - 1e-12 or self.w < 1 - 1e-12 or self.v < 0:
            raise DomainError(f"need u >= 1, w >= 1, v >= 0; got {self}")
        # smallest symplectic eigenvalue >= 1/2  <=>  v^2 <= (min - 1)(max + 1);
        # checked algebraically since u, v, w reach ~1e12 as C -> 1
        lo, hi = min(self.u, self.w), max(self.u, self.w)
        bound = (lo - 1.0) * (hi + 1.0)
        if self.v ** 2 - bound > 1e-9 * max(1.0, bound):
            raise DomainError(f"unphysical resource state {self}")

    def matrix(self):
        Z = np.diag([1.0, -1.0])
        I = np.eye(2)
        return 0.5 * np.block([[self.u * I, self.v * Z], [self.v * Z, self.w * I]])

    def as_array(self):
        return np.array([self.u, self.v, self.w])


def tmsv(mean_photons):
    """Two-mode squeezed vacuum with the given photon number per mode."""
    u = 1.0 + 2.0 * mean_photons
    return EntanglementCM(u, math.sqrt(u * u - 1.0), u)


def entanglement_cm(p):
    C, zo, zm, n = p.C, p.zeta_o, p.zeta_m, p.n_in
    if C >= 1.0:
        raise DomainError(f"cooperativity {C} >= 1: the entangled resource diverges")
    d = (1.0 - C) ** 2
    u = 1.0 + 8.0 * C * zo * (1.0 + n * (1.0 - zm)) / d
    v = 4.0 * math.sqrt(zo * zm * C) * (1.0 + C + 2.0 * n * (1.0 - zm)) / d
    w = 1.0 + 8.0 * zm * (C + n * (1.0 - zm)) / d
    return EntanglementCM(u, v, w)


def device_from_langevin(p):
    if p.gamma_p <= 0 or p.gamma_e <= 0:
        raise DomainError("zero total loss rate")
    return DeviceParams(
        C=p.cooperativity,
        zeta_o=p.gamma_pc / p.gamma_p,
        zeta_m=p.gamma_ec / p.gamma_e,
        n_in=p.n_in,
    )


def langevin_matrices(p):
    """Drift matrix G (4x4) and input coupling K (4x8) of the linearised dynamics."""
    g = p.g_e
    G = np.array([
        [-p.gamma_p / 2 + 1j * p.delta_p, 0, 0, -1j * g],
        [0, -p.gamma_p / 2 - 1j * p.delta_p, 1j * g, 0],
        [0, -1j * g, -p.gamma_e / 2 + 1j * p.delta_e, 0],
        [1j * g, 0, 0, -p.gamma_e / 2 - 1j * p.delta_e],
    ], dtype=complex)
    spc, spi = math.sqrt(p.gamma_pc), math.sqrt(p.gamma_pi)
    sec, sei = math.sqrt(p.gamma_ec), math.sqrt(p.gamma_ei)
    K = np.zeros((4, 8))
    K[0, 0] = K[1, 1] = spc
    K[0, 2] = K[1, 3] = spi
    K[2, 4] = K[3, 5] = sec
    K[2, 6] = K[3, 7] = sei
    return G, K


def langevin_cm(p):
    """Covariance (4x4, order q_o, p_o, q_m, p_m) of the two extracted output fields."""
    G, K = langevin_matrices(p)
    if abs(np.linalg.det(G)) < 1e-14 * max(p.gamma_p, p.gamma_e) ** 4:
        raise DomainError("Langevin drift matrix is singular at these detunings")
    S_a = K.T @ np.linalg.solve(G, K) + np.eye(8)
    Q = np.kron(np.eye(4), np.array([[1, 1], [-1j, 1j]]) / math.sqrt(2.0))
    S_x = Q @ S_a @ np.linalg.inv(Q)
    # vacuum ports carry variance 1/2; the microwave intrinsic bath is thermal
    V_in = np.diag([0.5] * 6 + [p.n_in + 0.5] * 2)
    V_out = S_x @ V_in @ S_x.T
    residue = np.abs(V_out.imag).max()
    if residue > 1e-10 * max(1.0, np.abs(V_out.real).max()):
        raise ConsistencyError(f"output covariance has imaginary residue {residue:.3e}")
    idx = [0, 1, 4, 5]
    return V_out.real[np.ix_(idx, idx)]


def to_standard_form(V, tol=1e-9):
    """Rotate the first mode so the cross-correlations read +v Z, v >= 0."""
    V = np.asarray(V, dtype=float)
    if V.shape != (4, 4):
        raise DomainError("expected a 4x4 two-mode covariance")
    scale = max(1.0, np.abs(V).max())
    A, B = V[:2, :2], V[2:, 2:]
    if (abs(A[0, 0] - A[1, 1]) > tol * scale or abs(A[0, 1]) > tol * scale
            or abs(B[0, 0] - B[1, 1]) > tol * scale or abs(B[0, 1]) > tol * scale):
        raise DomainError("covariance does not have the isotropic single-mode blocks of the expected pattern")
    X = V[:2, 2:]
    for theta in (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi):
        c, s = round(math.cos(theta)), round(math.sin(theta))
        R = np.array([[c, s], [-s, c]], dtype=float)
        Xr = R @ X
        v = Xr[0, 0] - Xr[1, 1]
        resid = max(abs(Xr[0, 1]), abs(Xr[1, 0]), abs(Xr[0, 0] + Xr[1, 1]))
        if v >= -tol * scale and resid <= tol * scale:
            return EntanglementCM(u=A[0, 0] + A[1, 1], v=max(v, 0.0), w=B[0, 0] + B[1, 1])
    raise DomainError("cross-correlations are not a quarter-turn of v Z")
