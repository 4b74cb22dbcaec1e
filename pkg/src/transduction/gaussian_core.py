"""Phase-space primitives: Gaussian states, symplectic maps and Wigner grids.

Conventions used throughout the package: hbar = 1, quadratures
q = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2), ordered (q1, p1, q2, p2, ...),
so the vacuum has quadrature variance 1/2 and a coherent state |alpha> has
mean sqrt(2) * (Re alpha, Im alpha).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .errors import DomainError

DEFAULT_HALF_WIDTH = 8.0
DEFAULT_POINTS = 513


def symplectic_form(n):
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return block_diag(*([omega] * n))


def symplectic_eigenvalues(cov):
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise DomainError(f"covariance must be square with even size, got {cov.shape}")
    scale = max(np.abs(cov).max(), 1.0)
    if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12 * scale):
        raise DomainError("covariance matrix is not symmetric")
    if np.linalg.eigvalsh(cov).min() <= 0.0:
        raise DomainError("covariance matrix is not positive definite")
    n = cov.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ cov))
    ev = np.sort(ev)
    # eigenvalues come in +/- pairs; average each pair
    return list(0.5 * (ev[0::2] + ev[1::2]))


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size):
            raise DomainError(f"mean of length {mean.size} does not match covariance {cov.shape}")
        nu = symplectic_eigenvalues(cov)
        if min(nu) < 0.5 - 1e-9:
            raise DomainError(f"unphysical covariance, symplectic eigenvalues {nu}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def modes(self):
        return self.mean.size // 2


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    S: np.ndarray
    d: np.ndarray = None

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise DomainError(f"symplectic matrix must be square with even size, got {S.shape}")
        d = np.zeros(S.shape[0]) if self.d is None else np.asarray(self.d, dtype=float).reshape(-1)
        if d.size != S.shape[0]:
            raise DomainError("displacement length does not match symplectic matrix")
        omega = symplectic_form(S.shape[0] // 2)
        if np.abs(S @ omega @ S.T - omega).max() > 1e-10:
            raise DomainError("matrix is not symplectic")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)


def apply_symplectic(state, op):
    if op.S.shape[0] != state.mean.size:
        raise DomainError(
            f"operation acts on {op.S.shape[0] // 2} modes, state has {state.modes}")
    return GaussianState(op.S @ state.mean + op.d, op.S @ state.cov @ op.S.T)


def vacuum(n=1):
    return GaussianState(np.zeros(2 * n), 0.5 * np.eye(2 * n))


def thermal(N):
    if N < 0:
        raise DomainError("thermal occupation must be non-negative")
    return GaussianState(np.zeros(2), (N + 0.5) * np.eye(2))


def coherent(alpha):
    alpha = complex(alpha)
    return GaussianState(np.sqrt(2.0) * np.array([alpha.real, alpha.imag]), 0.5 * np.eye(2))


def displacement(alpha, n=1, mode=0):
    """Phase-space displacement by the complex amplitude ``alpha`` on one mode."""
    alpha = complex(alpha)
    d = np.zeros(2 * n)
    d[2 * mode:2 * mode + 2] = np.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return SymplecticOp(np.eye(2 * n), d)


def beamsplitter(transmissivity=0.5):
    t = np.sqrt(transmissivity)
    r = np.sqrt(1.0 - transmissivity)
    I = np.eye(2)
    return SymplecticOp(np.block([[t * I, r * I], [-r * I, t * I]]))


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticOp(np.array([[c, s], [-s, c]]))


# ---------------------------------------------------------------------------
# Wigner grids


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """Single-mode Wigner function sampled on a square lattice.

    ``values[i, j]`` is W(q_i, p_j) with q and p both running over
    ``np.linspace(-half_width, half_width, points_per_axis)``.
    """

    half_width: float
    points_per_axis: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError("half_width must be positive")
        n = int(self.points_per_axis)
        if n < 65 or n % 2 == 0:
            raise DomainError(f"points_per_axis must be odd and >= 65, got {n}")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (n, n):
            raise DomainError(f"values must have shape {(n, n)}, got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "points_per_axis", n)
        object.__setattr__(self, "values", values)

    @property
    def axis(self):
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    @property
    def spacing(self):
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    def same_lattice(self, other):
        return (self.points_per_axis == other.points_per_axis
                and self.half_width == other.half_width)

    def integral(self):
        return integrate(self.values, self.spacing)

    def with_values(self, values):
        return WignerGrid(self.half_width, self.points_per_axis, values)

    def moments(self):
        """Mean vector and covariance matrix of the quasi-distribution."""
        x = self.axis
        Q, P = np.meshgrid(x, x, indexing="ij")
        h = self.spacing
        norm = integrate(self.values, h)
        mean = np.array([integrate(Q * self.values, h), integrate(P * self.values, h)]) / norm
        dq, dp = Q - mean[0], P - mean[1]
        cov = np.array([
            [integrate(dq * dq * self.values, h), integrate(dq * dp * self.values, h)],
            [integrate(dq * dp * self.values, h), integrate(dp * dp * self.values, h)],
        ]) / norm
        return mean, cov


def trapezoid_weights(points, spacing):
    w = np.full(points, spacing)
    w[0] = w[-1] = 0.5 * spacing
    return w


def integrate(values, spacing):
    """2-D trapezoid rule on a square lattice."""
    return np.trapezoid(np.trapezoid(values, dx=spacing, axis=1), dx=spacing)


def _mesh(half_width, points):
    x = np.linspace(-half_width, half_width, points)
    return np.meshgrid(x, x, indexing="ij")


def gaussian_wigner(state, half_width=DEFAULT_HALF_WIDTH, points=DEFAULT_POINTS):
    if state.modes != 1:
        raise DomainError("Wigner grids are single-mode")
    det = np.linalg.det(state.cov)
    if det <= 0.0:
        raise DomainError("singular covariance matrix")
    inv = np.linalg.inv(state.cov)
    Q, P = _mesh(half_width, points)
    dq, dp = Q - state.mean[0], P - state.mean[1]
    quad = inv[0, 0] * dq * dq + 2.0 * inv[0, 1] * dq * dp + inv[1, 1] * dp * dp
    values = np.exp(-0.5 * quad) / (2.0 * np.pi * np.sqrt(det))
    return WignerGrid(half_width, points, values)


def cat_half_width(alpha):
    return max(DEFAULT_HALF_WIDTH, 2.0 * np.sqrt(2.0) * abs(alpha) + 6.0)


def cat_norm2(alpha, parity):
    """Squared normalisation N^2 of N (|alpha> + parity |-alpha>)."""
    overlap = np.exp(-2.0 * abs(complex(alpha)) ** 2)
    denom = 2.0 + 2.0 * parity * overlap
    if denom <= 0.0:
        raise DomainError("odd cat state with alpha = 0 does not exist")
    return 1.0 / denom


def cat_wigner(alpha, parity=+1, half_width=None, points=DEFAULT_POINTS):
    """Wigner function of N (|alpha> + parity |-alpha>), parity = +1 or -1."""
    alpha = complex(alpha)
    if parity not in (1, -1):
        raise DomainError("parity must be +1 or -1")
    min_width = 2.0 * np.sqrt(2.0) * abs(alpha) + 6.0
    if half_width is None:
        half_width = cat_half_width(alpha)
    if half_width < min_width:
        raise DomainError(f"half_width {half_width} too small for alpha={alpha}; need >= {min_width:.3f}")
    n2 = cat_norm2(alpha, parity)
    Q, P = _mesh(half_width, points)
    q0, p0 = np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag
    lobes = np.exp(-(Q - q0) ** 2 - (P - p0) ** 2) + np.exp(-(Q + q0) ** 2 - (P + p0) ** 2)
    fringe = 2.0 * np.exp(-Q * Q - P * P) * np.cos(2.0 * np.sqrt(2.0) * (-Q * alpha.imag + P * alpha.real))
    return WignerGrid(half_width, points, n2 / np.pi * (lobes + parity * fringe))


def wigner_overlap(a, b):
    """Tr(rho sigma) = 2 pi * integral of W_rho W_sigma."""
    if not a.same_lattice(b):
        raise DomainError("Wigner grids live on different lattices")
    return 2.0 * np.pi * integrate(a.values * b.values, a.spacing)
