"""Orientation-dependent fracture toughness and the norms it induces.

The toughness modulation is a k-fold trigonometric profile

    gamma_k(theta) = 1 + tau * cos(k * (theta - omega)),   k in {2, 4},

with anisotropy strength ``tau`` in [0, 1) and principal (strongest)
direction ``omega``.  Rewriting gamma in terms of the crack-normal
components yields homogeneous polynomial densities ``phi^2`` / ``phi^4``
of the phase-field gradient, which are what the finite-element assembly
consumes.  Both densities admit structure-tensor representations

    phi^2(xi) = B xi . xi,                 B  = I - tau * D,
    phi^4(xi) = BB xi(x)xi . xi(x)xi,      BB = I(x)I - tau * DD,

which this module builds explicitly so the two evaluation routes can be
cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AnisotropyParams",
    "StructureTensor2",
    "StructureTensor4",
    "NormDensity",
    "gamma",
    "gamma_normal",
    "induced_norm_density",
    "structure_tensors",
    "weak_anisotropy_check",
    "convexity_margin_scan",
    "norm_bounds",
    "write_polar_csv",
]

#: Tolerance on | |n| - 1 | accepted by :func:`gamma_normal`.  Inputs are
#: analytically constructed unit normals, so this is deliberately tight.
UNIT_NORMAL_TOL = 1.0e-12

#: Number of samples used by the numerical convexity scan.
CONVEXITY_SCAN_SAMPLES = 721


@dataclass(frozen=True)
class AnisotropyParams:
    """K-fold symmetric toughness profile parameters.

    Parameters
    ----------
    k : int
        Fold number, 2 or 4.  The profile is 2*pi/k periodic.
    tau : float
        Anisotropy strength, 0 <= tau < 1 (strict upper bound).
    omega : float
        Principal material direction in radians.  Normalized into
        [0, 2*pi/k) on construction; the profile is invariant under
        this period.
    """

    k: int
    tau: float
    omega: float = 0.0

    def __post_init__(self):
        if self.k not in (2, 4):
            raise ValueError(f"fold number k must be 2 or 4, got {self.k}")
        if not (0.0 <= self.tau < 1.0):
            raise ValueError(f"anisotropy strength tau must lie in [0, 1), got {self.tau}")
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")
        object.__setattr__(self, "omega", float(self.omega) % self.period)

    @property
    def period(self) -> float:
        """Angular period 2*pi/k of the toughness profile."""
        return 2.0 * math.pi / self.k


@dataclass(frozen=True)
class StructureTensor2:
    """Second-order structure tensor B = I - tau*D of the two-fold norm."""

    b: np.ndarray

    def contract(self, xi) -> float | np.ndarray:
        """B xi . xi for a single vector or an (n, 2) batch."""
        xi = np.asarray(xi, dtype=float)
        return np.einsum("...i,ij,...j->...", xi, self.b, xi)


@dataclass(frozen=True)
class StructureTensor4:
    """Fourth-order structure tensor BB = I(x)I - tau*DD of the four-fold norm."""

    bb: np.ndarray

    def contract(self, xi) -> float | np.ndarray:
        """BB xi(x)xi . xi(x)xi for a single vector or an (n, 2) batch."""
        xi = np.asarray(xi, dtype=float)
        return np.einsum("ijkl,...i,...j,...k,...l->...", self.bb, xi, xi, xi, xi)


@dataclass(frozen=True)
class NormDensity:
    """Value and exact xi-derivatives of the induced norm density."""

    value: float | np.ndarray
    grad: np.ndarray
    hess: np.ndarray


def gamma(params: AnisotropyParams, theta):
    """Toughness modulation gamma_k(theta) = 1 + tau*cos(k*(theta - omega)).

    Accepts scalar or array ``theta``; the result lies in
    [1 - tau, 1 + tau] and is 2*pi/k periodic.
    """
    theta = np.asarray(theta, dtype=float)
    out = 1.0 + params.tau * np.cos(params.k * (theta - params.omega))
    return out if out.ndim else float(out)


def gamma_normal(params: AnisotropyParams, n) -> float:
    """Toughness modulation written in terms of the unit crack normal.

    The normal relates to the propagation angle through
    n = (-sin(theta), cos(theta)), so this equals ``gamma(params, theta(n))``.
    Evaluation goes through the expanded polynomial representation, which
    the trigonometric form cross-checks in the test-suite.

    Raises
    ------
    ValueError
        If ``n`` is not a unit vector within ``UNIT_NORMAL_TOL``.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (2,):
        raise ValueError(f"normal must be a 2-vector, got shape {n.shape}")
    norm = math.hypot(n[0], n[1])
    if abs(norm - 1.0) > UNIT_NORMAL_TOL:
        raise ValueError(f"normal must have unit length (|n| = {norm!r})")
    nx, ny = float(n[0]), float(n[1])
    tau, om = params.tau, params.omega
    if params.k == 2:
        return (nx * nx + ny * ny) + tau * (
            math.cos(2 * om) * (ny * ny - nx * nx) - 2.0 * math.sin(2 * om) * nx * ny
        )
    return (nx * nx + ny * ny) ** 2 + tau * (
        math.cos(4 * om) * (ny**4 - 6.0 * nx * nx * ny * ny + nx**4)
        - 4.0 * math.sin(4 * om) * nx * ny * (ny * ny - nx * nx)
    )


def _phi2_terms(xi1, xi2, tau, om):
    c2, s2 = math.cos(2 * om), math.sin(2 * om)
    n2 = xi1 * xi1 + xi2 * xi2
    bracket = c2 * (xi2 * xi2 - xi1 * xi1) - 2.0 * s2 * xi1 * xi2
    value = n2 + tau * bracket
    g1 = 2.0 * xi1 + tau * (-2.0 * c2 * xi1 - 2.0 * s2 * xi2)
    g2 = 2.0 * xi2 + tau * (2.0 * c2 * xi2 - 2.0 * s2 * xi1)
    h11 = 2.0 * (1.0 - tau * c2) + np.zeros_like(xi1)
    h22 = 2.0 * (1.0 + tau * c2) + np.zeros_like(xi1)
    h12 = -2.0 * tau * s2 + np.zeros_like(xi1)
    return value, g1, g2, h11, h12, h22


def _phi4_terms(xi1, xi2, tau, om):
    c4, s4 = math.cos(4 * om), math.sin(4 * om)
    n2 = xi1 * xi1 + xi2 * xi2
    bracket = c4 * (xi2**4 - 6.0 * xi1 * xi1 * xi2 * xi2 + xi1**4) - 4.0 * s4 * xi1 * xi2 * (
        xi2 * xi2 - xi1 * xi1
    )
    value = n2 * n2 + tau * bracket
    g1 = 4.0 * xi1 * n2 + tau * (
        c4 * (4.0 * xi1**3 - 12.0 * xi1 * xi2 * xi2) + 4.0 * s4 * (3.0 * xi1 * xi1 * xi2 - xi2**3)
    )
    g2 = 4.0 * xi2 * n2 + tau * (
        c4 * (4.0 * xi2**3 - 12.0 * xi1 * xi1 * xi2) + 4.0 * s4 * (xi1**3 - 3.0 * xi1 * xi2 * xi2)
    )
    h11 = 4.0 * n2 + 8.0 * xi1 * xi1 + tau * (
        12.0 * c4 * (xi1 * xi1 - xi2 * xi2) + 24.0 * s4 * xi1 * xi2
    )
    h22 = 4.0 * n2 + 8.0 * xi2 * xi2 + tau * (
        12.0 * c4 * (xi2 * xi2 - xi1 * xi1) - 24.0 * s4 * xi1 * xi2
    )
    h12 = 8.0 * xi1 * xi2 + tau * (-24.0 * c4 * xi1 * xi2 + 12.0 * s4 * (xi1 * xi1 - xi2 * xi2))
    return value, g1, g2, h11, h12, h22


def induced_norm_density(params: AnisotropyParams, xi) -> NormDensity:
    """Evaluate phi^k(xi) with exact analytic gradient and Hessian.

    ``xi`` may be a single 2-vector (returns scalar value, (2,) grad,
    (2, 2) hess) or an (n, 2) batch (returns (n,), (n, 2), (n, 2, 2)).
    The density is positively homogeneous of degree k; at xi = 0 the
    value and gradient vanish, and for k = 4 the Hessian is the zero
    matrix (its analytic limit), so callers never divide by |xi|.
    """
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    if single:
        xi = xi[None, :]
    if xi.ndim != 2 or xi.shape[1] != 2:
        raise ValueError(f"xi must have shape (2,) or (n, 2), got {xi.shape}")
    xi1, xi2 = xi[:, 0], xi[:, 1]
    terms = _phi2_terms if params.k == 2 else _phi4_terms
    value, g1, g2, h11, h12, h22 = terms(xi1, xi2, params.tau, params.omega)
    grad = np.stack([g1, g2], axis=-1)
    hess = np.empty((xi.shape[0], 2, 2))
    hess[:, 0, 0] = h11
    hess[:, 0, 1] = h12
    hess[:, 1, 0] = h12
    hess[:, 1, 1] = h22
    if single:
        return NormDensity(float(value[0]), grad[0], hess[0])
    return NormDensity(value, grad, hess)


def structure_tensors(params: AnisotropyParams) -> StructureTensor2 | StructureTensor4:
    """Build the structure tensor of the induced norm density.

    For k = 2: B = I - tau*D with D = [[cos 2w, sin 2w], [sin 2w, -cos 2w]].
    For k = 4: BB = I(x)I - tau*DD with the sixteen DD components listed
    below; BB has minor and major symmetries.  Contracting the returned
    tensor with xi reproduces :func:`induced_norm_density` values.
    """
    tau, om = params.tau, params.omega
    if params.k == 2:
        d = np.array(
            [
                [math.cos(2 * om), math.sin(2 * om)],
                [math.sin(2 * om), -math.cos(2 * om)],
            ]
        )
        b = np.eye(2) - tau * d
        b.setflags(write=False)
        return StructureTensor2(b)

    c4, s4 = math.cos(4 * om), math.sin(4 * om)
    dd = np.zeros((2, 2, 2, 2))
    dd[0, 0, 0, 0] = dd[1, 1, 1, 1] = -c4
    for idx in ((0, 0, 1, 1), (1, 1, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0), (1, 0, 0, 1)):
        dd[idx] = c4
    for idx in ((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0)):
        dd[idx] = -s4
    for idx in ((1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1)):
        dd[idx] = s4
    ii = np.einsum("ij,kl->ijkl", np.eye(2), np.eye(2))
    bb = ii - tau * dd
    bb.setflags(write=False)
    return StructureTensor4(bb)


def weak_anisotropy_check(params: AnisotropyParams) -> tuple[bool, float]:
    """Classify the anisotropy as weak (convex gamma) or strong.

    Convexity of gamma is equivalent to gamma + gamma'' >= 0 everywhere,
    which holds exactly for tau <= 1/3 (k = 2) and tau <= 1/15 (k = 4),
    independent of omega; the thresholds are inclusive.  Returns
    ``(is_weak, tau_threshold)``.  :func:`convexity_margin_scan` provides
    the finite-difference counterpart so both routes can be cross-asserted.
    """
    threshold = 1.0 / (params.k**2 - 1)
    return params.tau <= threshold, threshold


def convexity_margin_scan(params: AnisotropyParams, n_samples: int = CONVEXITY_SCAN_SAMPLES) -> float:
    """min over a theta grid of gamma + gamma'' with gamma'' by central differences.

    Negative margin means strong anisotropy.  Purely numerical on purpose:
    it is the independent check for :func:`weak_anisotropy_check`.
    """
    theta = np.linspace(0.0, 2.0 * math.pi, n_samples)
    h = 1.0e-4
    g0 = gamma(params, theta)
    gpp = (gamma(params, theta + h) - 2.0 * g0 + gamma(params, theta - h)) / (h * h)
    return float(np.min(g0 + gpp))


def norm_bounds(params: AnisotropyParams, xi) -> tuple[float, float]:
    """Density-form norm-equivalence bounds (1 -+ tau)|xi|^k around phi^k.

    Returns ``(lower, upper)`` and verifies lower <= phi^k(xi) <= upper.
    The bounds are attained: e.g. omega = 0 with xi along the weak
    direction touches the lower one.
    """
    xi = np.asarray(xi, dtype=float)
    mag_k = float(np.dot(xi, xi)) ** (params.k / 2)
    lower = (1.0 - params.tau) * mag_k
    upper = (1.0 + params.tau) * mag_k
    value = induced_norm_density(params, xi).value
    slack = 1.0e-12 * max(1.0, mag_k)
    if not (lower - slack <= value <= upper + slack):
        raise AssertionError(
            f"norm-equivalence violated: {lower} <= {value} <= {upper} fails for xi={xi}"
        )
    return lower, upper


def write_polar_csv(params: AnisotropyParams, stream, n_samples: int = 721) -> None:
    """Emit ``theta,gamma,inv_gamma`` rows over [0, 2*pi] for polar plots."""
    stream.write("theta,gamma,inv_gamma\n")
    for j in range(n_samples):
        theta = 2.0 * math.pi * j / (n_samples - 1)
        g = gamma(params, theta)
        stream.write(f"{theta:.17g},{g:.17g},{1.0 / g:.17g}\n")
