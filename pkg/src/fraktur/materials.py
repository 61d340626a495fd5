"""Regularization families, degradation functions and 1D closed forms.

Four surface-energy regularizations are supported:

==========  ============================  =======================================
family      degradation (default)         surface density / G0
==========  ============================  =======================================
AT1         (1 - a)^2                     (3/8) * (a/l + l |grad a|^2)
AT2         (1 - a)^2                     (1/2) * (a^2/l + l |grad a|^2)
Foc2        (1 - a)^2                     (1/2) * (a^2/l + l phi^2(grad a))
Foc4        (1 - a^4)^2                   (1/4) * (3 a^4/(b_w l) + l^3 phi^4(grad a))
==========  ============================  =======================================

with b_w = (2/p)^(p/(p-1)) (= 2^(-4/3) for p = 4).  Foc2 with the Euclidean
norm coincides with AT2.  The quartic family needs a degradation function
whose derivative vanishes cubically at 0; the polynomial family

    g_m(a) = 1 - (1 + 4/m) a^4 + (4/m) a^(m+4)

provides those, with m = 4 the unique member (in 1..8) giving a monotone
homogeneous stress response; g_4 = (1 - a^4)^2.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .anisotropy import AnisotropyParams

__all__ = [
    "ModelFamily",
    "DegradationKind",
    "DegradationSpec",
    "ModelSpec",
    "SlopeScan",
    "degradation",
    "derive_degradation",
    "dissipation",
    "b_w",
    "homogeneous_response",
    "alpha_critical",
    "stress_monotonicity_scan",
    "optimal_profile",
    "profile_surface_energy",
]


class ModelFamily(enum.Enum):
    AT1 = "AT1"
    AT2 = "AT2"
    FOC2 = "Foc2"
    FOC4 = "Foc4"


class DegradationKind(enum.Enum):
    QUADRATIC = "quadratic"
    POLY = "poly"
    QUARTIC_SQUARED = "quartic_squared"


@dataclass(frozen=True)
class DegradationSpec:
    """Choice of stiffness-degradation function g(alpha).

    All kinds satisfy g(0) = 1, g(1) = 0, g'(1) = 0 and g' < 0 on (0, 1).
    ``QUARTIC_SQUARED`` is the m = 4 member of the polynomial family with
    identical coefficients, kept as its own kind because it is the default
    pairing for the quartic regularization.
    """

    kind: DegradationKind
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind is DegradationKind.POLY:
            if self.m is None or self.m < 1:
                raise ValueError("poly degradation requires integer m >= 1")
        elif self.m is not None:
            raise ValueError(f"m is only meaningful for the poly kind, got kind={self.kind}")

    @classmethod
    def quadratic(cls) -> "DegradationSpec":
        return cls(DegradationKind.QUADRATIC)

    @classmethod
    def poly(cls, m: int) -> "DegradationSpec":
        return cls(DegradationKind.POLY, m)

    @classmethod
    def quartic_squared(cls) -> "DegradationSpec":
        return cls(DegradationKind.QUARTIC_SQUARED)


def b_w(p: float) -> float:
    """Normalization constant (2 * int_0^1 t^(p/q) dt)^q with q = p/(p-1)."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    return (2.0 / p) ** (p / (p - 1.0))


#: Profile normalization constants of the linear / quadratic dissipation.
C_W_AT1 = 8.0 / 3.0
C_W_AT2 = 2.0


def derive_degradation(m: int) -> np.ndarray:
    """Coefficients (index = power) of g_m(a) = 1 - (1 + 4/m) a^4 + (4/m) a^(m+4).

    The family solves -a^3 / g'(a) = s / (1 - a^m) with g(0) = 1, g(1) = 0;
    the constant comes out as s = m / (4 (m + 4)).
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"m must be an integer >= 1, got {m!r}")
    coeffs = np.zeros(m + 5)
    coeffs[0] = 1.0
    coeffs[4] += -(1.0 + 4.0 / m)
    coeffs[m + 4] += 4.0 / m
    return coeffs


def _poly_eval(coeffs: np.ndarray, alpha):
    powers = np.nonzero(coeffs)[0]
    g = np.zeros_like(alpha)
    dg = np.zeros_like(alpha)
    ddg = np.zeros_like(alpha)
    for p in powers:
        c = coeffs[p]
        g += c * alpha**p
        if p >= 1:
            dg += c * p * alpha ** (p - 1)
        if p >= 2:
            ddg += c * p * (p - 1) * alpha ** (p - 2)
    return g, dg, ddg


def degradation(spec: DegradationSpec, alpha, clamp: bool = True):
    """Evaluate (g, g', g'') at ``alpha`` (scalar or array).

    With ``clamp=True`` (the contract default) values outside [0, 1] are
    clamped before evaluation and flagged with a warning when they stray
    beyond round-off.  The assembly passes ``clamp=False``: the polynomials
    are globally defined and the quartic family transiently sees alpha
    marginally above 1 during trust-region iterations.
    """
    alpha = np.asarray(alpha, dtype=float)
    scalar = alpha.ndim == 0
    alpha = np.atleast_1d(alpha)
    if clamp:
        if np.any(alpha < -1.0e-9) or np.any(alpha > 1.0 + 1.0e-9):
            warnings.warn(
                f"degradation evaluated outside [0, 1] (range [{alpha.min()}, {alpha.max()}]); clamping",
                stacklevel=2,
            )
        alpha = np.clip(alpha, 0.0, 1.0)
    if spec.kind is DegradationKind.QUADRATIC:
        g = (1.0 - alpha) ** 2
        dg = -2.0 * (1.0 - alpha)
        ddg = np.full_like(alpha, 2.0)
    else:
        m = 4 if spec.kind is DegradationKind.QUARTIC_SQUARED else spec.m
        g, dg, ddg = _poly_eval(derive_degradation(m), alpha)
    if scalar:
        return float(g[0]), float(dg[0]), float(ddg[0])
    return g, dg, ddg


def dissipation(family: ModelFamily, alpha):
    """Local dissipation w(alpha) with first and second derivatives.

    AT1 uses w = alpha, the others w = alpha^2 / alpha^4 as dictated by the
    exponent of the regularization (the b_w factor is kept in the energy
    prefactor, not here).
    """
    alpha = np.asarray(alpha, dtype=float)
    if family is ModelFamily.AT1:
        return alpha, np.ones_like(alpha), np.zeros_like(alpha)
    if family in (ModelFamily.AT2, ModelFamily.FOC2):
        return alpha**2, 2.0 * alpha, np.full_like(alpha, 2.0)
    return alpha**4, 4.0 * alpha**3, 12.0 * alpha**2


@dataclass(frozen=True)
class ModelSpec:
    """A regularization family with its material constants.

    Parameters
    ----------
    family : ModelFamily
    anisotropy : AnisotropyParams, optional
        Absent means isotropic.  Only the Focardi families accept it, and
        the fold number must match the family exponent.
    degradation : DegradationSpec
        AT1/AT2/Foc2 are defined with the quadratic function; Foc4 accepts
        any kind (quadratic reproduces the unsuitable baseline, the
        quartic-squared default the corrected model).
    ell : float
        Regularization length > 0.
    g0 : float
        Base toughness G0 > 0.
    """

    family: ModelFamily
    ell: float
    g0: float = 1.0
    anisotropy: Optional[AnisotropyParams] = None
    degradation: DegradationSpec = DegradationSpec.quadratic()

    def __post_init__(self):
        if self.ell <= 0:
            raise ValueError("regularization length ell must be positive")
        if self.g0 <= 0:
            raise ValueError("base toughness g0 must be positive")
        if self.family in (ModelFamily.AT1, ModelFamily.AT2):
            if self.anisotropy is not None:
                raise ValueError(f"{self.family.value} is an isotropic model; anisotropy must be absent")
        elif self.anisotropy is not None and self.anisotropy.k != self.p:
            raise ValueError(
                f"{self.family.value} requires k = {self.p} anisotropy, got k = {self.anisotropy.k}"
            )
        if self.family is not ModelFamily.FOC4 and self.degradation.kind is not DegradationKind.QUADRATIC:
            raise ValueError(f"{self.family.value} is defined with the quadratic degradation function")

    @property
    def p(self) -> int:
        """Exponent of the gradient term (2 except for the quartic family)."""
        return 4 if self.family is ModelFamily.FOC4 else 2

    @property
    def c_w(self) -> float:
        if self.family is ModelFamily.AT1:
            return C_W_AT1
        if self.family is ModelFamily.AT2:
            return C_W_AT2
        raise AttributeError("c_w is an Ambrosio-Tortorelli constant")

    @property
    def b_w(self) -> float:
        if self.family in (ModelFamily.AT1, ModelFamily.AT2):
            raise AttributeError("b_w is a Focardi constant")
        return b_w(self.p)

    # Convenience constructors with the canonical degradation pairings.
    @classmethod
    def at1(cls, ell: float, g0: float = 1.0) -> "ModelSpec":
        return cls(ModelFamily.AT1, ell, g0)

    @classmethod
    def at2(cls, ell: float, g0: float = 1.0) -> "ModelSpec":
        return cls(ModelFamily.AT2, ell, g0)

    @classmethod
    def foc2(cls, ell: float, g0: float = 1.0, anisotropy: Optional[AnisotropyParams] = None) -> "ModelSpec":
        return cls(ModelFamily.FOC2, ell, g0, anisotropy)

    @classmethod
    def foc4(
        cls,
        ell: float,
        g0: float = 1.0,
        anisotropy: Optional[AnisotropyParams] = None,
        degradation: Optional[DegradationSpec] = None,
    ) -> "ModelSpec":
        return cls(ModelFamily.FOC4, ell, g0, anisotropy, degradation or DegradationSpec.quartic_squared())


#: alpha is kept this far away from the 0/0 ends of the quartic response.
_ALPHA_EPS = 1.0e-12


def homogeneous_response(model: ModelSpec, alpha):
    """Rescaled strain/stress (eps_bar, sigma_bar) of the homogeneous 1D bar.

    Closed forms: AT1 gives eps_bar = sqrt(3/(8(1-a))), AT2 (and the
    isotropic-equivalent Foc2) eps_bar = sqrt(a/(1-a)), and the quartic
    family eps_bar = sqrt(-6 a^3 / (b_w g'(a))); in all cases
    sigma_bar = g(a) * eps_bar.  alpha is clamped into
    [1e-12, 1 - 1e-12] inside the quartic branch, which reproduces the
    analytic alpha -> 0 limit without a 0/0.

    Raises
    ------
    ValueError
        If any alpha >= 1 (the response diverges there).
    """
    alpha = np.asarray(alpha, dtype=float)
    scalar = alpha.ndim == 0
    alpha = np.atleast_1d(alpha)
    if np.any(alpha >= 1.0) or np.any(alpha < 0.0):
        raise ValueError("homogeneous response requires alpha in [0, 1)")
    if model.family is ModelFamily.AT1:
        eps = np.sqrt(3.0 / (8.0 * (1.0 - alpha)))
        sig = math.sqrt(3.0 / 8.0) * (1.0 - alpha) ** 1.5
    elif model.family in (ModelFamily.AT2, ModelFamily.FOC2):
        eps = np.sqrt(alpha / (1.0 - alpha))
        sig = np.sqrt(alpha) * (1.0 - alpha) ** 1.5
    else:
        a = np.clip(alpha, _ALPHA_EPS, 1.0 - _ALPHA_EPS)
        g, dg, _ = degradation(model.degradation, a)
        eps = np.sqrt(-6.0 * a**3 / (model.b_w * dg))
        sig = g * eps
    if scalar:
        return float(eps[0]), float(sig[0])
    return eps, sig


def alpha_critical(model: ModelSpec, tol: float = 1.0e-8) -> float:
    """Location of the peak of sigma_bar(alpha) by golden-section search.

    sigma_bar is unimodal for every implemented spec; for AT1 the peak sits
    at the left end (elastic stage).
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 0.0, 1.0 - 1.0e-9

    def neg_sigma(a):
        return -homogeneous_response(model, a)[1]

    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = neg_sigma(c), neg_sigma(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = neg_sigma(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = neg_sigma(d)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SlopeScan:
    """Extrema of d(sigma_bar)/d(alpha) over [0, 1] for one poly member."""

    min_slope: float
    max_slope: float


def stress_monotonicity_scan(m: int, n_grid: int = 10_000) -> SlopeScan:
    """Scan the quartic-family stress slope for the g_m degradation.

    Central differences on an ``n_grid``-point alpha grid (one-sided at the
    ends).  m = 4 is the only member of 1..8 with max_slope <= 0 up to
    round-off; smaller m produce a genuinely rising branch.
    """
    if not 1 <= m <= 8:
        raise ValueError("m must lie in [1, 8]")
    model = ModelSpec.foc4(ell=1.0, degradation=DegradationSpec.poly(m))
    alpha = np.linspace(0.0, 1.0 - 1.0e-9, n_grid)
    _, sig = homogeneous_response(model, alpha)
    slope = np.gradient(sig, alpha)
    return SlopeScan(float(slope.min()), float(slope.max()))


def optimal_profile(model: ModelSpec, t):
    """Closed-form optimal phase-field profile alpha_hat(t) of a developed crack.

    AT1: (1 - |t|/(2l))^2 supported on [-2l, 2l]; AT2 (and Foc2):
    exp(-|t|/l); the quartic family: exp(-|t| / (b_w^(1/4) l)), whose decay
    constant is b_w^(-1/4) = 2^(1/3).
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(np.abs(t))
    ell = model.ell
    if model.family is ModelFamily.AT1:
        out = np.where(t <= 2.0 * ell, (1.0 - t / (2.0 * ell)) ** 2, 0.0)
    elif model.family in (ModelFamily.AT2, ModelFamily.FOC2):
        out = np.exp(-t / ell)
    else:
        out = np.exp(-t / (model.b_w**0.25 * ell))
    return float(out[0]) if scalar else out


def _profile_density(model: ModelSpec, t: np.ndarray):
    """1D surface-energy density of the closed-form profile, t >= 0."""
    ell = model.ell
    a = optimal_profile(model, t)
    if model.family is ModelFamily.AT1:
        da = np.where(t <= 2.0 * ell, -(1.0 - t / (2.0 * ell)) / ell, 0.0)
        return (1.0 / C_W_AT1) * (a / ell + ell * da**2)
    if model.family in (ModelFamily.AT2, ModelFamily.FOC2):
        da = -a / ell
        return (1.0 / C_W_AT2) * (a**2 / ell + ell * da**2)
    da = -(model.b_w**-0.25 / ell) * a
    return 0.25 * (3.0 * a**4 / (model.b_w * ell) + ell**3 * da**4)


def profile_surface_energy(model: ModelSpec, half_length: float, h: float) -> float:
    """Trapezoid integral of the 1D surface-energy density over the profile.

    Returns the energy per unit crack length normalized by G0; the
    Gamma-convergence normalization makes the analytic value exactly 1 for
    every family.  Requires ``half_length >= 10*ell`` and ``h <= ell/10``
    so the tail truncation and quadrature error stay inside 1 percent.
    """
    if half_length < 10.0 * model.ell:
        raise ValueError("half_length must be at least 10*ell")
    if h > model.ell / 10.0 + 1.0e-15:
        raise ValueError("grid step h must not exceed ell/10")
    n = int(round(half_length / h))
    t = np.linspace(0.0, half_length, n + 1)
    return 2.0 * float(np.trapezoid(_profile_density(model, t), t))
