"""Existence/uniqueness analysis of the phase-field half-problem.

For the alternate-minimization scheme the interesting question is whether
min over alpha at fixed displacement is well posed.  The direct methods of
the calculus of variations need convexity of the integrand in the
gradient argument plus coercivity.  Both reduce to pointwise statements
about the induced norm densities:

* two-fold: the xi-Hessian has constant eigenvalues G0*ell*(1 -+ tau),
  positive for every tau in [0, 1), so existence and uniqueness hold for
  the whole parameter range;
* four-fold: the eigenvalues depend on xi and the smaller one stays
  nonnegative exactly for tau <= 1/3; uniqueness cannot be concluded even
  there because the alpha-direction curvature g''(alpha) Psi +
  9 G0 alpha^2/(b_w ell) admits negative values for small alpha and large
  elastic density.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .materials import b_w

__all__ = [
    "AnalysisFamily",
    "Verdict",
    "ExistenceReport",
    "hessian_eigs_foc2",
    "hessian_eigs_foc4",
    "coercivity_bound",
    "classify",
    "min_lambda2_sweep",
]

WEAK_TAU_LIMIT = 1.0 / 3.0


class AnalysisFamily(enum.Enum):
    ISO_FOC4 = "IsoFoc4"
    FOC2 = "Foc2"
    FOC4 = "Foc4"


class Verdict(enum.Enum):
    SHOWN = "Shown"
    NOT_SHOWN_BY_DM = "NotShownByDM"


@dataclass(frozen=True)
class ExistenceReport:
    family: AnalysisFamily
    tau: float
    existence: Verdict
    uniqueness: Verdict
    basis: str


def hessian_eigs_foc2(tau: float, omega: float, g0: float, ell: float) -> tuple[float, float]:
    """Eigenvalues of the xi-Hessian of the two-fold gradient density.

    The density is (G0 ell / 2) * B xi . xi, so the Hessian is G0 ell B
    with eigenvalues G0 ell (1 + tau) and G0 ell (1 - tau), independent of
    xi and omega.
    """
    if not (0.0 <= tau < 1.0):
        raise ValueError("tau must lie in [0, 1)")
    return g0 * ell * (1.0 + tau), g0 * ell * (1.0 - tau)


def hessian_eigs_foc4(xi, tau: float, omega: float, g0: float, ell: float):
    """Eigenvalues of the xi-Hessian of the four-fold gradient density.

    Closed form for the Hessian of (G0 ell^3 / 4) phi^4(xi):

        lambda_{1,2} = G0 ell^3 { 2|xi|^2 +- [ 9|xi|^4 tau^2
                       + 6 tau P(xi) + |xi|^4 ]^(1/2) },

    with P the angular polynomial of phi^4.  Accepts a single xi or an
    (n, 2) batch; the minor eigenvalue satisfies
    lambda_2 >= G0 ell^3 |xi|^2 (1 - 3 tau).
    """
    if not (0.0 <= tau < 1.0):
        raise ValueError("tau must lie in [0, 1)")
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    xi = np.atleast_2d(xi)
    x1, x2 = xi[:, 0], xi[:, 1]
    n2 = x1 * x1 + x2 * x2
    p_ang = math.cos(4 * omega) * (x1**4 - 6.0 * x1 * x1 * x2 * x2 + x2**4) + 4.0 * math.sin(
        4 * omega
    ) * x1 * x2 * (x1 * x1 - x2 * x2)
    root = np.sqrt(np.maximum(9.0 * n2 * n2 * tau * tau + 6.0 * tau * p_ang + n2 * n2, 0.0))
    lam1 = g0 * ell**3 * (2.0 * n2 + root)
    lam2 = g0 * ell**3 * (2.0 * n2 - root)
    if single:
        return float(lam1[0]), float(lam2[0])
    return lam1, lam2


def _surface_density(family: AnalysisFamily, tau: float, omega: float, alpha, xi, g0, ell):
    from .anisotropy import AnisotropyParams, induced_norm_density

    if family is AnalysisFamily.FOC2:
        phi = induced_norm_density(AnisotropyParams(2, tau, omega), xi).value
        return 0.5 * g0 * (alpha**2 / ell + ell * phi)
    k4 = AnisotropyParams(4, tau, omega)
    phi = induced_norm_density(k4, xi).value
    return 0.25 * g0 * (3.0 * alpha**4 / (b_w(4) * ell) + ell**3 * phi)


def coercivity_bound(
    family: AnalysisFamily,
    tau: float,
    alpha: float,
    xi,
    g0: float,
    ell: float,
    omega: float = 0.0,
) -> float:
    """Pointwise coercivity lower bound on the surface density.

    Two-fold: (G0/2)(alpha^2/ell + (1-tau) ell |xi|^2); four-fold:
    (G0/4)(3 alpha^4/(b_w ell) + (1-tau) ell^3 |xi|^4).  The elastic term
    g(alpha) Psi >= 0 is dropped.  Verifies density >= bound at the given
    point before returning the bound.
    """
    xi = np.asarray(xi, dtype=float)
    mag2 = float(np.dot(xi, xi))
    if family is AnalysisFamily.FOC2:
        bound = 0.5 * g0 * (alpha**2 / ell + (1.0 - tau) * ell * mag2)
    else:
        bound = 0.25 * g0 * (3.0 * alpha**4 / (b_w(4) * ell) + (1.0 - tau) * ell**3 * mag2**2)
    density = float(_surface_density(family, tau, omega, alpha, xi, g0, ell))
    if density < bound - 1.0e-12 * max(1.0, abs(bound)):
        raise AssertionError(f"coercivity violated: density {density} < bound {bound}")
    return bound


def classify(family: AnalysisFamily, tau: float) -> ExistenceReport:
    """Existence/uniqueness verdict of the fixed-displacement problem.

    The isotropic four-fold family ignores ``tau`` (it has none).  The
    boundary tau = 1/3 counts as existence shown (closed interval).  The
    four-fold uniqueness verdict stays open even in the existence range:
    the alpha-direction curvature depends on the elastic density, so it is
    problem dependent.
    """
    if family is AnalysisFamily.ISO_FOC4:
        return ExistenceReport(
            family,
            0.0,
            Verdict.SHOWN,
            Verdict.NOT_SHOWN_BY_DM,
            "gradient Hessian eigenvalues G0*ell^3*{3,1}|xi|^2 >= 0; "
            "alpha-curvature g''(alpha)*Psi + 9*G0*alpha^2/(b_w*ell) may be negative",
        )
    if not (0.0 <= tau < 1.0):
        raise ValueError("tau must lie in [0, 1)")
    if family is AnalysisFamily.FOC2:
        return ExistenceReport(
            family,
            tau,
            Verdict.SHOWN,
            Verdict.SHOWN,
            "eigenvalues G0*ell*(1 -+ tau) > 0 for all tau in [0,1); "
            "alpha-curvature 2*Psi + G0/ell > 0",
        )
    existence = Verdict.SHOWN if tau <= WEAK_TAU_LIMIT else Verdict.NOT_SHOWN_BY_DM
    basis = (
        "lambda_2 >= G0*ell^3*|xi|^2*(1-3*tau) "
        + ("nonnegative for tau <= 1/3" if existence is Verdict.SHOWN else "negative for some xi when tau > 1/3")
        + "; alpha-curvature sign is problem dependent"
    )
    return ExistenceReport(family, tau, existence, Verdict.NOT_SHOWN_BY_DM, basis)


def min_lambda2_sweep(
    tau: float, omega_samples: int = 64, xi_samples: int = 128, g0: float = 1.0, ell: float = 1.0
) -> float:
    """min over unit-circle xi and omega grid of the four-fold lambda_2."""
    omegas = np.linspace(0.0, math.pi / 2.0, omega_samples)
    thetas = np.linspace(0.0, 2.0 * math.pi, xi_samples, endpoint=False)
    xi = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    out = math.inf
    for om in omegas:
        out = min(out, float(np.min(hessian_eigs_foc4(xi, tau, om, g0, ell)[1])))
    return out
