"""Incremental quasi-static driver: staggered minimization per load step.

Each load step alternates two exact block minimizations until a combined
residual threshold is met: first the phase field at frozen displacement
(semismooth Newton for the convex families, a trust-region method for the
non-convex quartic family), then the displacement at frozen phase field
(one SPD solve).  Irreversibility is enforced through the quadratic
penalty with the analytically chosen coefficient lambda_hat.

The trust-region method minimizes the second-order model of the penalized
functional under the pointwise constraint -R <= z <= R, itself imposed by
penalization; steps are accepted on the ratio of actual to predicted
decrease, the radius shrinks on rejection and grows on very successful
steps, and iteration stops once the relative energy change of an accepted
step falls below tol_pf.  The inner Newton starts from a small nonzero
uniform iterate: the untouched state is a stationary point with vanishing
curvature for the quartic family, and the offset is what lets damage
nucleate there at all.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import (
    DisplacementSystem,
    EnergyBreakdown,
    FemSpace,
    SimState,
    assemble_displacement_system,
    energy,
    hessian_alpha,
    residual_alpha,
    residual_displacement,
)
from .materials import ModelFamily, ModelSpec
from .mesh import BoundaryTag, TriMesh, boundary_nodes

__all__ = [
    "SolverError",
    "StaggeredParams",
    "TrustRegionParams",
    "LoadProgram",
    "TRResult",
    "StaggeredReport",
    "StepRecord",
    "RunHistory",
    "penalty_lambda_hat",
    "solve_displacement",
    "solve_alpha_convex",
    "trust_region_alpha",
    "tr_radius_update",
    "staggered_solve",
    "run_load_program",
    "crack_tip_estimate",
]


class SolverError(RuntimeError):
    """Solver failure with diagnostic payload."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.details = details or {}


@dataclass
class StaggeredParams:
    """Alternate-minimization controls.

    ``tol_stag`` and ``lambda_hat`` left as None are resolved at run time
    to 1e-5 * G0 * a and to :func:`penalty_lambda_hat` respectively.
    """

    tol_stag: Optional[float] = None
    max_iters: int = 200
    tol_ir: float = 0.01
    lambda_hat: Optional[float] = None
    order: str = "alpha_first"
    abort_on_nonconverged: bool = False

    def __post_init__(self):
        if self.tol_stag is not None and self.tol_stag <= 0:
            raise ValueError("tol_stag must be positive")
        if not (0.0 < self.tol_ir < 1.0):
            raise ValueError("tol_ir must lie in (0, 1)")
        if self.order not in ("alpha_first", "u_first"):
            raise ValueError("order must be 'alpha_first' or 'u_first'")


@dataclass
class TrustRegionParams:
    r0: float = 0.01
    eta1: float = 0.25
    eta2: float = 0.75
    shrink: float = 0.5
    grow: float = 2.0
    box_penalty: float = 1.0e4
    tol_pf: float = 1.0e-4
    max_outer: int = 200
    r_min: float = 1.0e-10
    z_init: float = 1.0e-3

    def __post_init__(self):
        if not (0.0 < self.eta1 < self.eta2 < 1.0):
            raise ValueError("need 0 < eta1 < eta2 < 1")
        if not (self.shrink < 1.0 < self.grow):
            raise ValueError("need shrink < 1 < grow")


@dataclass(frozen=True)
class LoadProgram:
    """Monotone displacement ramp u_bar_n = n * delta_u on tagged boundaries."""

    delta_u: float
    n_steps: int
    pattern: Mapping[BoundaryTag, float] = field(
        default_factory=lambda: {
            BoundaryTag.DIRICHLET_MINUS: -1.0,
            BoundaryTag.DIRICHLET_PLUS: +1.0,
        }
    )

    def __post_init__(self):
        if self.delta_u <= 0:
            raise ValueError("delta_u must be positive")


def penalty_lambda_hat(family: ModelFamily, g0: float, ell: float, tol_ir: float) -> float:
    """Optimal irreversibility penalty for a target violation tolerance.

    AT1 carries its own estimate; the quadratic-dissipation families share
    the AT2 expression, and the quartic family reuses it because its
    optimal profile is nearly identical to the AT2 one.
    """
    if not (0.0 < tol_ir < 1.0):
        raise ValueError("tol_ir must lie in (0, 1)")
    if family is ModelFamily.AT1:
        return g0 / ell * 27.0 / (64.0 * tol_ir**2)
    return g0 / ell * (1.0 / tol_ir**2 - 1.0)


def solve_displacement(system: DisplacementSystem) -> np.ndarray:
    """Direct solve of the reduced SPD system; returns the full nodal field.

    Verifies the relative residual against 1e-10 and raises with a
    conditioning diagnostic otherwise.
    """
    lu = spla.splu(system.matrix.tocsc())
    u_free = lu.solve(system.rhs)
    res = np.linalg.norm(system.matrix @ u_free - system.rhs)
    ref = max(np.linalg.norm(system.rhs), 1.0e-30)
    if res / ref > 1.0e-10 and res > 1.0e-14:
        diag = system.matrix.diagonal()
        raise SolverError(
            f"displacement solve failed: relative residual {res / ref:.3e}",
            {"diag_min": float(diag.min()), "diag_max": float(diag.max())},
        )
    return system.expand(u_free)


def _residual_scale(space: FemSpace, model: ModelSpec) -> float:
    # typical magnitude of one nodal residual entry: G0 * (area per node) / ell
    return model.g0 * float(np.sum(space.area)) / space.n_nodes / model.ell


def _factor_solve(mat: sp.csr_matrix, rhs: np.ndarray) -> Optional[np.ndarray]:
    try:
        out = spla.splu(mat.tocsc(), permc_spec="MMD_AT_PLUS_A").solve(rhs)
    except RuntimeError:
        return None
    if not np.all(np.isfinite(out)):
        return None
    return out


def solve_alpha_convex(
    space: FemSpace,
    state: SimState,
    model: ModelSpec,
    mu: float,
    lambda_hat: float,
    tol_rel: float = 1.0e-8,
    max_iters: int = 60,
    initial: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Semismooth Newton for the phase field of a convex family.

    Valid for AT1, AT2 and Foc2 (whose alpha-problems are strictly convex
    piecewise-quadratic, so the minimizer is unique).  The Newton matrix
    takes the penalty's generalized derivative as active at equality,
    which keeps it nonsingular in the untouched state; a backtracking line
    search on the energy guarantees the result never increases it.

    Raises
    ------
    SolverError
        On non-convergence, with the residual history attached.
    """
    if model.family is ModelFamily.FOC4:
        raise ValueError("quartic family is non-convex; use trust_region_alpha")
    alpha = np.array(state.alpha if initial is None else initial, dtype=float)
    tol = tol_rel * _residual_scale(space, model)
    history = []
    st = replace(state, alpha=alpha)
    e_cur = energy(space, st, model, mu, lambda_hat).total
    for _ in range(max_iters):
        st = replace(state, alpha=alpha)
        r = residual_alpha(space, st, model, mu, lambda_hat)
        rn = float(np.abs(r).max())
        history.append(rn)
        if rn <= tol:
            return alpha
        h = hessian_alpha(space, st, model, mu, lambda_hat, active_at_equality=True)
        step = _factor_solve(h, -r)
        if step is None:
            reg = 1.0e-10 * max(abs(h.diagonal()).max(), 1.0)
            step = _factor_solve(h + reg * sp.identity(space.n_nodes, format="csr"), -r)
            if step is None:
                raise SolverError("phase-field Newton matrix is singular", {"residuals": history})
        t = 1.0
        for _ in range(40):
            trial = alpha + t * step
            e_trial = energy(space, replace(state, alpha=trial), model, mu, lambda_hat).total
            if e_trial <= e_cur + 1.0e-14 * max(1.0, abs(e_cur)):
                break
            t *= 0.5
        alpha = alpha + t * step
        e_cur = e_trial
    raise SolverError("phase-field Newton did not converge", {"residuals": history})


def tr_radius_update(rho: float, radius: float, tr: TrustRegionParams) -> tuple[bool, float]:
    """Acceptance decision and new radius from the trust-region ratio.

    rho <= eta1 rejects the step and shrinks the radius; rho >= eta2
    accepts and grows it; between the two thresholds the step is accepted
    at unchanged radius.
    """
    if rho <= tr.eta1:
        return False, radius * tr.shrink
    if rho >= tr.eta2:
        return True, radius * tr.grow
    return True, radius


@dataclass
class TRResult:
    alpha: np.ndarray
    converged: bool
    n_outer: int
    n_accepted: int
    energies: list  # total F after each accepted step (starting value first)
    log: list  # (rho, radius, accepted) per outer iteration
    final_radius: float = 0.0


def _box_penalty_parts(space: FemSpace, z: np.ndarray, radius: float, lam: float):
    """Value, nodal gradient and active-weight of the box penalty term."""
    bary, w_q = space.rule.bary, space.rule.weights
    z_q = space.at_quad(z)
    lo = np.minimum(0.0, radius + z_q)  # active when z < -R
    hi = np.minimum(0.0, radius - z_q)  # active when z > +R
    value = 0.5 * lam * float(np.dot(space.area, (lo * lo + hi * hi) @ w_q))
    s_q = lam * (lo - hi)
    contrib = space.area[:, None] * (s_q * w_q) @ bary
    grad = np.bincount(space.tri.ravel(), weights=contrib.ravel(), minlength=space.n_nodes)
    active = lam * ((lo < 0.0) | (hi < 0.0)).astype(float)
    return value, grad, active


def _mass_like(space: FemSpace, c_q: np.ndarray) -> sp.csr_matrix:
    bary, w_q = space.rule.bary, space.rule.weights
    nn = np.einsum("qi,qj->qij", bary, bary)
    blocks = np.einsum("mq,q,qij->mij", c_q, w_q, nn) * space.area[:, None, None]
    rows = np.repeat(space.tri, 3, axis=1).ravel()
    cols = np.tile(space.tri, (1, 3)).ravel()
    return sp.coo_matrix((blocks.ravel(), (rows, cols)), shape=(space.n_nodes, space.n_nodes)).tocsr()


def _solve_box_model(
    space: FemSpace,
    g: np.ndarray,
    h: sp.csr_matrix,
    radius: float,
    tr: TrustRegionParams,
    scale: float,
    nu_init: float = 0.0,
) -> tuple[np.ndarray, float]:
    """Newton minimization of the box-penalized quadratic model.

    The initial iterate is the uniform ``z_init`` (never zero: with a
    vanishing gradient and curvature the zero iterate would just hand
    back the original ill-behaved problem).  Damping is added when the
    model Hessian is singular or gives an ascent direction; ``nu_init``
    warm-starts the damping level and the last level is returned so
    consecutive calls skip the escalation ladder.
    """
    n = space.n_nodes
    z = np.full(n, min(tr.z_init, 0.9 * radius))

    def model_parts(zv):
        hz = h @ zv
        quad = float(g @ zv + 0.5 * (zv @ hz))
        pen_val, pen_grad, active = _box_penalty_parts(space, zv, radius, tr.box_penalty)
        return quad + pen_val, g + hz + pen_grad, active

    m_val, m_grad, active = model_parts(z)
    tol = 1.0e-9 * max(scale, float(np.linalg.norm(g)))
    nu_floor = 1.0e-8 * max(abs(h.diagonal()).max(), scale)
    nu_warm = nu_init
    identity = sp.identity(n, format="csr")
    for _ in range(60):
        gn = float(np.linalg.norm(m_grad))
        if gn <= tol:
            break
        hm = h + _mass_like(space, active)
        nu = nu_warm
        step = None
        while True:
            mat = hm if nu == 0.0 else hm + nu * identity
            step = _factor_solve(mat, -m_grad)
            if step is not None and float(m_grad @ step) < -1.0e-14 * gn * max(
                np.linalg.norm(step), 1.0
            ):
                break
            nu = max(nu * 30.0, nu_floor)
            if nu > 1.0e20:
                step = -m_grad / max(gn, 1.0)
                break
        nu_warm = 0.0 if nu <= nu_floor else nu / 30.0
        t = 1.0
        slope = float(m_grad @ step)
        for _ in range(40):
            trial = z + t * step
            m_trial, g_trial, a_trial = model_parts(trial)
            if m_trial <= m_val + 1.0e-4 * t * slope or m_trial <= m_val + 1.0e-14 * max(1.0, abs(m_val)):
                break
            t *= 0.5
        if not np.all(np.isfinite(trial)):
            break
        z, m_val, m_grad, active = trial, m_trial, g_trial, a_trial
        if t * float(np.abs(step).max()) < 1.0e-14:
            break
    return z, nu_warm


def _nucleation_candidates(
    space: FemSpace, state: SimState, model: ModelSpec, mu: float
) -> list[np.ndarray]:
    """Localized damage candidates for the flat untouched state.

    With the quartic dissipation and a degradation whose derivative
    vanishes cubically, alpha = alpha_prev = 0 is a stationary point with
    identically zero gradient and Hessian: the quadratic model carries no
    information there and damage could never nucleate from it.  The
    leading energy change is quartic, delta F ~ int (g4 Psi + 3 G0 /
    (4 b_w ell)) z^4, and the fixed-displacement landscape has its second
    well at finite amplitude.  This returns a small family of exponential
    bumps (a few widths around the regularization length, a few
    amplitudes) centered on the supercritical node set where that quartic
    coefficient is negative; empty when no node pays.  The caller accepts
    a candidate only if the true energy decreases, so the probe never
    breaks monotonicity; it merely lets the method see past the flat
    quadratic model.
    """
    from .materials import DegradationKind, derive_degradation

    if model.family is not ModelFamily.FOC4:
        return []
    if model.degradation.kind is DegradationKind.QUADRATIC:
        return []
    m = 4 if model.degradation.kind is DegradationKind.QUARTIC_SQUARED else model.degradation.m
    g_quartic = derive_degradation(m)[4]  # -(1 + 4/m)
    psi = 0.5 * mu * np.einsum("md,md->m", space.grad(state.u), space.grad(state.u))
    drive_elem = -(g_quartic * psi + 0.75 * model.g0 / (model.b_w * model.ell))
    node_area = np.bincount(
        space.tri.ravel(), weights=np.repeat(space.area / 3.0, 3), minlength=space.n_nodes
    )
    drive = np.bincount(
        space.tri.ravel(),
        weights=np.repeat(drive_elem * space.area / 3.0, 3),
        minlength=space.n_nodes,
    ) / node_area
    core = np.nonzero(drive > 0.0)[0]
    if core.size == 0:
        return []
    if core.size > 400:
        core = core[np.argsort(drive[core])[-400:]]
    dist = np.min(
        np.linalg.norm(space.mesh.vertices[:, None, :] - space.mesh.vertices[core][None, :, :], axis=2),
        axis=1,
    )
    candidates = []
    for width in (0.35 * model.ell, 0.5 * model.ell, 0.8 * model.ell):
        chi = np.exp(-dist / width)
        for amp in (0.5, 0.8, 0.95):
            candidates.append(amp * chi)
    return candidates


def trust_region_alpha(
    space: FemSpace,
    state: SimState,
    model: ModelSpec,
    mu: float,
    lambda_hat: float,
    tr: TrustRegionParams,
    residual_target: Optional[float] = None,
) -> TRResult:
    """Trust-region minimization of the phase field at fixed displacement.

    Accepted iterates never increase the penalized functional.  Iteration
    stops when the relative energy change of an accepted step drops below
    ``tol_pf`` (and, if ``residual_target`` is given, the nodal residual
    norm is also below it or has stopped improving).  A radius collapse
    below ``r_min`` without a near-converged energy raises.
    """
    alpha = np.array(state.alpha, dtype=float)
    scale = _residual_scale(space, model)

    def f_total(a):
        return energy(space, replace(state, alpha=a), model, mu, lambda_hat).total

    f_cur = f_total(alpha)
    radius = tr.r0
    energies = [f_cur]
    log = []
    n_accepted = 0
    stall = 0
    best_grad = math.inf
    converged = False
    outer = 0
    cached = None  # (g, h) at the current alpha; reused across rejected steps
    nu_carry = 0.0  # damping warm-start carried across outer iterations
    while outer < tr.max_outer:
        outer += 1
        st = replace(state, alpha=alpha)
        if cached is None:
            g = residual_alpha(space, st, model, mu, lambda_hat)
            h = hessian_alpha(space, st, model, mu, lambda_hat)
            cached = (g, h)
        else:
            g, h = cached
        gnorm = float(np.linalg.norm(g))
        if residual_target is not None and gnorm <= residual_target and n_accepted > 0:
            converged = True
            break
        flat = float(np.abs(g).max()) <= 1.0e-12 * scale and (
            h.nnz == 0 or float(np.abs(h.data).max()) <= 1.0e-12 * scale
        )
        if flat:
            # Second-order information vanishes identically; probe localized
            # finite-amplitude candidates (plus the uniform kick) on the true
            # energy.  No decrease means the state is a local minimum of the
            # fixed-displacement problem (elastic stage): stop with alpha
            # unchanged.
            best_z, best_f = None, f_cur - 1.0e-14 * max(1.0, abs(f_cur))
            probes = _nucleation_candidates(space, st, model, mu)
            probes.append(np.full(space.n_nodes, min(tr.z_init, 0.9 * radius)))
            for cand in probes:
                f_trial = f_total(alpha + cand)
                if f_trial < best_f:
                    best_z, best_f = cand, f_trial
            if best_z is None:
                converged = True
                break
            alpha = alpha + best_z
            f_cur = best_f
            cached = None
            energies.append(f_cur)
            n_accepted += 1
            radius = radius * tr.grow
            log.append((math.inf, radius, True))
            continue
        z, nu_carry = _solve_box_model(space, g, h, radius, tr, scale, nu_init=nu_carry)
        pen_val = _box_penalty_parts(space, z, radius, tr.box_penalty)[0]
        m_val = float(g @ z + 0.5 * (z @ (h @ z))) + pen_val
        pred = -m_val  # F(alpha) - M~(z)
        f_trial = f_total(alpha + z)
        ared = f_cur - f_trial
        tiny = 1.0e-14 * max(1.0, abs(f_cur))
        if pred > tiny:
            rho = ared / pred
        else:
            rho = math.inf if ared > tiny else -math.inf
        accepted, radius = tr_radius_update(rho, radius, tr)
        accepted = accepted and ared >= 0.0
        log.append((rho, radius, accepted))
        if accepted:
            alpha = alpha + z
            cached = None
            rel_change = abs(ared) / max(abs(f_cur), 1.0e-12)
            f_cur = f_trial
            energies.append(f_cur)
            n_accepted += 1
            if rel_change <= tr.tol_pf:
                if residual_target is None:
                    converged = True
                    break
                g_new = residual_alpha(
                    space, replace(state, alpha=alpha), model, mu, lambda_hat
                )
                gn_new = float(np.linalg.norm(g_new))
                if gn_new <= residual_target:
                    converged = True
                    break
                if gn_new >= 0.99 * best_grad:
                    stall += 1
                    if stall >= 5:
                        break
                else:
                    stall = 0
                best_grad = min(best_grad, gn_new)
        elif radius < tr.r_min:
            if abs(ared) / max(abs(f_cur), 1.0e-12) <= 10.0 * tr.tol_pf:
                converged = True
                break
            raise SolverError(
                "TR stalled: radius underflow without energy convergence",
                {"radius": radius, "f": f_cur, "ared": ared, "outer": outer},
            )
    return TRResult(alpha, converged, outer, n_accepted, energies, log, radius)


def _flat_state_escapes(
    space: FemSpace, state: SimState, model: ModelSpec, mu: float, lam: float, f_cur: float
) -> bool:
    """True when the state is degenerate-flat but a probe lowers the energy."""
    scale = _residual_scale(space, model)
    g = residual_alpha(space, state, model, mu, lam)
    if float(np.abs(g).max()) > 1.0e-12 * scale:
        return False
    h = hessian_alpha(space, state, model, mu, lam)
    if h.nnz and float(np.abs(h.data).max()) > 1.0e-12 * scale:
        return False
    for cand in _nucleation_candidates(space, state, model, mu):
        trial = energy(space, replace(state, alpha=state.alpha + cand), model, mu, lam).total
        if trial < f_cur - 1.0e-14 * max(1.0, abs(f_cur)):
            return True
    return False


@dataclass
class StaggeredReport:
    iterations: int
    converged: bool
    energies: list  # EnergyBreakdown per staggered iteration
    residuals: list
    irreversibility_violation: float
    tr_outer_total: int
    tr_traces: list  # (energies, log) per trust-region invocation


def staggered_solve(
    space: FemSpace,
    state: SimState,
    model: ModelSpec,
    mu: float,
    bc: dict[int, float],
    stag: StaggeredParams,
    tr: Optional[TrustRegionParams] = None,
) -> tuple[SimState, StaggeredReport]:
    """One load step of alternate minimization under the given Dirichlet data.

    The default step order solves the phase field first (at the previous
    displacement), then the displacement.  The combined residual is the
    sum of the Euclidean norms of the two nodal residual vectors, the
    displacement one restricted to free nodes.
    """
    if stag.lambda_hat is None or stag.tol_stag is None:
        raise ValueError("resolve lambda_hat and tol_stag before calling staggered_solve")
    tr = tr or TrustRegionParams()
    u = np.array(state.u, dtype=float)
    alpha = np.array(state.alpha, dtype=float)
    aprev = np.array(state.alpha_prev, dtype=float)
    lam = stag.lambda_hat

    tr_traces: list = []
    # Bounded trust-region work per staggered iteration: during macroscopic
    # propagation it is both cheaper and physically sounder to re-equilibrate
    # the displacement between batches of phase-field descent steps; the
    # staggered loop supplies the outer iteration.  The radius is carried
    # from call to call (floored at r0) so consecutive batches skip the
    # growth warm-up.
    tr_local = replace(tr, max_outer=min(tr.max_outer, 50))
    radius_carry = [tr_local.r0]

    def alpha_solve(cur: SimState) -> tuple[np.ndarray, int]:
        if model.family is ModelFamily.FOC4:
            result = trust_region_alpha(
                space,
                cur,
                model,
                mu,
                lam,
                replace(tr_local, r0=radius_carry[0]),
                residual_target=0.5 * stag.tol_stag,
            )
            radius_carry[0] = max(result.final_radius, tr_local.r0)
            tr_traces.append((result.energies, result.log))
            return result.alpha, result.n_outer
        return solve_alpha_convex(space, cur, model, mu, lam), 0

    energies: list[EnergyBreakdown] = []
    residuals: list[float] = []
    tr_total = 0
    converged = False
    iterations = 0
    free_mask = np.ones(space.n_nodes, dtype=bool)
    free_mask[list(bc)] = False
    for k in range(1, stag.max_iters + 1):
        iterations = k
        if stag.order == "alpha_first":
            alpha, trn = alpha_solve(SimState(u, alpha, aprev, state.step))
            tr_total += trn
            system = assemble_displacement_system(space, alpha, model, mu, bc)
            u = solve_displacement(system)
        else:
            system = assemble_displacement_system(space, alpha, model, mu, bc)
            u = solve_displacement(system)
            alpha, trn = alpha_solve(SimState(u, alpha, aprev, state.step))
            tr_total += trn
        cur = SimState(u, alpha, aprev, state.step)
        energies.append(energy(space, cur, model, mu, lam))
        r_u = residual_displacement(space, cur, model, mu)
        r_a = residual_alpha(space, cur, model, mu, lam)
        res = float(np.linalg.norm(r_u[free_mask]) + np.linalg.norm(r_a))
        residuals.append(res)
        if res <= stag.tol_stag:
            # In the quartic family's untouched state the alpha-residual
            # vanishes identically, so a small combined residual proves
            # nothing about the phase field at the just-updated
            # displacement: re-probe before declaring the step done.
            if model.family is ModelFamily.FOC4 and _flat_state_escapes(
                space, cur, model, mu, lam, energies[-1].total
            ):
                continue
            converged = True
            break
        if k >= 3 and abs(residuals[-1] - residuals[-2]) <= 1.0e-12 * max(residuals[-1], 1.0):
            break  # stagnated; report honestly as non-converged
    violation = float(np.maximum(aprev - alpha, 0.0).max()) if alpha.size else 0.0
    report = StaggeredReport(iterations, converged, energies, residuals, violation, tr_total, tr_traces)
    if not converged and stag.abort_on_nonconverged:
        raise SolverError("staggered scheme did not converge", {"residuals": residuals})
    return SimState(u, alpha, aprev, state.step), report


def crack_tip_estimate(
    mesh: TriMesh, alpha: np.ndarray, notch_tip: tuple[float, float], threshold: float = 0.9
) -> tuple[float, float]:
    """Farthest point of the alpha >= threshold set from the notch tip.

    Distance is measured along the mesh edges of the high-alpha subgraph
    (path length, not straight-line), starting from the high-alpha node
    nearest to the notch tip.  Returns the notch tip itself when nothing
    has localized yet.
    """
    high = np.nonzero(np.asarray(alpha) >= threshold)[0]
    if high.size == 0:
        return (float(notch_tip[0]), float(notch_tip[1]))
    high_set = set(high.tolist())
    adj: dict[int, list[tuple[int, float]]] = {int(i): [] for i in high}
    verts = mesh.vertices
    for t in mesh.triangles:
        for i in range(3):
            a, b = int(t[i]), int(t[(i + 1) % 3])
            if a in high_set and b in high_set:
                d = float(np.linalg.norm(verts[a] - verts[b]))
                adj[a].append((b, d))
                adj[b].append((a, d))
    d_tip = np.linalg.norm(verts[high] - np.asarray(notch_tip), axis=1)
    source = int(high[np.argmin(d_tip)])
    dist = {source: 0.0}
    pq = [(0.0, source)]
    while pq:
        d, node = heapq.heappop(pq)
        if d > dist.get(node, math.inf):
            continue
        for nb, w in adj[node]:
            nd = d + w
            if nd < dist.get(nb, math.inf):
                dist[nb] = nd
                heapq.heappush(pq, (nd, nb))
    far = max(dist, key=dist.get)
    return (float(verts[far, 0]), float(verts[far, 1]))


@dataclass
class StepRecord:
    step: int
    u_bar: float
    energies: EnergyBreakdown
    min_alpha: float
    max_alpha: float
    stag_iters: int
    tr_iters: int
    crack_tip: tuple[float, float]
    converged: bool
    irreversibility_violation: float


@dataclass
class RunHistory:
    records: list
    state: SimState
    space: FemSpace


def run_load_program(
    mesh: TriMesh,
    model: ModelSpec,
    program: LoadProgram,
    stag: StaggeredParams,
    tr: Optional[TrustRegionParams] = None,
    mu: float = 1.0,
    quad_degree: int = 1,
    notch_tip: Optional[tuple[float, float]] = None,
    snapshot_callback=None,
) -> RunHistory:
    """Drive the quasi-static evolution over the whole load program.

    The previous-step phase field is frozen as the irreversibility
    reference only after a step finishes; the per-step report carries the
    energy split, field extrema, iteration counts and the crack-tip
    estimate.  ``snapshot_callback(record, state, report)`` is invoked
    after every step when given.
    """
    space = FemSpace(mesh, quad_degree)
    half_side = 0.5 * float(mesh.vertices[:, 0].max() - mesh.vertices[:, 0].min())
    stag = replace(
        stag,
        lambda_hat=(
            stag.lambda_hat
            if stag.lambda_hat is not None
            else penalty_lambda_hat(model.family, model.g0, model.ell, stag.tol_ir)
        ),
        tol_stag=(
            stag.tol_stag if stag.tol_stag is not None else 1.0e-5 * model.g0 * half_side
        ),
    )
    nodes_by_tag = {
        tag: sorted(boundary_nodes(mesh, tag)) for tag in program.pattern
    }
    if notch_tip is None:
        notch_tip = (half_side, 1.5 * half_side)

    state = SimState.zero(mesh.n_vertices)
    records: list[StepRecord] = []
    for n in range(1, program.n_steps + 1):
        u_bar = n * program.delta_u
        bc = {
            node: sign * u_bar
            for tag, sign in program.pattern.items()
            for node in nodes_by_tag[tag]
        }
        state = SimState(state.u, state.alpha, np.array(state.alpha), step=n)
        state, report = staggered_solve(space, state, model, mu, bc, stag, tr)
        record = StepRecord(
            step=n,
            u_bar=u_bar,
            energies=report.energies[-1],
            min_alpha=float(state.alpha.min()),
            max_alpha=float(state.alpha.max()),
            stag_iters=report.iterations,
            tr_iters=report.tr_outer_total,
            crack_tip=crack_tip_estimate(mesh, state.alpha, notch_tip),
            converged=report.converged,
            irreversibility_violation=report.irreversibility_violation,
        )
        records.append(record)
        if snapshot_callback is not None:
            snapshot_callback(record, state, report)
    return RunHistory(records, state, space)
