"""P1 finite-element evaluation of the penalized total functional.

Anti-plane shear reduces elasticity to the scalar energy density
Psi = mu/2 |grad u|^2, so the total functional is

    F(u, alpha) = int g(alpha) Psi(grad u)
                + E_S(alpha)
                + lambda_hat/2 int <alpha - alpha_prev>_-^2,

with the surface term of the active regularization family.  Everything
here is evaluated per element with P1 interpolation: gradients are
element-wise constant (hence integrated exactly), while the alpha
polynomials are integrated by a configurable symmetric rule whose default
is the one-point centroid rule.  All reductions run in a fixed element
order, so assembled quantities are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .anisotropy import induced_norm_density
from .materials import ModelFamily, ModelSpec, degradation, dissipation
from .mesh import TriMesh

__all__ = [
    "SimState",
    "EnergyBreakdown",
    "FemSpace",
    "DisplacementSystem",
    "energy",
    "residual_alpha",
    "hessian_alpha",
    "residual_displacement",
    "assemble_displacement_system",
]

#: Residual stiffness floor applied to g inside the displacement matrix
#: only, keeping it SPD when alpha -> 1.
K_RES = 1.0e-8


@dataclass(frozen=True)
class QuadRule:
    bary: np.ndarray
    weights: np.ndarray


_D4A, _D4B = 0.445948490915965, 0.091576213509771
_QUAD_RULES = {
    1: QuadRule(np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([1.0])),
    2: QuadRule(
        np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]]),
        np.full(3, 1 / 3),
    ),
    4: QuadRule(
        np.array(
            [
                [_D4A, _D4A, 1 - 2 * _D4A],
                [_D4A, 1 - 2 * _D4A, _D4A],
                [1 - 2 * _D4A, _D4A, _D4A],
                [_D4B, _D4B, 1 - 2 * _D4B],
                [_D4B, 1 - 2 * _D4B, _D4B],
                [1 - 2 * _D4B, _D4B, _D4B],
            ]
        ),
        np.array([0.223381589678011] * 3 + [0.109951743655322] * 3),
    ),
}


@dataclass
class SimState:
    """Nodal fields of one simulation: displacement, phase field, history."""

    u: np.ndarray
    alpha: np.ndarray
    alpha_prev: np.ndarray
    step: int = 0

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.alpha_prev = np.asarray(self.alpha_prev, dtype=float)
        n = self.u.shape[0]
        if self.alpha.shape != (n,) or self.alpha_prev.shape != (n,):
            raise ValueError("u, alpha and alpha_prev must have equal lengths")

    @classmethod
    def zero(cls, n: int) -> "SimState":
        return cls(np.zeros(n), np.zeros(n), np.zeros(n), step=0)


@dataclass(frozen=True)
class EnergyBreakdown:
    elastic: float
    surface: float
    penalty: float
    total: float

    @classmethod
    def of(cls, elastic: float, surface: float, penalty: float) -> "EnergyBreakdown":
        # fixed summation order so re-runs reproduce the total bitwise
        return cls(elastic, surface, penalty, elastic + surface + penalty)


class FemSpace:
    """Per-mesh precomputation: areas, shape gradients, quadrature."""

    def __init__(self, mesh: TriMesh, quad_degree: int = 1):
        if quad_degree not in _QUAD_RULES:
            raise ValueError(f"quad_degree must be one of {sorted(_QUAD_RULES)}")
        self.mesh = mesh
        self.rule = _QUAD_RULES[quad_degree]
        self.tri = mesh.triangles
        p = mesh.vertices[self.tri]  # (m, 3, 2)
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        self.area = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
        if np.any(self.area <= 0):
            raise ValueError("mesh has non-positive triangle areas")
        grad = np.empty((self.tri.shape[0], 3, 2))
        for loc in range(3):
            e = p[:, (loc + 2) % 3] - p[:, (loc + 1) % 3]  # opposite edge
            grad[:, loc, 0] = -e[:, 1]
            grad[:, loc, 1] = e[:, 0]
        self.gradN = grad / (2.0 * self.area)[:, None, None]
        self.n_nodes = mesh.n_vertices

    def grad(self, nodal: np.ndarray) -> np.ndarray:
        """Element-constant gradient of a nodal field, shape (m, 2)."""
        return np.einsum("mld,ml->md", self.gradN, nodal[self.tri])

    def at_quad(self, nodal: np.ndarray) -> np.ndarray:
        """Field values at the quadrature points, shape (m, q)."""
        return nodal[self.tri] @ self.rule.bary.T


def _check_state(space: FemSpace, state: SimState) -> None:
    if state.u.shape[0] != space.n_nodes:
        raise ValueError("state arrays do not match the mesh")


def _elastic_density(space: FemSpace, u: np.ndarray, mu: float) -> np.ndarray:
    gu = space.grad(u)
    return 0.5 * mu * np.einsum("md,md->m", gu, gu)


def _grad_term(model: ModelSpec, xi: np.ndarray):
    """Value/grad/hess of the gradient part of E_S, prefactors included."""
    g0, ell = model.g0, model.ell
    aniso = model.anisotropy
    if model.family in (ModelFamily.AT1, ModelFamily.AT2):
        c = g0 / model.c_w * ell
        n2 = np.einsum("md,md->m", xi, xi)
        val = c * n2
        grad = 2.0 * c * xi
        hess = np.broadcast_to(2.0 * c * np.eye(2), (xi.shape[0], 2, 2)).copy()
        return val, grad, hess
    if model.family is ModelFamily.FOC2:
        c = 0.5 * g0 * ell
    else:
        c = 0.25 * g0 * ell**3
    if aniso is None:
        # isotropic fast path: phi^k = |xi|^k evaluated directly
        n2 = np.einsum("md,md->m", xi, xi)
        if model.family is ModelFamily.FOC2:
            val = c * n2
            grad = 2.0 * c * xi
            hess = np.broadcast_to(2.0 * c * np.eye(2), (xi.shape[0], 2, 2)).copy()
        else:
            val = c * n2**2
            grad = 4.0 * c * n2[:, None] * xi
            hess = 4.0 * c * n2[:, None, None] * np.eye(2) + 8.0 * c * np.einsum(
                "mi,mj->mij", xi, xi
            )
        return val, grad, hess
    dens = induced_norm_density(aniso, xi)
    return c * dens.value, c * dens.grad, c * dens.hess


def _local_term(model: ModelSpec, alpha_q: np.ndarray):
    """Value/1st/2nd derivative of the local part of E_S, prefactors included."""
    g0, ell = model.g0, model.ell
    w, dw, ddw = dissipation(model.family, alpha_q)
    if model.family in (ModelFamily.AT1, ModelFamily.AT2):
        c = g0 / (model.c_w * ell)
    elif model.family is ModelFamily.FOC2:
        c = 0.5 * g0 / ell
    else:
        c = 0.25 * g0 * 3.0 / (model.b_w * ell)
    return c * w, c * dw, c * ddw


def energy(space: FemSpace, state: SimState, model: ModelSpec, mu: float, lambda_hat: float) -> EnergyBreakdown:
    """Elastic / surface / penalty split of the total functional.

    alpha is evaluated as-is (no clamping): the quartic family may
    transiently exceed 1 during trust-region iterations and its
    polynomials remain well defined there.
    """
    _check_state(space, state)
    w_q = space.rule.weights
    psi = _elastic_density(space, state.u, mu)
    a_q = space.at_quad(state.alpha)
    g_q = degradation(model.degradation, a_q, clamp=False)[0]
    elastic = float(np.dot(space.area, psi * (g_q @ w_q)))

    grad_val = _grad_term(model, space.grad(state.alpha))[0]
    loc_val = _local_term(model, a_q)[0]
    surface = float(np.dot(space.area, loc_val @ w_q + grad_val))

    gap = np.minimum(0.0, a_q - space.at_quad(state.alpha_prev))
    penalty = float(0.5 * lambda_hat * np.dot(space.area, (gap * gap) @ w_q))
    return EnergyBreakdown.of(elastic, surface, penalty)


def residual_alpha(space: FemSpace, state: SimState, model: ModelSpec, mu: float, lambda_hat: float) -> np.ndarray:
    """Nodal gradient of the total functional with respect to alpha."""
    _check_state(space, state)
    bary, w_q = space.rule.bary, space.rule.weights
    psi = _elastic_density(space, state.u, mu)
    a_q = space.at_quad(state.alpha)
    dg_q = degradation(model.degradation, a_q, clamp=False)[1]
    dloc = _local_term(model, a_q)[1]
    gap = np.minimum(0.0, a_q - space.at_quad(state.alpha_prev))
    s_q = dg_q * psi[:, None] + dloc + lambda_hat * gap  # (m, q)
    contrib = space.area[:, None] * (s_q * w_q) @ bary  # (m, 3)

    grad_g = _grad_term(model, space.grad(state.alpha))[1]
    contrib += space.area[:, None] * np.einsum("md,mld->ml", grad_g, space.gradN)
    return np.bincount(space.tri.ravel(), weights=contrib.ravel(), minlength=space.n_nodes)


def hessian_alpha(
    space: FemSpace,
    state: SimState,
    model: ModelSpec,
    mu: float,
    lambda_hat: float,
    active_at_equality: bool = False,
) -> sp.csr_matrix:
    """Sparse symmetric second derivative of the total functional in alpha.

    The penalty indicator is strict (alpha < alpha_prev) by default;
    ``active_at_equality`` switches to the generalized-derivative choice
    (<=), which the semismooth Newton solver uses so the matrix stays
    nonsingular in the untouched state.  For the quartic family the result
    may be indefinite; that is expected, not an error.
    """
    _check_state(space, state)
    bary, w_q = space.rule.bary, space.rule.weights
    psi = _elastic_density(space, state.u, mu)
    a_q = space.at_quad(state.alpha)
    ddg_q = degradation(model.degradation, a_q, clamp=False)[2]
    ddloc = _local_term(model, a_q)[2]
    diff = a_q - space.at_quad(state.alpha_prev)
    active = (diff <= 0.0) if active_at_equality else (diff < 0.0)
    c_q = ddg_q * psi[:, None] + ddloc + lambda_hat * active  # (m, q)

    # local mass-like blocks: A_e sum_q w_q c_q N_i N_j
    nn = np.einsum("qi,qj->qij", bary, bary)  # (q, 3, 3)
    blocks = np.einsum("mq,q,qij->mij", c_q, w_q, nn) * space.area[:, None, None]

    hess_g = _grad_term(model, space.grad(state.alpha))[2]
    blocks += np.einsum("mid,mde,mje->mij", space.gradN, hess_g, space.gradN) * space.area[
        :, None, None
    ]

    rows = np.repeat(space.tri, 3, axis=1).ravel()
    cols = np.tile(space.tri, (1, 3)).ravel()
    mat = sp.coo_matrix(
        (blocks.ravel(), (rows, cols)), shape=(space.n_nodes, space.n_nodes)
    )
    return mat.tocsr()


def residual_displacement(space: FemSpace, state: SimState, model: ModelSpec, mu: float) -> np.ndarray:
    """Nodal gradient of the total functional with respect to u (all nodes).

    Uses the true degradation (no residual-stiffness floor) so it is the
    exact derivative of :func:`energy`.
    """
    _check_state(space, state)
    w_q = space.rule.weights
    a_q = space.at_quad(state.alpha)
    g_bar = degradation(model.degradation, a_q, clamp=False)[0] @ w_q  # (m,)
    gu = space.grad(state.u)
    contrib = (mu * space.area * g_bar)[:, None] * np.einsum("md,mld->ml", gu, space.gradN)
    return np.bincount(space.tri.ravel(), weights=contrib.ravel(), minlength=space.n_nodes)


@dataclass
class DisplacementSystem:
    """Symmetrically reduced SPD system for the displacement half-step."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    free: np.ndarray
    dirichlet: np.ndarray
    dirichlet_values: np.ndarray
    n_nodes: int

    def expand(self, u_free: np.ndarray) -> np.ndarray:
        u = np.zeros(self.n_nodes)
        u[self.free] = u_free
        u[self.dirichlet] = self.dirichlet_values
        return u


def assemble_displacement_system(
    space: FemSpace,
    alpha: np.ndarray,
    model: ModelSpec,
    mu: float,
    bc: dict[int, float],
) -> DisplacementSystem:
    """Stiffness K_ij = sum_T g(alpha) mu int grad N_i . grad N_j and its reduction.

    ``bc`` maps Dirichlet node index to imposed value; rows/columns are
    eliminated symmetrically with the right-hand-side correction.  g is
    floored at ``K_RES`` here (and only here) so the matrix stays SPD when
    alpha reaches 1.

    Raises
    ------
    ValueError
        If no Dirichlet nodes are given (the operator is singular).
    """
    if not bc:
        raise ValueError("empty Dirichlet set: displacement system would be singular")
    w_q = space.rule.weights
    a_q = space.at_quad(np.asarray(alpha, dtype=float))
    g_bar = np.maximum(degradation(model.degradation, a_q, clamp=False)[0], K_RES) @ w_q
    blocks = (mu * space.area * g_bar)[:, None, None] * np.einsum(
        "mid,mjd->mij", space.gradN, space.gradN
    )
    rows = np.repeat(space.tri, 3, axis=1).ravel()
    cols = np.tile(space.tri, (1, 3)).ravel()
    k_full = sp.coo_matrix(
        (blocks.ravel(), (rows, cols)), shape=(space.n_nodes, space.n_nodes)
    ).tocsr()

    dirichlet = np.array(sorted(bc), dtype=np.int64)
    values = np.array([bc[i] for i in dirichlet], dtype=float)
    mask = np.ones(space.n_nodes, dtype=bool)
    mask[dirichlet] = False
    free = np.nonzero(mask)[0]
    k_ff = k_full[free][:, free].tocsr()
    rhs = -k_full[free][:, dirichlet] @ values
    return DisplacementSystem(k_ff, rhs, free, dirichlet, values, space.n_nodes)
