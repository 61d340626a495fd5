"""Command-line front end: experiments, verification kernels, exports.

Subcommands
-----------
simulate     run a configured quasi-static experiment, writing history.csv,
             per-step VTK snapshots and run_report.txt
verify       run a named verification suite (exit 0 iff all checks pass)
polar        CSV of the toughness profile for polar plots
homogeneous  CSV of the 1D homogeneous response
profile1d    CSV of the closed-form optimal profile
wellposed    existence/uniqueness report, optional lambda2 sweep CSV
mesh         build a preset mesh and write the plain-text format
sweep        run several configs in parallel (FRAKTUR_THREADS caps workers)

Configuration is a single JSON file with a ``schema_version`` field; all
defaults mirror the reference experiments (a = 1, mu = 1, G0 = 1,
delta_u = 0.1, TOL_ir = 0.01, R0 = 0.01, box penalty 1e4, TolPF = 1e-4).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import artifacts
from .anisotropy import AnisotropyParams, write_polar_csv
from .materials import DegradationSpec, ModelFamily, ModelSpec, homogeneous_response, optimal_profile
from .mesh import PRESETS, DomainSpec, TriMesh, build_slit_domain, write_mesh
from .solver import LoadProgram, RunHistory, SolverError, StaggeredParams, TrustRegionParams, run_load_program
from .verification import run_suite
from .wellposedness import AnalysisFamily, classify, hessian_eigs_foc2, min_lambda2_sweep

__all__ = ["main", "RunConfig", "ConfigError", "NoCrackError", "crack_angle", "load_config", "run"]

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Schema violation with the offending field path in the message."""


class NoCrackError(RuntimeError):
    """Raised when no localized ridge exists in the requested window."""


def crack_angle(alpha: np.ndarray, mesh: TriMesh, window: tuple[tuple[float, float], float]) -> float:
    """Crack orientation in degrees from a principal-component fit.

    Fits the nodes with alpha >= 0.9 inside the disk ``window = (center,
    radius)`` and returns the principal-axis angle in (-90, 90] measured
    from the +x axis.  Orientations are lines, so callers should compare
    angles modulo 180 degrees.
    """
    center, radius = np.asarray(window[0], dtype=float), float(window[1])
    sel = np.asarray(alpha) >= 0.9
    sel &= np.linalg.norm(mesh.vertices - center, axis=1) <= radius
    pts = mesh.vertices[sel]
    if pts.shape[0] < 2:
        raise NoCrackError("no alpha >= 0.9 ridge inside the window")
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    principal = vecs[:, -1]
    angle = math.degrees(math.atan2(principal[1], principal[0]))
    if angle <= -90.0:
        angle += 180.0
    elif angle > 90.0:
        angle -= 180.0
    return angle


# ----------------------------------------------------------------------
# configuration schema
# ----------------------------------------------------------------------

_FAMILIES = {f.value: f for f in ModelFamily}


@dataclass
class RunConfig:
    domain: DomainSpec
    preset_name: Optional[str]
    model: ModelSpec
    mu: float
    quad_degree: int
    load: LoadProgram
    staggered: StaggeredParams
    trust_region: TrustRegionParams
    out_dir: Path
    snapshot_stride: int
    seed: int
    notch_tip: Optional[tuple[float, float]]


def _get(obj: dict, path: str, default=None, required: bool = False):
    cur = obj
    parts = path.split(".")
    for i, key in enumerate(parts):
        if not isinstance(cur, dict):
            raise ConfigError(f"{'.'.join(parts[:i])}: expected an object")
        if key not in cur:
            if required:
                raise ConfigError(f"{path}: missing required field")
            return default
        cur = cur[key]
    return cur


def _expect_number(value, path: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _degradation_from(cfg, path: str) -> Optional[DegradationSpec]:
    if cfg is None:
        return None
    if isinstance(cfg, str):
        if cfg == "quadratic":
            return DegradationSpec.quadratic()
        if cfg == "quartic_squared":
            return DegradationSpec.quartic_squared()
        raise ConfigError(f"{path}: unknown degradation {cfg!r}")
    if isinstance(cfg, dict) and set(cfg) == {"poly"}:
        return DegradationSpec.poly(int(cfg["poly"]))
    raise ConfigError(f"{path}: expected 'quadratic', 'quartic_squared' or {{'poly': m}}")


def load_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("top level: expected an object")
    version = _get(raw, "schema_version", required=True)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

    family_name = _get(raw, "model.family", required=True)
    if family_name not in _FAMILIES:
        raise ConfigError(f"model.family: unknown family {family_name!r} (choose from {sorted(_FAMILIES)})")
    family = _FAMILIES[family_name]
    ell = _expect_number(_get(raw, "model.ell", required=True), "model.ell")
    g0 = _expect_number(_get(raw, "model.g0", 1.0), "model.g0")
    tau = _get(raw, "model.tau")
    omega = _expect_number(_get(raw, "model.omega", 0.0), "model.omega")
    anisotropy = None
    if tau is not None:
        k = 2 if family is ModelFamily.FOC2 else 4
        if family in (ModelFamily.AT1, ModelFamily.AT2):
            raise ConfigError("model.tau: AT families are isotropic; remove tau")
        anisotropy = AnisotropyParams(k, _expect_number(tau, "model.tau"), omega)
    degradation = _degradation_from(_get(raw, "model.degradation"), "model.degradation")
    try:
        if family is ModelFamily.FOC4:
            model = ModelSpec.foc4(ell=ell, g0=g0, anisotropy=anisotropy, degradation=degradation)
        else:
            model = ModelSpec(family, ell, g0, anisotropy, degradation or DegradationSpec.quadratic())
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from None

    a = _expect_number(_get(raw, "geometry.a", 1.0), "geometry.a")
    h_min = _get(raw, "mesh.h_min")
    h_max = _get(raw, "mesh.h_max")
    preset_name = _get(raw, "geometry.preset", "single_slit")
    if preset_name not in PRESETS:
        raise ConfigError(f"geometry.preset: unknown preset {preset_name!r} (choose from {sorted(PRESETS)})")
    domain = PRESETS[preset_name](
        a=a,
        ell=ell,
        h_min=None if h_min is None else _expect_number(h_min, "mesh.h_min"),
        h_max=None if h_max is None else _expect_number(h_max, "mesh.h_max"),
    )

    load = LoadProgram(
        delta_u=_expect_number(_get(raw, "load.delta_u", 0.1), "load.delta_u"),
        n_steps=int(_get(raw, "load.n_steps", 15)),
    )
    staggered = StaggeredParams(
        tol_stag=_get(raw, "staggered.tol_stag"),
        max_iters=int(_get(raw, "staggered.max_iters", 200)),
        tol_ir=_expect_number(_get(raw, "staggered.tol_ir", 0.01), "staggered.tol_ir"),
        order=_get(raw, "staggered.order", "alpha_first"),
        abort_on_nonconverged=bool(_get(raw, "staggered.abort_on_nonconverged", False)),
    )
    trust = TrustRegionParams(
        r0=_expect_number(_get(raw, "trust_region.r0", 0.01), "trust_region.r0"),
        eta1=_expect_number(_get(raw, "trust_region.eta1", 0.25), "trust_region.eta1"),
        eta2=_expect_number(_get(raw, "trust_region.eta2", 0.75), "trust_region.eta2"),
        shrink=_expect_number(_get(raw, "trust_region.shrink", 0.5), "trust_region.shrink"),
        grow=_expect_number(_get(raw, "trust_region.grow", 2.0), "trust_region.grow"),
        box_penalty=_expect_number(_get(raw, "trust_region.box_penalty", 1.0e4), "trust_region.box_penalty"),
        tol_pf=_expect_number(_get(raw, "trust_region.tol_pf", 1.0e-4), "trust_region.tol_pf"),
        max_outer=int(_get(raw, "trust_region.max_outer", 200)),
        r_min=_expect_number(_get(raw, "trust_region.r_min", 1.0e-10), "trust_region.r_min"),
    )
    return RunConfig(
        domain=domain,
        preset_name=preset_name,
        model=model,
        mu=_expect_number(_get(raw, "mu", 1.0), "mu"),
        quad_degree=int(_get(raw, "mesh.quad_degree", 1)),
        load=load,
        staggered=staggered,
        trust_region=trust,
        out_dir=Path(_get(raw, "output.dir", "out")),
        snapshot_stride=int(_get(raw, "output.snapshot_stride", 1)),
        seed=int(_get(raw, "seed", 0)),
        notch_tip=None,
    )


def _analysis_family(model: ModelSpec) -> Optional[AnalysisFamily]:
    if model.family is ModelFamily.FOC2:
        return AnalysisFamily.FOC2
    if model.family is ModelFamily.FOC4:
        return AnalysisFamily.FOC4 if model.anisotropy is not None else AnalysisFamily.ISO_FOC4
    return None


def run(config: RunConfig, out_dir: Optional[Path] = None) -> RunHistory:
    """Execute one configured run, writing artifacts as it goes.

    ``history.csv`` is flushed per step so a solver failure still leaves
    the completed portion behind.
    """
    out = Path(out_dir) if out_dir is not None else config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    mesh = build_slit_domain(config.domain)
    a = config.domain.a
    notch = config.notch_tip or (a, 1.5 * a)

    history_path = out / "history.csv"
    with history_path.open("w") as history_file:
        history_file.write(artifacts.HISTORY_COLUMNS + "\n")

        def snapshot(record, state, report):
            history_file.write(artifacts.history_row(record) + "\n")
            history_file.flush()
            if record.step % config.snapshot_stride == 0:
                with (out / f"fields_{record.step}.vtk").open("w") as f:
                    artifacts.write_vtk(f, mesh, state.u, state.alpha, title=f"step {record.step}")

        hist = run_load_program(
            mesh,
            config.model,
            config.load,
            config.staggered,
            config.trust_region,
            mu=config.mu,
            quad_degree=config.quad_degree,
            notch_tip=notch,
            snapshot_callback=snapshot,
        )
    _write_report(config, hist, out)
    return hist


def _write_report(config: RunConfig, hist: RunHistory, out: Path) -> None:
    lines = [
        "fraktur run report",
        "==================",
        f"preset           : {config.preset_name}",
        f"family           : {config.model.family.value}",
        f"ell              : {config.model.ell:.17g}",
        f"G0               : {config.model.g0:.17g}",
        f"mu               : {config.mu:.17g}",
    ]
    if config.model.anisotropy is not None:
        an = config.model.anisotropy
        lines.append(f"anisotropy       : k={an.k} tau={an.tau:.17g} omega={an.omega:.17g}")
    else:
        lines.append("anisotropy       : isotropic")
    lines.append(f"degradation      : {config.model.degradation.kind.value}")
    lines.append(f"load             : delta_u={config.load.delta_u:.17g} n_steps={config.load.n_steps}")
    lines.append("")
    fam = _analysis_family(config.model)
    if fam is not None:
        tau = config.model.anisotropy.tau if config.model.anisotropy else 0.0
        rep = classify(fam, tau)
        lines += [
            "phase-field well-posedness (fixed displacement):",
            f"  family     : {rep.family.value}",
            f"  tau        : {rep.tau:.17g}",
            f"  existence  : {rep.existence.value}",
            f"  uniqueness : {rep.uniqueness.value}",
            f"  basis      : {rep.basis}",
        ]
    else:
        lines.append("phase-field well-posedness: AT families are strictly convex in alpha")
    lines.append("")
    lines.append("step  u_bar      E_total      max_alpha  converged")
    for r in hist.records:
        lines.append(
            f"{r.step:4d}  {r.u_bar:<9.4g}  {r.energies.total:<11.6g}  {r.max_alpha:<9.4f}  {r.converged}"
        )
    n_bad = sum(not r.converged for r in hist.records)
    lines.append("")
    lines.append(f"steps converged  : {len(hist.records) - n_bad}/{len(hist.records)}")
    lines.append(f"max irrev. violation: {max(r.irreversibility_violation for r in hist.records):.3e}")
    (out / "run_report.txt").write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# subcommand handlers
# ----------------------------------------------------------------------

def _out_stream(path: Optional[str]):
    import contextlib

    if path is None or path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w")


def _cmd_simulate(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    out = Path(args.out) if args.out else config.out_dir
    try:
        hist = run(config, out)
    except SolverError as exc:
        print(f"solver failure: {exc} (partial artifacts kept in {out})", file=sys.stderr)
        return 2
    n_bad = sum(not r.converged for r in hist.records)
    print(f"completed {len(hist.records)} steps ({n_bad} non-converged); artifacts in {out}")
    return 0


def _cmd_verify(args) -> int:
    try:
        results = run_suite(args.suite)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 1
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        ok &= r.passed
        print(f"[{status}] {r.name:<{width}}  {r.measured}")
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return 0 if ok else 1


def _cmd_polar(args) -> int:
    params = AnisotropyParams(args.k, args.tau, args.omega)
    with _out_stream(args.out) as stream:
        write_polar_csv(params, stream)
    return 0


_MODEL_CHOICES = ("at1", "at2", "foc2", "foc4")


def _model_from_args(args) -> ModelSpec:
    family = {"at1": ModelFamily.AT1, "at2": ModelFamily.AT2, "foc2": ModelFamily.FOC2, "foc4": ModelFamily.FOC4}[
        args.model
    ]
    degradation = None
    if args.degradation == "quadratic":
        degradation = DegradationSpec.quadratic()
    elif args.degradation == "quartic_squared":
        degradation = DegradationSpec.quartic_squared()
    elif args.degradation == "poly":
        degradation = DegradationSpec.poly(args.m)
    if family is ModelFamily.FOC4:
        return ModelSpec.foc4(ell=args.ell, degradation=degradation)
    return ModelSpec(family, args.ell, 1.0, None, degradation or DegradationSpec.quadratic())


def _cmd_homogeneous(args) -> int:
    model = _model_from_args(args)
    alphas = np.linspace(0.0, 0.9995, 2001)
    eps, sig = homogeneous_response(model, alphas)
    with _out_stream(args.out) as stream:
        stream.write("alpha,eps_bar,sigma_bar\n")
        for a, e, s in zip(alphas, eps, sig):
            stream.write(f"{a:.17g},{e:.17g},{s:.17g}\n")
    return 0


def _cmd_profile1d(args) -> int:
    model = _model_from_args(args)
    t = np.linspace(-25 * model.ell, 25 * model.ell, 1001)
    ahat = optimal_profile(model, t)
    with _out_stream(args.out) as stream:
        stream.write("t,alpha_hat\n")
        for ti, ai in zip(t, ahat):
            stream.write(f"{ti:.17g},{ai:.17g}\n")
    return 0


def _cmd_wellposed(args) -> int:
    family = {f.value: f for f in AnalysisFamily}[args.family]
    rep = classify(family, args.tau)
    print("phase-field well-posedness at fixed displacement")
    print(f"  family     : {rep.family.value}")
    print(f"  tau        : {rep.tau:.17g}")
    print(f"  existence  : {rep.existence.value}")
    print(f"  uniqueness : {rep.uniqueness.value}")
    print(f"  basis      : {rep.basis}")
    if family is AnalysisFamily.FOC2:
        l1, l2 = hessian_eigs_foc2(args.tau, 0.0, args.g0, args.ell)
        print(f"  gradient Hessian eigenvalues: ({l1:.17g}, {l2:.17g})")
    if args.sweep_out:
        taus = np.linspace(0.0, 0.99, 100)
        with open(args.sweep_out, "w") as stream:
            stream.write("tau,min_lambda2\n")
            for tau in taus:
                stream.write(f"{tau:.17g},{min_lambda2_sweep(tau, g0=args.g0, ell=args.ell):.17g}\n")
    return 0


def _cmd_mesh(args) -> int:
    if args.preset not in PRESETS:
        print(f"unknown preset {args.preset!r} (choose from {sorted(PRESETS)})", file=sys.stderr)
        return 1
    spec = PRESETS[args.preset](a=args.a, ell=args.ell)
    mesh = build_slit_domain(spec)
    with open(args.out, "w") as stream:
        write_mesh(mesh, stream)
    print(f"{mesh.n_vertices} vertices, {mesh.n_triangles} triangles -> {args.out}")
    return 0


def _run_one_config(path_and_out):
    path, out = path_and_out
    config = load_config(path)
    run(config, Path(out))
    return str(path)


def _cmd_sweep(args) -> int:
    from concurrent.futures import ProcessPoolExecutor

    workers = int(os.environ.get("FRAKTUR_THREADS", os.cpu_count() or 1))
    base = Path(args.out)
    jobs = [(cfg, base / Path(cfg).stem) for cfg in args.configs]
    with ProcessPoolExecutor(max_workers=max(1, workers)) as pool:
        for done in pool.map(_run_one_config, jobs):
            print(f"finished {done}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="fraktur", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["homogeneous", "profiles", "anisotropy", "gradients", "wellposed", "all"])
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("polar", help="toughness profile CSV")
    p.add_argument("--k", type=int, choices=(2, 4), required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_polar)

    for name, handler in (("homogeneous", _cmd_homogeneous), ("profile1d", _cmd_profile1d)):
        p = sub.add_parser(name, help=f"{name} response CSV")
        p.add_argument("--model", choices=_MODEL_CHOICES, required=True)
        p.add_argument("--degradation", choices=("quadratic", "quartic_squared", "poly"), default=None)
        p.add_argument("--m", type=int, default=4)
        p.add_argument("--ell", type=float, default=0.04)
        p.add_argument("--out", default=None)
        p.set_defaults(handler=handler)

    p = sub.add_parser("wellposed", help="existence/uniqueness report")
    p.add_argument("--family", choices=[f.value for f in AnalysisFamily], required=True)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--g0", type=float, default=1.0)
    p.add_argument("--ell", type=float, default=0.04)
    p.add_argument("--sweep-out", default=None)
    p.set_defaults(handler=_cmd_wellposed)

    p = sub.add_parser("mesh", help="build a preset mesh")
    p.add_argument("--preset", required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--ell", type=float, default=0.04)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=_cmd_mesh)

    p = sub.add_parser("sweep", help="run several configs in parallel")
    p.add_argument("--configs", nargs="+", required=True)
    p.add_argument("--out", default="sweep_out")
    p.set_defaults(handler=_cmd_sweep)

    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
