"""Command-line entry point: coefficient tables, verification suites,
simulations and convergence studies, all reproducible from (config, seed).

Exit codes: 0 success, 1 check failure, 2 configuration error.  The output
root may be overridden with the SHEARWAVES_OUTPUT_ROOT environment variable.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import besov as besov_mod
from .coeffs import (
    GeneralCoefficients,
    derived_intermediates,
    identity_suite,
    model_coefficients,
    normalize,
    perturbed,
)
from .forms import (
    ProfileSum,
    ScaleParams,
    TravelingGaussian,
    verify_form_equivalence,
    verify_rescale,
)
from .oracles import helmholtz_inverse_quadrature
from .solver import (
    SimConfig,
    Trajectory,
    breaking_monitor,
    integrate,
    manufactured_forcing,
    step_rk4,
)
from .spectral import (
    Field,
    Grid,
    field_to_csv,
    helmholtz_inverse,
    random_mode_coefficients,
    sup_norm,
    trig_field,
)

SCHEMA_VERSION = 1
OUTPUT_ROOT_ENV = "SHEARWAVES_OUTPUT_ROOT"

DISPERSION_NOTE = ("linear phase: omega(k) = k*(c + (beta0/beta)*k^2)/(1 + k^2) "
                   "for the rescaled form; sign fixed by one-time symbolic derivation")


class ConfigError(Exception):
    """Raised for malformed run configurations; reports the offending field."""


# ---------------------------------------------------------------------------
# coeffs command
# ---------------------------------------------------------------------------

def _print_table(title: str, mapping: dict) -> None:
    print(f"# {title}")
    width = max(len(k) for k in mapping)
    for key, value in mapping.items():
        print(f"  {key.ljust(width)}  {value:.17g}")


def _parse_sweep(arg: str):
    try:
        lo_s, hi_s, count_s = arg.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError as exc:
        raise ConfigError(f"sweep must be lo:hi:count, got {arg!r}") from exc
    if not (0 < lo < hi and count >= 2):
        raise ConfigError(f"sweep needs 0 < lo < hi and count >= 2, got {arg!r}")
    return np.geomspace(lo, hi, count)


def cmd_coeffs(args) -> int:
    if args.sweep is not None:
        values = _parse_sweep(args.sweep)
        rows = []
        all_ok = True
        for a in values:
            m = model_coefficients(a)
            checks = identity_suite(a)
            ok = all(c.passed for c in checks)
            all_ok &= ok
            rows.append((a, m, ok, max(c.residual for c in checks)))
        out = sys.stdout if args.out is None else open(args.out, "w")
        try:
            header = ["A", "c", "alpha", "beta", "beta0"] + [f"omega{i}" for i in range(1, 8)] \
                + ["z0", "identities_pass", "max_residual"]
            out.write(",".join(header) + "\n")
            for a, m, ok, res in rows:
                d = m.to_dict()
                cells = [f"{d[k]:.17g}" for k in header[:-2]]
                cells += [str(int(ok)), f"{res:.3e}"]
                out.write(",".join(cells) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
        if not all_ok:
            print("identity failures in sweep", file=sys.stderr)
            return 1
        return 0

    a = args.A
    m = model_coefficients(a)
    d = derived_intermediates(a)
    g = normalize(m)
    checks = identity_suite(a)
    if args.json:
        payload = {
            "model": m.to_dict(),
            "derived": d.to_dict(),
            "general": g.to_dict(),
            "identities": [c.to_dict() for c in checks],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        _print_table(f"model coefficients (A = {a:g})", m.to_dict())
        if a == 0:
            print("  note: omega1..omega4 vanish in the irrotational limit (c = 1)")
        _print_table("derived intermediates", d.to_dict())
        _print_table("normalized (nonlocal form)", g.to_dict())
        print("# identities")
        width = max(len(c.name) for c in checks)
        for c in checks:
            flag = "PASS" if c.passed else "FAIL"
            print(f"  {c.name.ljust(width)}  residual={c.residual:.3e}  "
                  f"tol={c.tolerance:.1e}  {flag}")
    if not all(c.passed for c in checks):
        return 1
    return 0


# ---------------------------------------------------------------------------
# verify command
# ---------------------------------------------------------------------------

def _check_entry(check, n, length, residual, tolerance):
    return {
        "check": check,
        "n": n,
        "L": length,
        "residual": float(residual),
        "tolerance": tolerance,
        "pass": bool(residual < tolerance),
    }


def _verify_helmholtz(seed: int):
    grid = Grid(256, 40.0)
    rng = np.random.default_rng(seed)
    a, b = random_mode_coefficients(rng, max_mode=12)
    f = trig_field(grid, a, b, amplitude=1.0)
    direct = helmholtz_inverse(f).values
    quad = helmholtz_inverse_quadrature(f)
    residual = float(np.max(np.abs(direct - quad)))
    return [_check_entry("helmholtz_kernel_quadrature", grid.n, grid.length,
                         residual, 1e-8)]


def _verify_form_equivalence(seed: int, m, g_override=None, samples: int = 50):
    rng = np.random.default_rng(seed)
    grid = Grid(256, 40.0)
    worst = 0.0
    for _ in range(samples):
        a, b = random_mode_coefficients(rng, max_mode=10)
        u = trig_field(grid, a, b, amplitude=0.8)
        worst = max(worst, verify_form_equivalence(u, m, g_override))
    entries = [_check_entry("form_equivalence", grid.n, grid.length, worst, 1e-8)]

    # refinement: the same modal data on a coarse grid must be >= 1e3 worse
    a, b = random_mode_coefficients(np.random.default_rng(seed + 1), max_mode=10)
    coarse = verify_form_equivalence(trig_field(Grid(64, 40.0), a, b, amplitude=0.8), m, g_override)
    fine = verify_form_equivalence(trig_field(grid, a, b, amplitude=0.8), m, g_override)
    ratio_ok = coarse >= 1e3 * fine
    entries.append({
        "check": "form_equivalence_refinement",
        "n": 256,
        "L": 40.0,
        "residual": float(fine / coarse if coarse > 0 else math.inf),
        "tolerance": 1e-3,
        "pass": bool(ratio_ok),
    })
    return entries


def _verify_rescale(m):
    profile = ProfileSum(
        TravelingGaussian(amplitude=1.0, width=1.0, speed=0.7, center=-1.5),
        TravelingGaussian(amplitude=0.6, width=1.7, speed=-0.4, center=2.0),
    )
    report = verify_rescale(profile, ScaleParams(0.2, 0.008), m)
    return [{
        "check": "rescale_single_factor",
        "n": 0,
        "L": 0.0,
        "residual": report.defect,
        "tolerance": report.tolerance,
        "pass": report.passed,
    }]


def _verify_besov(seed: int, samples: int = 100):
    rng = np.random.default_rng(seed)
    grid = Grid(256, 40.0)
    fields = []
    for _ in range(samples):
        a, b = random_mode_coefficients(rng, max_mode=40)
        fields.append(trig_field(grid, a, b, amplitude=1.0))
    report = besov_mod.inequality_suite(fields)
    worst = max(r["defect_or_ratio"] for r in report if r["check"] != "log_interpolation_ratio")
    entries = [_check_entry("besov_exact_inequalities", grid.n, grid.length,
                            worst, 1e-12)]
    recon = max(besov_mod.decompose(f).reconstruction_residual() for f in fields[:10])
    entries.append(_check_entry("besov_reconstruction", grid.n, grid.length,
                                recon, 1e-10))
    ratios = [r["defect_or_ratio"] for r in report if r["check"] == "log_interpolation_ratio"]
    entries.append({
        "check": "besov_log_interpolation_ratio",
        "n": grid.n,
        "L": grid.length,
        "residual": float(max(ratios)),
        "tolerance": math.inf,
        "pass": bool(all(math.isfinite(r) for r in ratios)),
    })
    return entries


def cmd_verify(args) -> int:
    m = model_coefficients(args.A)
    g_override = None
    if args.inject_fault:
        g = normalize(m)
        if not hasattr(g, args.inject_fault):
            raise ConfigError(f"unknown coefficient for fault injection: {args.inject_fault!r}; "
                              f"options: {sorted(g.to_dict())}")
        g_override = perturbed(g, args.inject_fault)
    suites = {
        "helmholtz": lambda: _verify_helmholtz(args.seed),
        "form_equivalence": lambda: _verify_form_equivalence(args.seed, m, g_override),
        "rescale": lambda: _verify_rescale(m),
        "besov": lambda: _verify_besov(args.seed),
    }
    if args.only is not None:
        if args.only not in suites:
            raise ConfigError(f"unknown suite {args.only!r}; options: {sorted(suites)}")
        suites = {args.only: suites[args.only]}
    entries = []
    for fn in suites.values():
        entries.extend(fn())
    for e in entries:
        flag = "PASS" if e["pass"] else "FAIL"
        print(f"  {e['check']:<34} n={e['n']:<5} residual={e['residual']:.3e} "
              f"tol={e['tolerance']:.1e}  {flag}")
    if args.json:
        Path(args.json).write_text(json.dumps(entries, indent=2))
    if not all(e["pass"] for e in entries):
        failing = [e["check"] for e in entries if not e["pass"]]
        print(f"failing checks: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# simulate command
# ---------------------------------------------------------------------------

def _require(cfg: dict, key: str, types, context="config"):
    if key not in cfg:
        raise ConfigError(f"{context}: missing field {key!r}")
    value = cfg[key]
    if not isinstance(value, types):
        raise ConfigError(f"{context}: field {key!r} has type {type(value).__name__}")
    return value


def initial_condition(cfg: dict, grid: Grid) -> Field:
    kind = _require(cfg, "initial", str)
    x = grid.x
    length = grid.length
    amp = float(cfg.get("amplitude", 0.1))
    if kind == "zero":
        return Field(grid, np.zeros(grid.n))
    if kind == "sine":
        mode = int(cfg.get("mode", 1))
        return Field(grid, amp * np.sin(2 * np.pi * mode * x / length))
    if kind == "cosine":
        mode = int(cfg.get("mode", 1))
        return Field(grid, amp * np.cos(2 * np.pi * mode * x / length))
    if kind == "sech2":
        width = float(cfg.get("width", 1.0))
        center = float(cfg.get("center", length / 2))
        return Field(grid, amp / np.cosh((x - center) / width) ** 2)
    if kind == "gaussian":
        width = float(cfg.get("width", 1.0))
        center = float(cfg.get("center", length / 2))
        return Field(grid, amp * np.exp(-((x - center) ** 2) / (2 * width**2)))
    if kind == "random_bandlimited":
        rng = np.random.default_rng(int(cfg.get("seed", 0)))
        a, b = random_mode_coefficients(rng, max_mode=int(cfg.get("max_mode", 8)))
        return trig_field(grid, a, b, amplitude=amp)
    raise ConfigError(f"config: unknown initial condition kind {kind!r}")


def coefficients_from_config(cfg: dict):
    has_a = "vorticity" in cfg
    has_g = "coefficients" in cfg
    if has_a == has_g:
        raise ConfigError("config: exactly one of 'vorticity' / 'coefficients' required")
    if has_a:
        a = _require(cfg, "vorticity", (int, float))
        if a < 0:
            raise ConfigError("config: field 'vorticity' must be >= 0")
        return normalize(model_coefficients(float(a))), {"vorticity": float(a)}
    raw = _require(cfg, "coefficients", dict)
    names = [f.name for f in GeneralCoefficients.__dataclass_fields__.values()]  # type: ignore[attr-defined]
    unknown = sorted(set(raw) - set(names))
    if unknown:
        raise ConfigError(f"config: unknown coefficient fields {unknown}")
    missing = sorted(set(names) - set(raw))
    if missing:
        raise ConfigError(f"config: coefficients object missing {missing}")
    g = GeneralCoefficients(**{k: float(raw[k]) for k in names})
    return g, {"explicit_coefficients": True}


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} line {exc.lineno}: {exc.msg}")
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be an object")
    version = _require(cfg, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"config: schema_version {version} unsupported (want {SCHEMA_VERSION})")
    return cfg


def sim_config_from_dict(cfg: dict):
    n = _require(cfg, "n", int)
    length = _require(cfg, "length", (int, float))
    try:
        grid = Grid(n, float(length))
    except ValueError as exc:
        raise ConfigError(f"config: {exc}")
    g, provenance = coefficients_from_config(cfg)
    dt = cfg.get("dt")
    cfl = cfg.get("cfl")
    policy = cfg.get("dealias", "two_thirds")
    if policy is not None and policy not in ("two_thirds", "strong"):
        raise ConfigError(f"config: field 'dealias' must be two_thirds|strong|null, got {policy!r}")
    try:
        sim = SimConfig(
            grid=grid,
            coefficients=g,
            t_end=float(_require(cfg, "t_end", (int, float))),
            dt=None if dt is None else float(dt),
            cfl=None if cfl is None else float(cfl),
            dealias_policy=policy,
            snapshot_stride=int(cfg.get("snapshot_stride", 1)),
            breaking_stop=None if cfg.get("breaking_stop") is None else float(cfg["breaking_stop"]),
            sobolev_s=float(cfg.get("sobolev_s", 1.5)),
        )
    except ValueError as exc:
        raise ConfigError(f"config: {exc}")
    return sim, provenance


PLOT_SCRIPT = """\
# gnuplot script generated alongside the run outputs
set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 1400,900
set output 'run.png'
set multiplot layout 2,2
set title 'final state'
plot 'snapshots/final.csv' using 1:2 with lines title 'u(t_end,x)'
set title 'amplitude and slope extrema'
plot 'diagnostics.csv' using 1:2 with lines title 'sup|u|', \\
     'diagnostics.csv' using 1:3 with lines title 'min u_x', \\
     'diagnostics.csv' using 1:4 with lines title 'max u_x'
set title 'breaking integral'
plot 'diagnostics.csv' using 1:7 with lines title 'int ||u_x||^2 dt'
set title 'norms'
plot 'diagnostics.csv' using 1:5 with lines title 'H1', \\
     'diagnostics.csv' using 1:6 with lines title 'Hs', \\
     'diagnostics.csv' using 1:8 with lines title 'energy'
unset multiplot
"""


def output_dir(args, default_name: str) -> Path:
    if args.out is not None:
        return Path(args.out)
    root = Path(os.environ.get(OUTPUT_ROOT_ENV, "."))
    return root / default_name


def write_run_outputs(outdir: Path, cfg: dict, sim: SimConfig, provenance: dict,
                      traj: Trajectory, wall_time: float) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "snapshots").mkdir(exist_ok=True)
    for i, snap in enumerate(traj.snapshots):
        field_to_csv(snap, outdir / "snapshots" / f"snap_{i:06d}.csv")
    field_to_csv(traj.final(), outdir / "snapshots" / "final.csv")
    (outdir / "diagnostics.csv").write_text(traj.diagnostics_csv())
    (outdir / "plot.gnuplot").write_text(PLOT_SCRIPT)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg,
        "grid": {"n": sim.grid.n, "length": sim.grid.length},
        "coefficients": sim.coefficients.to_dict(),
        "provenance": provenance,
        "termination": traj.termination,
        "breaking_verdict": breaking_monitor(traj.records),
        "records": len(traj.records),
        "wall_time_s": wall_time,
        "dispersion_note": DISPERSION_NOTE,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    sim, provenance = sim_config_from_dict(cfg)
    u0 = initial_condition(cfg, sim.grid)
    start = time.perf_counter()
    traj = integrate(sim, u0)
    wall = time.perf_counter() - start
    outdir = output_dir(args, Path(args.config).stem)
    write_run_outputs(outdir, cfg, sim, provenance, traj, wall)
    print(f"run complete: termination={traj.termination} records={len(traj.records)} "
          f"outdir={outdir}")
    return 0 if traj.termination in ("completed", "breaking_detected") else 1


# ---------------------------------------------------------------------------
# convergence command
# ---------------------------------------------------------------------------

def mms_solution(length: float, amplitude: float = 0.1, mode: int = 1):
    """Decaying traveling cosine with closed-form time derivative."""
    k = 2 * np.pi * mode / length

    def u_exact(t, x):
        return amplitude * np.cos(k * (x - t)) * np.exp(-t / 10.0)

    def u_exact_t(t, x):
        return amplitude * np.exp(-t / 10.0) * (k * np.sin(k * (x - t))
                                                - 0.1 * np.cos(k * (x - t)))

    return u_exact, u_exact_t


def mms_run(n: int, length: float, dt: float, t_end: float, g,
            amplitude: float = 0.1, mode: int = 1) -> tuple:
    """Integrate the manufactured problem; returns (final state, L-inf error)."""
    grid = Grid(n, length)
    u_exact, u_exact_t = mms_solution(length, amplitude, mode)
    forcing = manufactured_forcing(grid, g, u_exact, u_exact_t, dealias_policy="two_thirds")
    u = Field(grid, u_exact(0.0, grid.x))
    t = 0.0
    while t < t_end - 1e-12:
        step = min(dt, t_end - t)
        u = step_rk4(u, step, g, forcing, t, dealias_policy="two_thirds")
        t += step
    err = float(np.max(np.abs(u.values - u_exact(t_end, grid.x))))
    return u, err


def temporal_order(g, n: int = 64, length: float = 40.0, t_end: float = 1.0,
                   dt0: float = 0.1) -> tuple:
    """Richardson triple: successive solution differences at dt, dt/2, dt/4.

    The manufactured wave uses mode 4 so the per-step phase advance is large
    enough for the O(dt^4) error to sit well above round-off.
    """
    u1, e1 = mms_run(n, length, dt0, t_end, g, amplitude=0.2, mode=4)
    u2, e2 = mms_run(n, length, dt0 / 2, t_end, g, amplitude=0.2, mode=4)
    u3, e3 = mms_run(n, length, dt0 / 4, t_end, g, amplitude=0.2, mode=4)
    d12 = sup_norm(u1 - u2)
    d23 = sup_norm(u2 - u3)
    order = math.log2(d12 / d23) if d23 > 0 else math.inf
    return order, (e1, e2, e3)


def spatial_error_ratio(g, length: float = 40.0, t_end: float = 0.5,
                        dt: float = 5e-4, amplitude: float = 0.1,
                        width: float = 2.0) -> tuple:
    """Unforced smooth Gaussian run: coarse-grid error against an n=256
    reference on shared nodes.  The profile is wide enough that everything
    past the coarse dealias band is spectrally small."""
    results = {}
    for n in (64, 128, 256):
        grid = Grid(n, length)
        u0 = Field(grid, amplitude * np.exp(-((grid.x - length / 2) ** 2) / (2 * width**2)))
        sim = SimConfig(grid=grid, coefficients=g, t_end=t_end, dt=dt,
                        dealias_policy="two_thirds", snapshot_stride=10**9)
        traj = integrate(sim, u0)
        results[n] = traj.final()
    ref = results[256]
    errors = {}
    for n in (64, 128):
        stride = 256 // n
        errors[n] = float(np.max(np.abs(results[n].values - ref.values[::stride])))
    return errors[64] / max(errors[128], 1e-300), errors


def cmd_convergence(args) -> int:
    g = normalize(model_coefficients(args.A))
    order, errs = temporal_order(g)
    print(f"temporal Richardson order: {order:.3f}  (mms errors: "
          + ", ".join(f"{e:.3e}" for e in errs) + ")")
    ratio, errors = spatial_error_ratio(g)
    print(f"spatial error ratio n=64 vs n=128: {ratio:.3e}  "
          f"(errors: {errors[64]:.3e}, {errors[128]:.3e})")
    ok = order >= args.min_order and ratio > args.min_ratio
    if args.json:
        Path(args.json).write_text(json.dumps({
            "temporal_order": order,
            "mms_errors": errs,
            "spatial_ratio": ratio,
            "spatial_errors": errors,
            "pass": ok,
        }, indent=2))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shearwaves",
        description="coefficient verification and simulation for shallow-water "
                    "waves over constant-vorticity shear",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="coefficient tables and identity report")
    p.add_argument("--A", type=float, default=1.5, help="vorticity parameter")
    p.add_argument("--sweep", help="log-spaced sweep lo:hi:count, CSV output")
    p.add_argument("--out", help="write sweep CSV here instead of stdout")
    p.add_argument("--json", action="store_true", help="JSON instead of tables")
    p.set_defaults(fn=cmd_coeffs)

    p = sub.add_parser("verify", help="cross-check suites (oracle comparisons)")
    p.add_argument("--A", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--only", help="run a single suite")
    p.add_argument("--json", help="write per-check JSON here")
    p.add_argument("--inject-fault", help="perturb one model coefficient (test mode)")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("simulate", help="run a configured simulation")
    p.add_argument("config", help="flat JSON config file")
    p.add_argument("--out", help="output directory (default: ./<config stem>)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("convergence", help="manufactured-solution refinement study")
    p.add_argument("--A", type=float, default=1.5)
    p.add_argument("--min-order", type=float, default=3.8)
    p.add_argument("--min-ratio", type=float, default=1e3)
    p.add_argument("--json", help="write results JSON here")
    p.set_defaults(fn=cmd_convergence)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
