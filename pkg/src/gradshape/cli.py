"""Command-line front end.

Every subcommand also accepts ``--config FILE``: a JSON object whose keys are
the long option names (dashes or underscores).  Flags given on the command
line override the config file.

Exit codes: 0 success, 1 computation error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .envelope import DEFAULT_EPS, SPREAD_TOL, field_from_model, frozen_boundary, sample_mesh
from .errors import GradshapeError
from .export import export_mesh
from .halfplane import HarmonicFn, PiecewiseBoundary
from .oracle.minimize import minimize_variational
from .suites import SUITES, run_suite
from .tensions import parse_model
from .worked_models import aztec_field, lshape_field, lshape_solve

DEFAULT_WINDOWS = {
    "trivial_example": (0.5, 2.0, -2.0, -0.5),
    "young_tableaux": (-2.0, 2.0, 0.3, 2.0),
    "enharmonic": (-1.0, 1.0, -1.0, 1.0),
    "p_laplace": (0.5, 2.0, 0.5, 2.0),
    "dimer_square": (-2.0, 2.0, 0.3, 2.0),
}
UHP_WINDOW = (-3.0, 3.0, 0.01, 3.0)

BOUNDARY_EXPRS = {
    "zero": lambda x, y: 0.0 * x,
    "xy": lambda x, y: x * y,
    "2xy": lambda x, y: 2.0 * x * y,
    "x2-y2": lambda x, y: x * x - y * y,
}


class UsageError(Exception):
    pass


# -- value parsers -------------------------------------------------------------

def _floats(value, count, what):
    if isinstance(value, str):
        parts = value.split(",")
    else:
        parts = list(value)
    try:
        out = tuple(float(p) for p in parts)
    except (TypeError, ValueError):
        raise UsageError(f"{what}: expected {count} comma-separated numbers, got {value!r}") from None
    if len(out) != count:
        raise UsageError(f"{what}: expected {count} numbers, got {len(out)}")
    return out


def _float_list(value, what):
    parts = value.split(",") if isinstance(value, str) else list(value)
    return _floats(parts, len(parts), what)


def parse_resolution(value):
    if isinstance(value, str):
        parts = value.lower().split("x")
    else:
        parts = list(value)
    try:
        nu, nv = (int(p) for p in parts)
    except (TypeError, ValueError):
        raise UsageError(f"resolution: expected NxM, got {value!r}") from None
    if nu < 2 or nv < 2:
        raise UsageError(f"resolution must be at least 2x2, got {nu}x{nv}")
    return nu, nv


def parse_window(value):
    return _floats(value, 4, "window")


def parse_domain(value: str):
    kind, _, rest = str(value).partition(":")
    if kind == "square":
        x0, x1, y0, y1 = _floats(rest, 4, "domain")
        return (x0, x1, y0, y1)
    if kind == "polygon":
        verts = [_floats(v, 2, "polygon vertex") for v in rest.split(";") if v.strip()]
        if len(verts) < 3:
            raise UsageError("polygon needs at least three vertices")
        return verts
    raise UsageError(f"domain must be square:x0,x1,y0,y1 or polygon:x,y;x,y;..., got {value!r}")


def parse_boundary_expr(value: str):
    if value in BOUNDARY_EXPRS:
        return BOUNDARY_EXPRS[value]
    if value.startswith("linear:"):
        s, t, c = _floats(value[len("linear:"):], 3, "linear boundary")
        return lambda x, y: s * x + t * y + c
    raise UsageError(f"unknown boundary {value!r}; expected one of "
                     f"{', '.join(BOUNDARY_EXPRS)} or linear:s,t,c")


def _format_for(path, fmt):
    if fmt:
        return fmt
    return "json" if str(path).lower().endswith(".json") else "csv"


# -- subcommands ---------------------------------------------------------------

def cmd_aztec(o):
    nu, nv = parse_resolution(o.resolution)
    mesh = sample_mesh(aztec_field(), parse_window(o.window), (nu, nv))
    export_mesh(mesh, o.out, _format_for(o.out, o.format))
    if o.frozen_out:
        _write_frozen(aztec_field(), o)
    print(f"aztec: wrote {len(mesh)} points to {o.out}")


def _write_frozen(f, o):
    lo, hi = _floats(o.frozen_range, 2, "frozen-range")
    samples = np.linspace(lo, hi, int(o.frozen_samples))
    eps = _float_list(o.eps, "eps")
    fb = frozen_boundary(f, samples, eps_sequence=eps, spread_tol=float(o.spread_tol))
    lines = ["a,x,y,spread,flagged"]
    for k in range(samples.size):
        vals = (fb.samples[k], fb.x[k], fb.y[k], fb.spread[k])
        lines.append(",".join(f"{float(v):.17g}" for v in vals) + f",{int(fb.flagged[k])}")
    with open(o.frozen_out, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_lshape(o):
    a = float(o.a)
    params = lshape_solve(a)
    with open(o.out, "w") as fh:
        fh.write(params.to_json() + "\n")
    print(f"lshape: a={a!r} a1={params.a1:.17g} a2={params.a2:.17g} |G_u|={abs(params.g_u_at_branch()):.3g}")
    if o.mesh_out:
        f = lshape_field(params)
        mesh = sample_mesh(f, parse_window(o.window), parse_resolution(o.resolution))
        export_mesh(mesh, o.mesh_out, _format_for(o.mesh_out, o.format))
        print(f"lshape: wrote {len(mesh)} points to {o.mesh_out}")


def _load_g(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read boundary file {path}: {exc}") from None
    if isinstance(data, dict) and "G" in data:
        data = data["G"]
    if isinstance(data, dict) and "constant" in data:
        return HarmonicFn.constant(float(data["constant"]), "G")
    if isinstance(data, (int, float)):
        return HarmonicFn.constant(float(data), "G")
    try:
        return HarmonicFn.piecewise(PiecewiseBoundary.from_dict(data), "G")
    except GradshapeError as exc:
        raise UsageError(f"bad boundary file {path}: {exc}") from None


def cmd_envelope(o):
    model = parse_model(o.model)
    g = _load_g(o.boundary)
    window = parse_window(o.window) if o.window is not None else DEFAULT_WINDOWS.get(model.name, UHP_WINDOW)
    mesh = sample_mesh(field_from_model(model, g), window, parse_resolution(o.resolution))
    export_mesh(mesh, o.out, _format_for(o.out, o.format))
    print(f"envelope: wrote {len(mesh)} points to {o.out}")


def cmd_minimize(o):
    model = parse_model(o.model)
    domain = parse_domain(o.domain)
    bh = parse_boundary_expr(o.boundary)
    g = minimize_variational(model, domain, bh, int(o.n), tol=float(o.tol),
                             max_iters=int(o.max_iters), backend=o.backend)
    g.to_csv(o.out)
    summary = {
        "model": model.spec,
        "n": int(o.n),
        "converged": g.meta["converged"],
        "sweeps": g.meta["sweeps"],
        "energy": g.meta["energies"][-1],
        "max_update": g.meta["max_update"],
    }
    text = json.dumps(summary, indent=2)
    if o.summary:
        with open(o.summary, "w") as fh:
            fh.write(text + "\n")
    print(text)
    if not g.meta["converged"]:
        print(f"minimize: not converged after {g.meta['sweeps']} sweeps "
              f"(max update {g.meta['max_update']:.3g})", file=sys.stderr)


def cmd_verify(o):
    checks = run_suite(o.suite)
    width = max(len(c.name) for c in checks)
    print(f"{'suite':<12} {'check':<{width}} {'value':>12} {'tol':>10}  result")
    for c in checks:
        print(f"{c.suite:<12} {c.name:<{width}} {c.value:>12.4g} {c.tol:>10.3g}  "
              f"{'PASS' if c.passed else 'FAIL'}")
    failed = [c for c in checks if not c.passed]
    if o.json_out:
        rows = [c._asdict() for c in checks]
        with open(o.json_out, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    if failed:
        print("verify: failed checks: " + "; ".join(f"{c.suite}/{c.name} = {c.value:.4g}" for c in failed),
              file=sys.stderr)
        return 1
    return 0


# -- parser --------------------------------------------------------------------

_DEFAULTS: dict = {}
_REQUIRED: dict = {}


def _opt(p, cmd, flag, default=None, help="", required=False, **kw):
    dest = flag.lstrip("-").replace("-", "_")
    _DEFAULTS.setdefault(cmd, {})[dest] = default
    if required:
        _REQUIRED.setdefault(cmd, []).append(flag)
        help = f"{help} (required)"
    elif default is not None:
        shown = ",".join(str(v) for v in default) if isinstance(default, tuple) else default
        help = f"{help} (default: {shown})"
    p.add_argument(flag, dest=dest, default=None, help=help, **kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gradshape", description="Limit shapes of gradient variational problems.")
    ap.add_argument("--version", action="version", version=f"gradshape {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--config", help="JSON file of option values; flags override it")
        return p

    p = add("aztec", "Envelope mesh of the Aztec diamond limit shape.")
    _opt(p, "aztec", "--resolution", "200x200", "grid size NxM over the parameter window")
    _opt(p, "aztec", "--window", "-3,3,0.01,3", "parameter window u0,u1,v0,v1")
    _opt(p, "aztec", "--out", help="output mesh path", required=True)
    _opt(p, "aztec", "--format", None, "csv or json (default: from the file extension)", choices=("csv", "json"))
    _opt(p, "aztec", "--frozen-out", None, "also write the frozen boundary CSV here")
    _opt(p, "aztec", "--frozen-samples", 200, "number of real samples for the frozen boundary", type=int)
    _opt(p, "aztec", "--frozen-range", "-5,5", "real sample range a0,a1")
    _opt(p, "aztec", "--eps", ",".join(str(e) for e in DEFAULT_EPS), "offsets for extrapolation to the real line")
    _opt(p, "aztec", "--spread-tol", SPREAD_TOL, "flag frozen samples whose extrapolation spread exceeds this", type=float)

    p = add("lshape", "Solve the L-shaped region cover parameters.")
    _opt(p, "lshape", "--a", help="cut position, 0 <= a < 1/2", required=True, type=float)
    _opt(p, "lshape", "--out", help="output JSON with the solved parameters", required=True)
    _opt(p, "lshape", "--resolution", "100x100", "mesh grid size NxM (used with --mesh-out)")
    _opt(p, "lshape", "--window", "-3,3,0.01,3", "parameter window u0,u1,v0,v1 (used with --mesh-out)")
    _opt(p, "lshape", "--mesh-out", None, "also write the envelope mesh here")
    _opt(p, "lshape", "--format", None, "mesh format csv or json (default: from the extension)", choices=("csv", "json"))

    p = add("envelope", "Envelope mesh for a built-in model and intercept data G.")
    _opt(p, "envelope", "--model", help="model spec, e.g. trivial_example or p_laplace:p=2", required=True)
    _opt(p, "envelope", "--boundary", help='JSON file: {"jumps": [...], "values": [...]} or {"constant": C}',
         required=True)
    _opt(p, "envelope", "--out", help="output mesh path", required=True)
    _opt(p, "envelope", "--window", None, "parameter window u0,u1,v0,v1 (default: a patch of the model's chart)")
    _opt(p, "envelope", "--resolution", "100x100", "grid size NxM")
    _opt(p, "envelope", "--format", None, "csv or json (default: from the extension)", choices=("csv", "json"))

    p = add("minimize", "Direct minimisation of the triangulated functional.")
    _opt(p, "minimize", "--model", help="model spec with a closed-form sigma", required=True)
    _opt(p, "minimize", "--domain", help="square:x0,x1,y0,y1 or polygon:x,y;x,y;...", required=True)
    _opt(p, "minimize", "--boundary", help=f"boundary height: {', '.join(BOUNDARY_EXPRS)} or linear:s,t,c",
         required=True)
    _opt(p, "minimize", "--out", help="output grid CSV (x,y,h,mask)", required=True)
    _opt(p, "minimize", "--n", 33, "nodes per side", type=int)
    _opt(p, "minimize", "--tol", 1e-9, "stop when the largest node update is below this", type=float)
    _opt(p, "minimize", "--max-iters", 20000, "sweep limit", type=int)
    _opt(p, "minimize", "--backend", None, "numba or numpy (default: numba unless GRADSHAPE_DISABLE_NUMBA is set)",
         choices=("numba", "numpy"))
    _opt(p, "minimize", "--summary", None, "also write the JSON summary here")

    p = add("verify", "Run built-in verification suites.")
    _opt(p, "verify", "--suite", "all", "suite to run", choices=SUITES + ("all",))
    _opt(p, "verify", "--json-out", None, "also write the checks as JSON here")
    return ap


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def _resolve(cmd, ns):
    config = _load_config(ns.config) if ns.config else {}
    known = _DEFAULTS[cmd]
    unknown = sorted(set(config) - set(known))
    if unknown:
        raise UsageError(f"unknown config keys for {cmd}: {', '.join(unknown)}")
    for dest, default in known.items():
        if getattr(ns, dest) is None:
            setattr(ns, dest, config.get(dest, default))
    missing = [f for f in _REQUIRED.get(cmd, []) if getattr(ns, f.lstrip("-").replace("-", "_")) is None]
    if missing:
        raise UsageError(f"{cmd}: missing required option(s) {', '.join(missing)}")
    return ns


COMMANDS = {"aztec": cmd_aztec, "lshape": cmd_lshape, "envelope": cmd_envelope,
            "minimize": cmd_minimize, "verify": cmd_verify}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cmd = ns.command
    try:
        _resolve(cmd, ns)
        code = COMMANDS[cmd](ns)
    except UsageError as exc:
        print(f"gradshape {cmd}: {exc}", file=sys.stderr)
        return 2
    except (GradshapeError, ArithmeticError, ValueError, OSError) as exc:
        detail = ""
        residuals = getattr(exc, "residuals", None)
        if residuals:
            detail = " residuals: " + ", ".join(
                f"{k}={v:.3g}" if isinstance(v, float) and math.isfinite(v) else f"{k}={v}"
                for k, v in residuals.items())
        print(f"gradshape {cmd}: {type(exc).__name__}: {exc}{detail}", file=sys.stderr)
        return 1
    return int(code or 0)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
