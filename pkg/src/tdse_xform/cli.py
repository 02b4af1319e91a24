"""Command-line front end.

    tdse-xform <catalog|verify|propagate|transform|darboux> <config.json>
               [--out PATH] [--check NAME,...] [--quiet]

Each run reads one JSON config and writes a JSON report (to ``--out`` or
stdout). CSV side outputs are written next to the report as
``<stem>.csv``, ``<stem>_psi1.csv`` and so on. Exit codes: 0 when every
check passes, 1 when a defect exceeds its tolerance (or the computation
itself fails), 2 for configuration errors.
"""

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
from scipy.integrate import simpson

from . import catalog as cat
from .core import ComplexField, SpatialGrid, TimeAxis, analytic, mesh, parse_expr, sample
from .darboux import apply_L, build_darboux, check_reality, inverse_darboux
from .errors import XformError
from .pointmap import PointTransform, pullback_wavefunction, pushforward_wavefunction, transform_potential
from .propagator import PropagationRun, compare, norm_drift, propagate, residual, residual_field
from .reality import theorem_check, verify_commutation

COMMANDS = ("catalog", "verify", "propagate", "transform", "darboux")
CHECKS = ("residual", "reality", "darboux", "theorem", "diagram", "norms")
SEED_CHECKS = {"reality", "darboux", "theorem", "diagram"}

DEFAULT_TOL = {
    "reality": 1e-8,
    "darboux": 1e-8,
    "theorem": 1e-8,
    "diagram": 1e-6,
    "norms": 1e-8,
    "l2_error_final": 1e-3,
    "linf_error": 1e-2,
    "norm_drift": 1e-12,
    "potential": 1e-10,
    "wavefunction": 1e-10,
    "roundtrip": 1e-4,
    "kernel": 1e-6,
    "im_V1": 1e-10,
    "V1_closed_form": 1e-8,
}

COMMON_KEYS = {"entry", "params", "grid", "axis", "tolerances", "out"}
ALLOWED_KEYS = {
    "catalog": {"filter", "out"},
    "verify": COMMON_KEYS | {"checks", "test_solution", "residual_csv"},
    "propagate": COMMON_KEYS | {"solution", "stride_t", "stride_x"},
    "transform": COMMON_KEYS | {"potential", "solutions", "transform", "compare_entry", "expect_potential",
                                "stride_t", "stride_x"},
    "darboux": COMMON_KEYS | {"inverse", "x0", "stride_t", "stride_x"},
}
ENTRY_PARAMS = {
    "sextic-static": {"n", "alpha"},
    "sextic-timedep": {"n", "alpha", "omega", "omega0"},
    "free-particle": {"n"},
    "synthetic": {"F", "a", "b", "c"},
}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _num(v):
    v = float(v)
    if not math.isfinite(v):
        return "null"
    return "%.17g" % v


def dump_json(obj, indent=0):
    """JSON text with every float printed to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + dump_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(str(obj))


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, columns):
    """CSV with LF endings and %.17g numbers; ``columns`` are equal-length 1D arrays."""
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join(_num(v) if math.isfinite(v) else "nan" for v in row))
    return "\n".join(lines) + "\n"


def _side_path(out, suffix):
    if out is None:
        return None
    out = Path(out)
    return out.with_name(out.stem + suffix + ".csv")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def config_digest(config):
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def load_config(path, command):
    try:
        with open(path) as fh:
            config = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(config, dict):
        raise ConfigError("the config must be a JSON object")
    unknown = set(config) - ALLOWED_KEYS[command]
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")
    return config


def _expr(text, what):
    if not isinstance(text, str):
        raise ConfigError(f"{what} must be an expression string")
    try:
        return parse_expr(text)
    except XformError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _window(config, default):
    w = default
    grid, axis = config.get("grid", {}), config.get("axis", {})
    for name, block, keys in (("grid", grid, {"x_min", "x_max", "n"}), ("axis", axis, {"t0", "t1", "m"})):
        if not isinstance(block, dict) or set(block) - keys:
            raise ConfigError(f"{name} accepts only {sorted(keys)}")
    vals = {
        "x_min": float(grid.get("x_min", w.x_min)),
        "x_max": float(grid.get("x_max", w.x_max)),
        "n": int(grid.get("n", w.n)),
        "t0": float(axis.get("t0", w.t0)),
        "t1": float(axis.get("t1", w.t1)),
        "m": int(axis.get("m", w.m)),
    }
    win = cat.Window(**vals)
    try:
        win.grid, win.axis
    except XformError as exc:
        raise ConfigError(str(exc)) from None
    return win


def _default_window(name):
    return {
        "sextic-static": cat.Window(-6.0, 6.0, 1024, 0.0, 1.0, 2048),
        "sextic-timedep": cat.Window(-6.0, 6.0, 1024, 0.0, 1.0, 2048),
        "free-particle": cat.Window(0.5, 4.0, 512, 0.0, 1.0, 256),
        "synthetic": cat.Window(-3.0, 3.0, 256, 0.0, 1.0, 128),
    }[name]


def build_entry(config, key="entry", params_key="params"):
    """Construct the catalog entry named in ``config`` on the configured window."""
    spec = config.get(key)
    params = config.get(params_key, {})
    if isinstance(spec, dict):
        params = spec.get("params", {})
        spec = spec.get("name")
    if spec not in cat.NAMES:
        raise ConfigError(f"unknown entry {spec!r}; choose from {list(cat.NAMES)}")
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    unknown = set(params) - ENTRY_PARAMS[spec]
    if unknown:
        raise ConfigError(f"unknown parameters for {spec}: {sorted(unknown)}")
    win = _window(config, _default_window(spec))
    axis = win.axis
    try:
        if spec == "sextic-static":
            entry = cat.entry_sextic_static(int(params.get("n", 1)), float(params.get("alpha", 3.0)))
            entry = _rewindow(entry, win)
        elif spec == "sextic-timedep":
            n, alpha = int(params.get("n", 1)), float(params.get("alpha", 3.0))
            if "omega" in params and "omega0" in params:
                raise ConfigError("give either omega or omega0, not both")
            if "omega" in params:
                omega = analytic(_expr(params["omega"], "omega"), axis.t0, axis)
            else:
                o = params.get("omega0", {})
                if set(o) - {"beta", "gamma", "delta"}:
                    raise ConfigError("omega0 accepts only beta, gamma, delta")
                omega = cat.omega0(float(o.get("beta", 1.0)), float(o.get("gamma", 2.0)),
                                   float(o.get("delta", 0.0)), alpha, n, axis.t0, axis)
            entry = cat.entry_sextic_timedep(n, alpha, omega, win)
        elif spec == "free-particle":
            entry = _rewindow(cat.entry_free_particle(int(params.get("n", 1))), win)
        else:
            if "F" not in params:
                raise ConfigError("synthetic needs an expression F in x")
            F = _expr(params["F"], "F")
            if F.depends_on("t"):
                raise ConfigError("F must depend on x only")
            fns = []
            for k in "abc":
                e = _expr(params.get(k, "0"), k)
                if e.depends_on("x"):
                    raise ConfigError(f"{k} must depend on t only")
                fns.append(analytic(e, axis.t0, axis))
            entry = cat.entry_synthetic(F, *fns, window=win)
    except XformError as exc:
        if exc.code in ("inconsistent-construction",):
            raise
        raise ConfigError(str(exc)) from None
    return entry


def _rewindow(entry, win):
    tr = entry.transform
    if tr is not None and tr.axis != win.axis:
        tr = PointTransform(tr.A, tr.B, tr.C, tr.t0, win.axis)
    return dataclasses.replace(entry, window=win, transform=tr)


def _tolerances(config):
    tol = dict(DEFAULT_TOL)
    user = config.get("tolerances", {})
    if not isinstance(user, dict):
        raise ConfigError("tolerances must be an object")
    for k, v in user.items():
        if not isinstance(v, (int, float)) or v < 0:
            raise ConfigError(f"tolerance {k!r} must be a non-negative number")
        tol[k] = float(v)
    return tol


def _check(name, defect, tolerance):
    defect = float(defect)
    return {"name": name, "defect": defect, "tolerance": float(tolerance),
            "pass": bool(math.isfinite(defect) and defect <= tolerance)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_catalog_list(config):
    """Fixed-order text table of entry names, parameters and descriptions."""
    filt = config.get("filter")
    if filt is not None and not isinstance(filt, str):
        raise ConfigError("filter must be a string")
    rows = cat.list_entries(filt)
    widths = [max(len(r[i]) for r in rows + [("name", "parameters", "description")]) for i in range(3)]
    lines = []
    for r in [("name", "parameters", "description")] + rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n", len(rows)


def _residual_check(entry, tol):
    """Fine-window residual must be 3.5x below the residual at half resolution.

    A user tolerance for ``residual`` replaces the convergence threshold.
    """
    win = entry.window
    grid, axis = win.grid, win.axis
    coarse_g = SpatialGrid(grid.x_min, grid.x_max, (grid.n - 1) // 2 + 1)
    coarse_a = TimeAxis(axis.t0, axis.t1, max(4, axis.m // 2))
    checks = []
    for label, psi in entry.solutions:
        fine = residual(sample(psi, grid, axis), entry.V)
        coarse = residual(sample(psi, coarse_g, coarse_a), entry.V)
        t = tol.get("residual", coarse / 3.5)
        checks.append(_check(f"residual:{label}", fine, t))
    return checks


def _norm_defect(tr, psi, grid, axis, n_times=9):
    """Largest relative gap between ∫|psi|²dx and ∫|psibar|²dxbar over sample times."""
    psibar = pullback_wavefunction(tr, psi)
    x = grid.points
    worst = 0.0
    for t in np.linspace(axis.t0, axis.t1, n_times):
        lhs = simpson(np.abs(psi(x, t)) ** 2, x=x)
        c, b = float(tr.scale(t)), float(tr.B(t))
        xb = np.linspace(grid.x_min / c + b, grid.x_max / c + b, grid.n)
        tb = float(tr.tbar(t))
        rhs = simpson(np.abs(psibar(xb, np.full_like(xb, tb))) ** 2, x=xb)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
    return worst


def _test_solution(entry, label):
    if label is not None:
        try:
            return label, entry.solution(label)
        except KeyError:
            raise ConfigError(f"entry {entry.name} has no solution {label!r}") from None
    return entry.solutions[-1]


def cmd_verify(config, checks, tol, out=None):
    entry = build_entry(config)
    grid, axis = entry.window.grid, entry.window.axis
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    if entry.seed is None and SEED_CHECKS & set(checks):
        raise ConfigError(f"entry {entry.name} has no Darboux seed; drop {sorted(SEED_CHECKS & set(checks))}")
    test_label, test_psi = _test_solution(entry, config.get("test_solution"))
    results = []
    for name in checks:
        if name == "residual":
            results += _residual_check(entry, tol)
            if config.get("residual_csv") and out is not None:
                x, t = mesh(grid, axis)
                cols, head = [], []
                for label, psi in entry.solutions:
                    r = np.zeros((axis.m + 1, grid.n))
                    r[1:-1, 2:-2] = np.abs(residual_field(sample(psi, grid, axis), entry.V))
                    cols.append(r)
                    head.append(f"residual_{label}")
                X, T = np.broadcast_arrays(x, t)
                atomic_write(_side_path(out, "_residual"), csv_text(["t", "x"] + head, [T, X] + cols))
        elif name == "reality":
            results.append(_check("reality", check_reality(entry.seed, grid, axis), tol["reality"]))
        elif name == "darboux":
            _, V1 = build_darboux(entry.seed, grid, axis)
            x, t = mesh(grid, axis)
            v1 = np.asarray(V1(x, t))
            results.append(_check("darboux:im_V1", np.max(np.abs(v1.imag)), tol["im_V1"]))
            if "V1" in entry.extras:
                d = np.max(np.abs(v1.real - entry.extras["V1"](x, t)))
                results.append(_check("darboux:V1_closed_form", d, tol["V1_closed_form"]))
        elif name == "theorem":
            rep = theorem_check(entry.seed, grid, axis)
            x, t = mesh(grid, axis)
            scale = max(1.0, float(np.max(np.abs(entry.seed.samples(x, t).V0))))
            results.append(_check("theorem:fit", rep.fit_defect, tol["theorem"]))
            results.append(_check("theorem:potential", rep.potential_defect / scale, tol["theorem"]))
            results.append(_check("theorem:image", rep.image_defect, tol["theorem"]))
            results.append(_check("theorem:im2", rep.im2_defect / scale, tol["theorem"]))
        elif name == "diagram":
            rep = verify_commutation(entry.seed, test_psi, grid, axis, V0=entry.V)
            results.append(_check(f"diagram:{test_label}", rep.defect, tol["diagram"]))
        elif name == "norms":
            if entry.transform is None:
                raise ConfigError(f"entry {entry.name} has no point transform")
            for label, psi in entry.solutions:
                d = _norm_defect(entry.transform, psi, grid, axis)
                results.append(_check(f"norms:{label}", d, tol["norms"]))
    return results


def _strides(config, grid, axis):
    st = int(config.get("stride_t", max(1, axis.m // 64)))
    sx = int(config.get("stride_x", max(1, (grid.n - 1) // 256)))
    if st < 1 or sx < 1:
        raise ConfigError("strides must be positive")
    return st, sx


def cmd_propagate(config, tol, out=None):
    entry = build_entry(config)
    grid, axis = entry.window.grid, entry.window.axis
    label = config.get("solution", entry.solutions[0][0])
    try:
        psi = entry.solution(label)
    except KeyError:
        raise ConfigError(f"entry {entry.name} has no solution {label!r}") from None
    st, sx = _strides(config, grid, axis)
    exact = sample(psi, grid, axis)
    V = entry.V
    traj = propagate(PropagationRun(grid, axis, V, ComplexField(grid, exact.values[0])))
    l2, linf = compare(traj, exact)
    drift = norm_drift(traj)
    if out is not None:
        x, t = mesh(grid, axis)
        X, T = np.broadcast_arrays(x, t)
        sl = (slice(None, None, st), slice(None, None, sx))
        a, b = traj.values[sl], exact.values[sl]
        # apply the same global phase as compare()
        ov = np.vdot(traj.values[0], exact.values[0])
        a = a * (ov / abs(ov) if abs(ov) > 0 else 1.0)
        atomic_write(
            _side_path(out, ""),
            csv_text(
                ["t", "x", "re_psi", "im_psi", "abs_psi", "re_exact", "im_exact"],
                [T[sl], X[sl], a.real, a.imag, np.abs(a), b.real, b.imag],
            ),
        )
    return [
        _check("l2_error_final", l2, tol["l2_error_final"]),
        _check("linf_error", linf, tol["linf_error"]),
        _check("norm_drift", drift, tol["norm_drift"]),
    ]


def _transform_from_config(block, axis):
    if not isinstance(block, dict) or set(block) - {"A", "B", "C", "t0"}:
        raise ConfigError("transform accepts only A, B, C (expression strings) and t0")
    t0 = float(block.get("t0", axis.t0))
    fns = []
    for k, default in (("A", "0"), ("B", "0"), ("C", "1")):
        e = _expr(block.get(k, default), k)
        if e.depends_on("x"):
            raise ConfigError(f"{k} must depend on t only")
        fns.append(analytic(e, t0, axis))
    return PointTransform(fns[0], fns[1], fns[2], t0, axis)


def cmd_transform(config, tol, out=None):
    """Push a source problem (entry or expression) through (A, B, C)."""
    if ("entry" in config) == ("potential" in config):
        raise ConfigError("give exactly one of entry or potential as the source")
    if "entry" in config:
        src = build_entry(config)
        win = src.window
        vbar = src.V
        sols = list(src.solutions)
    else:
        if "solutions" in config and not isinstance(config["solutions"], dict):
            raise ConfigError("solutions must map labels to expression strings")
        if "params" in config:
            raise ConfigError("params only apply to a catalog entry source")
        win = _window(config, cat.Window(-6.0, 6.0, 257, 0.0, 1.0, 64))
        vbar = _expr(config["potential"], "potential")
        sols = [(k, _expr(v, f"solution {k}")) for k, v in config.get("solutions", {}).items()]
    grid, axis = win.grid, win.axis
    tr = _transform_from_config(config.get("transform", {}), axis)  # degenerate-scale -> exit 1
    V = transform_potential(tr, vbar)
    x, t = mesh(grid, axis)
    v = np.broadcast_to(np.asarray(V(x, t)), (axis.m + 1, grid.n))
    pushed = [(k, np.broadcast_to(pushforward_wavefunction(tr, p)(x, t), v.shape)) for k, p in sols]
    results = [_check("potential:imag", np.max(np.abs(np.imag(v))), tol["potential"])]
    if "expect_potential" in config:
        ref = np.broadcast_to(_expr(config["expect_potential"], "expect_potential")(x, t), v.shape)
        d = np.max(np.abs(v - ref)) / max(1.0, float(np.max(np.abs(ref))))
        results.append(_check("potential:expected", d, tol["potential"]))
    if "compare_entry" in config:
        block = config["compare_entry"]
        if not isinstance(block, dict) or set(block) - {"name", "params"}:
            raise ConfigError("compare_entry needs name and optional params")
        other = build_entry({"entry": block, "grid": config.get("grid", {}), "axis": config.get("axis", {})})
        ref = np.broadcast_to(np.asarray(other.V(x, t)), v.shape)
        d = np.max(np.abs(v - ref)) / max(1.0, float(np.max(np.abs(ref))))
        results.append(_check(f"potential:{other.name}", d, tol["potential"]))
        for k, p in pushed:
            try:
                q = other.solution(k)
            except KeyError:
                continue
            qv = np.broadcast_to(q(x, t), v.shape)
            d = np.max(np.abs(p - qv)) / max(1.0, float(np.max(np.abs(qv))))
            results.append(_check(f"wavefunction:{k}", d, tol["wavefunction"]))
    if out is not None:
        st, sx = _strides(config, grid, axis)
        sl = (slice(None, None, st), slice(None, None, sx))
        X, T = np.broadcast_arrays(x, t)
        head, cols = ["t", "x", "V"], [T[sl], X[sl], np.real(v[sl])]
        for k, p in pushed:
            head += [f"re_{k}", f"im_{k}"]
            cols += [p[sl].real, p[sl].imag]
        atomic_write(_side_path(out, ""), csv_text(head, cols))
    return results


def cmd_darboux(config, tol, out=None):
    entry = build_entry(config)
    if entry.seed is None:
        raise ConfigError(f"entry {entry.name} has no Darboux seed")
    grid, axis = entry.window.grid, entry.window.axis
    x, t = mesh(grid, axis)
    defect = check_reality(entry.seed, grid, axis)
    results = [_check("reality", defect, tol["reality"])]
    try:
        op, V1 = build_darboux(entry.seed, grid, axis)
    except XformError as exc:
        if exc.code == "reality-violated":
            return results
        raise
    v1 = np.broadcast_to(np.asarray(V1(x, t)), (axis.m + 1, grid.n))
    results.append(_check("im_V1", np.max(np.abs(v1.imag)), tol["im_V1"]))
    ref = None
    if "V1" in entry.extras:
        ref = np.broadcast_to(entry.extras["V1"](x, t), v1.shape)
        results.append(_check("V1_closed_form", np.max(np.abs(v1.real - ref)), tol["V1_closed_form"]))
    sols = [("seed", entry.seed.psi)] + [s for s in entry.solutions]
    psi1 = []
    x0 = float(config.get("x0", grid.x_min))
    for label, psi in sols:
        p0 = sample(psi, grid, axis)
        p1 = apply_L(op, p0)
        psi1.append((label, p1.values))
        if label == "seed":
            scale = max(1.0, float(np.max(np.abs(p0.values))))
            results.append(_check("kernel:seed", np.max(np.abs(p1.values)) / scale, tol["kernel"]))
            continue
        back = inverse_darboux(op, p1, x0=x0)
        fwd = apply_L(op, back)
        scale = max(1.0, float(np.max(np.abs(p1.values))))
        results.append(_check(f"roundtrip:{label}", np.max(np.abs(fwd.values - p1.values)) / scale, tol["roundtrip"]))
        if config.get("inverse") and out is not None:
            st, sx = _strides(config, grid, axis)
            sl = (slice(None, None, st), slice(None, None, sx))
            X, T = np.broadcast_arrays(x, t)
            atomic_write(
                _side_path(out, f"_inverse_{label}"),
                csv_text(["t", "x", "re_psi0", "im_psi0"], [T[sl], X[sl], back.values[sl].real, back.values[sl].imag]),
            )
    if out is not None:
        st, sx = _strides(config, grid, axis)
        sl = (slice(None, None, st), slice(None, None, sx))
        X, T = np.broadcast_arrays(x, t)
        head, cols = ["t", "x", "re_V1", "im_V1"], [T[sl], X[sl], v1[sl].real, v1[sl].imag]
        if ref is not None:
            head.append("V1_closed_form")
            cols.append(ref[sl])
        atomic_write(_side_path(out, "_V1"), csv_text(head, cols))
        head, cols = ["t", "x"], [T[sl], X[sl]]
        for label, p in psi1:
            head += [f"re_psi1_{label}", f"im_psi1_{label}"]
            cols += [p[sl].real, p[sl].imag]
        atomic_write(_side_path(out, "_psi1"), csv_text(head, cols))
    return results


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="tdse-xform", description="Exact TDSE solutions by Darboux and point transforms.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("config", nargs="?", help="JSON config (optional for catalog)")
    p.add_argument("--out", help="report path; CSV outputs are written beside it")
    p.add_argument("--check", help="comma-separated checks for verify")
    p.add_argument("--quiet", action="store_true", help="print nothing on stdout")
    return p


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    start = time.perf_counter()
    say = (lambda s: None) if args.quiet else (lambda s: sys.stdout.write(s))
    try:
        if args.config is None:
            if args.command != "catalog":
                raise ConfigError(f"{args.command} needs a config file")
            config = {}
        else:
            config = load_config(args.config, args.command)
        out = args.out or config.get("out")
        if args.command == "catalog":
            text, _ = cmd_catalog_list(config)
            if out:
                atomic_write(out, text)
            say(text)
            return 0
        tol = _tolerances(config)
        if args.command == "verify":
            checks = args.check.split(",") if args.check else config.get("checks", list(CHECKS))
            if not isinstance(checks, list) or not checks:
                raise ConfigError("checks must be a non-empty list")
            results = cmd_verify(config, checks, tol, out)
        elif args.command == "propagate":
            results = cmd_propagate(config, tol, out)
        elif args.command == "transform":
            results = cmd_transform(config, tol, out)
        else:
            results = cmd_darboux(config, tol, out)
        status, error = (0 if all(r["pass"] for r in results) else 1), None
    except ConfigError as exc:
        sys.stderr.write(f"tdse-xform: configuration error: {exc}\n")
        return 2
    except XformError as exc:
        sys.stderr.write(f"tdse-xform: {exc}\n")
        results, status, error = [], 1, {"code": exc.code, "message": exc.message}
    report = {
        "command": args.command,
        "config_digest": config_digest(config),
        "checks": results,
        "wall_time_s": time.perf_counter() - start,
    }
    if error is not None:
        report["error"] = error
    text = dump_json(report) + "\n"
    if out:
        atomic_write(out, text)
    say(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
