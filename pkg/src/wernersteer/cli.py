"""Command-line front end: ``wernersteer {state,bounds,curves,simulate,zones,keyrate}``.

Numbers are written with 9 significant digits.  Data go to ``--out`` (or
stdout), diagnostics to stderr.  When ``--out`` is given a
``<out>.manifest.json`` sidecar records the command, parameters and seed.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import math
import re
import sys

import numpy as np

from . import __version__, bounds, chsh, experiment, states, steering
from .errors import InvalidParameterError

ZONES = ("bell-nonlocal", "steerable-I", "steerable-II", "undetected", "grey-violation")

_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?$")


# --- argument parsing ------------------------------------------------------

def parse_angle(text: str) -> float:
    """Angle in radians from forms like '0.3', '0.3rad', '22.5deg', 'pi' or '-3pi/4'."""
    s = text.strip().lower().replace(" ", "")
    scale = 1.0
    if s.endswith("deg"):
        s, scale = s[:-3], math.pi / 180.0
    elif s.endswith("rad"):
        s = s[:-3]
    m = _PI_RE.match(s)
    if m:
        if scale != 1.0:
            raise argparse.ArgumentTypeError(f"'pi' cannot carry a degree suffix: {text!r}")
        coef = m.group(1)
        coef = -1.0 if coef == "-" else 1.0 if coef in ("", "+") else float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / den
    try:
        return float(s) * scale
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def unit_interval(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{v} outside [0, 1]")
    return v


def parse_sweep(text: str, item=float):
    """'start:stop:count' inclusive grid, or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([item(parts[0])])
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}")
    try:
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"count must be an integer in {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("count must be at least 1")
    return np.linspace(item(parts[0]), item(parts[1]), count)


def unit_sweep(text):
    grid = parse_sweep(text)
    if np.any(grid < 0) or np.any(grid > 1):
        raise argparse.ArgumentTypeError(f"grid {text!r} leaves [0, 1]")
    return grid


def angle_sweep(text):
    return parse_sweep(text, parse_angle)


def kinds_list(text):
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise argparse.ArgumentTypeError("at least one kind is required")
    aliases = {"ent": "entanglement", "entanglement": "entanglement", "chsh": "chsh",
               "steering_i": "steering_I", "i": "steering_I",
               "steering_ii": "steering_II", "ii": "steering_II"}
    out = []
    for n in names:
        key = aliases.get(n.lower())
        if key is None:
            raise argparse.ArgumentTypeError(f"unknown kind {n!r}")
        out.append(bounds.BoundKind(key))
    return [k for k in bounds.HIERARCHY if k in out]


def eta_list(text):
    if ":" in text:
        vals = parse_sweep(text)
    else:
        vals = [float(t) for t in text.split(",") if t.strip()]
    if not len(vals) or any(not 0 <= v <= 1 for v in vals):
        raise argparse.ArgumentTypeError(f"bad eta list {text!r}")
    return list(vals)


# --- output ----------------------------------------------------------------

def fmt(v):
    if v is None:
        return "unreachable"
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.9g}"


def _json_value(v):
    if v is None or isinstance(v, (str, bool)):
        return v
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.9g}")


def render(rows, columns, fmt_name):
    if fmt_name == "json":
        data = [{c: _json_value(r[c]) for c in columns} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def emit(text, args):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    manifest = {
        "command": args.command,
        "parameters": {k: _manifest_value(v) for k, v in sorted(vars(args).items())
                       if k not in ("func", "command")},
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")


def _manifest_value(v):
    if isinstance(v, np.ndarray):
        return [float(x) for x in v]
    if isinstance(v, list):
        return [_manifest_value(x) for x in v]
    if isinstance(v, (bounds.BoundKind,)):
        return v.value
    return v


def _state(args, alpha=None, p=None):
    return states.StateParams(alpha=args.alpha if alpha is None else alpha,
                              p=args.p if p is None else p, eta=args.eta, phi=args.phi)


def _alpha_values(args):
    """alpha grid plus optional HWP angles from --chi / --grid / --alpha."""
    if getattr(args, "chi", None) is not None:
        chis = args.chi
        return [states.hwp_to_alpha(c) for c in chis], list(chis)
    if getattr(args, "grid", None) is not None:
        return list(args.grid), None
    return [args.alpha], None


def _outcome_label(o):
    return f"{o[0]}{o[1]}"


# --- commands --------------------------------------------------------------

def cmd_state(args):
    if args.chi is not None:
        args.alpha = states.hwp_to_alpha(args.chi[0])
    st = _state(args)
    rho = states.build_state(st)
    conc = states.concurrence(st)
    vz, vx = states.visibilities(st)
    record = {"alpha": st.alpha, "p": st.p, "eta": st.eta, "phi": st.phi,
              "concurrence": conc, "V_z": vz, "V_x": vx,
              "S_max": chsh.max_chsh_value(st)}
    if args.format == "json":
        out = {k: _json_value(v) for k, v in record.items()}
        out["rho_real"] = [[_json_value(x) for x in row] for row in rho.real]
        out["rho_imag"] = [[_json_value(x) for x in row] for row in rho.imag]
        emit(json.dumps(out, indent=1) + "\n", args)
        return
    if args.format == "csv":
        emit(render([record], list(record), "csv"), args)
        return
    lines = [f"state: alpha={fmt(st.alpha)} p={fmt(st.p)} eta={fmt(st.eta)} phi={fmt(st.phi)}",
             "density matrix (basis 00, 01, 10, 11):"]
    clean = np.where(np.abs(rho.real) < 1e-15, 0.0, rho.real) + 1j * np.where(
        np.abs(rho.imag) < 1e-15, 0.0, rho.imag)
    for row in clean:
        lines.append("  " + "  ".join(f"{fmt(z.real):>12}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"
                                      for z in row))
    lines += [f"concurrence: {fmt(conc)}", f"V_z: {fmt(vz)}", f"V_x: {fmt(vx)}",
              f"S_max: {fmt(record['S_max'])}"]
    emit("\n".join(lines) + "\n", args)


BOUND_COLUMNS = {
    bounds.BoundKind.ENTANGLEMENT: "p_entanglement",
    bounds.BoundKind.STEERING_II: "p_steering_II",
    bounds.BoundKind.STEERING_I: "p_steering_I",
    bounds.BoundKind.CHSH: "p_chsh",
}


def cmd_bounds(args):
    grid = args.grid if args.grid is not None else bounds.default_alpha_grid()
    curves = bounds.hierarchy_curves(args.eta, grid, args.kinds)
    columns = ["alpha"] + [BOUND_COLUMNS[c.kind] for c in curves]
    rows = []
    for i, a in enumerate(grid):
        row = {"alpha": float(a)}
        for c in curves:
            row[BOUND_COLUMNS[c.kind]] = c.points[i][1]
        rows.append(row)
    emit(render(rows, columns, args.format), args)


CURVE_COLUMNS = ["alpha", "V_z", "V_x", "concurrence", "S", "F_I", "F_II",
                 "theta_B", "theta_B_prime", "theta_S_I", "theta_T_I", "outcome_I",
                 "theta_S_II", "theta_T_II", "outcome_II"]


def curve_row(st):
    vz, vx = states.visibilities(st)
    tb, tbp = chsh.optimal_bob_angles(st)
    r1, r2 = steering.scenario_I(st), steering.scenario_II(st)
    a1, a2 = r1.alice_angles[r1.chosen_outcome], r2.alice_angles[r2.chosen_outcome]
    return {"alpha": st.alpha, "V_z": vz, "V_x": vx, "concurrence": states.concurrence(st),
            "S": chsh.max_chsh_value(st), "F_I": r1.f_value, "F_II": r2.f_value,
            "theta_B": tb, "theta_B_prime": tbp,
            "theta_S_I": a1[0], "theta_T_I": a1[1], "outcome_I": _outcome_label(r1.chosen_outcome),
            "theta_S_II": a2[0], "theta_T_II": a2[1], "outcome_II": _outcome_label(r2.chosen_outcome)}


def cmd_curves(args):
    alphas, _ = _alpha_values(args)
    rows = [curve_row(_state(args, alpha=a)) for a in alphas]
    emit(render(rows, CURVE_COLUMNS, args.format), args)


def _sim_columns(scenarios, with_chi):
    cols = ["alpha"] + (["chi", "delta_alpha"] if with_chi else [])
    names = ["V_z", "V_x", "S"] + [f"F_{s}" for s in scenarios]
    for n in names:
        cols += [n, f"sigma_{n}", f"{n}_exact", f"residual_{n}"]
    return cols


def cmd_simulate(args):
    alphas, chis = _alpha_values(args)
    cfg = experiment.SimConfig(mean_total_counts=args.counts, rng_seed=args.seed)
    recs = experiment.simulate_sweep([_state(args, alpha=a) for a in alphas], cfg)
    scenarios = [args.scenario] if args.scenario else ["I", "II"]
    keys = {"V_z": "vz", "V_x": "vx", "S": "s", "F_I": "f_i", "F_II": "f_ii"}
    rows = []
    for i, rec in enumerate(recs):
        row = {"alpha": alphas[i]}
        if chis is not None:
            row["chi"] = chis[i]
            row["delta_alpha"] = experiment.alpha_error(chis[i], args.delta_chi)
        for name in ["V_z", "V_x", "S"] + [f"F_{s}" for s in scenarios]:
            est, ex = getattr(rec, keys[name]), getattr(rec.exact, keys[name])
            row[name], row[f"sigma_{name}"], row[f"{name}_exact"] = est.value, est.sigma, ex
            row[f"residual_{name}"] = est.value - ex
        rows.append(row)
    emit(render(rows, _sim_columns(scenarios, chis is not None), args.format), args)


def zone_label(s, f_i, f_ii):
    steer_i = f_i > steering.F_LIM_I
    steer_ii = f_ii > steering.F_LIM_II
    if s > chsh.CHSH_LIMIT:
        return "bell-nonlocal" if (steer_i or steer_ii) else "grey-violation"
    if steer_i:
        return "steerable-I"
    if steer_ii:
        return "steerable-II"
    return "undetected"


def cmd_zones(args):
    alphas, _ = _alpha_values(args)
    etas = args.eta_grid if args.eta_grid is not None else [args.eta]
    rows = []
    for eta in etas:
        for p in args.p_values:
            sts = [states.StateParams(a, p, eta, args.phi) for a in alphas]
            if args.simulate:
                cfg = experiment.SimConfig(mean_total_counts=args.counts, rng_seed=args.seed)
                vals = [(r.s.value, r.f_i.value, r.f_ii.value)
                        for r in experiment.simulate_sweep(sts, cfg)]
            else:
                vals = [(chsh.max_chsh_value(st), steering.scenario_I(st).f_value,
                         steering.scenario_II(st).f_value) for st in sts]
            for st, (s, f1, f2) in zip(sts, vals):
                rows.append({"alpha": st.alpha, "p": p, "eta": eta, "S": s, "F_I": f1,
                             "F_II": f2, "zone": zone_label(s, f1, f2)})
    grey = [r for r in rows if r["zone"] == "grey-violation"]
    for r in grey:
        print(f"GREY-ZONE VIOLATION: alpha={fmt(r['alpha'])} p={fmt(r['p'])} eta={fmt(r['eta'])} "
              f"S={fmt(r['S'])} F_I={fmt(r['F_I'])} F_II={fmt(r['F_II'])}", file=sys.stderr)
    emit(render(rows, ["alpha", "p", "eta", "S", "F_I", "F_II", "zone"], args.format), args)


def cmd_keyrate(args):
    if args.f is not None:
        f_i = args.f
    else:
        if args.alpha is None and args.chi is None:
            raise InvalidParameterError("give --f or state parameters (--alpha/--chi, --p, --eta, --phi)")
        if args.chi is not None:
            args.alpha = states.hwp_to_alpha(args.chi[0])
        f_i = steering.scenario_I(_state(args)).f_value
    r = steering.keyrate(f_i)
    if args.format == "json":
        emit(json.dumps({"F_I": _json_value(f_i), "rate": _json_value(r), "positive": r > 0}) + "\n", args)
    else:
        emit(f"F_I: {fmt(f_i)}\nrate: {fmt(r)}\npositive: {fmt(r > 0)}\n", args)


# --- parser ----------------------------------------------------------------

def _add_state(p, alpha_required=False, with_grid=False, chi_sweep=False):
    p.add_argument("--alpha", type=unit_interval, default=None if alpha_required else 0.5,
                   help="weight of |00> (default 0.5)")
    p.add_argument("--chi", type=angle_sweep if chi_sweep else (lambda t: [parse_angle(t)]),
                   default=None, help="pump HWP angle, sets alpha = cos^2(2 chi)"
                   + ("; start:stop:count sweeps" if chi_sweep else ""))
    p.add_argument("--p", type=unit_interval, default=1.0, help="non-white-noise fraction")
    p.add_argument("--eta", type=unit_interval, default=1.0, help="dephasing weight")
    p.add_argument("--phi", type=parse_angle, default=0.0, help="phase; accepts 'pi'")
    if with_grid:
        p.add_argument("--grid", type=unit_sweep, default=None,
                       help="alpha sweep start:stop:count (inclusive)")


def _add_output(p, formats=("csv", "json"), default="csv"):
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", default=None, metavar="PATH", help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="wernersteer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="density matrix, concurrence and visibilities")
    _add_state(p)
    _add_output(p, ("text", "csv", "json"), "text")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("bounds", help="p thresholds versus alpha")
    p.add_argument("--eta", type=unit_interval, default=1.0)
    p.add_argument("--grid", type=unit_sweep, default=None, help="alpha grid (default 0:1:201)")
    p.add_argument("--kinds", type=kinds_list, default=list(bounds.HIERARCHY),
                   help="comma list of entanglement,steering_II,steering_I,chsh")
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("curves", help="exact S, F_I, F_II and optimal angles versus alpha")
    _add_state(p, with_grid=True, chi_sweep=True)
    _add_output(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("simulate", help="Monte Carlo coincidence experiment")
    _add_state(p, with_grid=True, chi_sweep=True)
    p.add_argument("--counts", type=float, default=experiment.DEFAULT_MEAN_COUNTS,
                   help="mean coincidence total per setting")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenario", choices=("I", "II"), default=None)
    p.add_argument("--delta-chi", type=parse_angle, default=experiment.ONE_DEGREE,
                   help="HWP setting error (default 1deg)")
    _add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("zones", help="classify states into correlation zones")
    _add_state(p, with_grid=True)
    p.set_defaults(p_values=None)
    p.add_argument("--p-grid", dest="p_values", type=unit_sweep, default=None,
                   help="p sweep start:stop:count (default: --p)")
    p.add_argument("--eta-grid", type=eta_list, default=None,
                   help="comma list or start:stop:count of eta values")
    p.add_argument("--simulate", action="store_true", help="classify simulated estimates")
    p.add_argument("--counts", type=float, default=experiment.DEFAULT_MEAN_COUNTS)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    p.set_defaults(func=cmd_zones)

    p = sub.add_parser("keyrate", help="key-rate bound from F_I")
    p.add_argument("--f", type=unit_interval, default=None, help="measured F_I")
    _add_state(p, alpha_required=True)
    _add_output(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_keyrate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "zones" and args.p_values is None:
        args.p_values = [args.p]
    try:
        args.func(args)
    except InvalidParameterError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"wernersteer: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
