"""Command-line front end.

Subcommands map one-to-one onto the library surface:

* ``trajectory``  -- mean-field run (growth domain, or time domain with
  ``--time-domain``), CSV ``c,c_p,k`` plus a JSON sidecar carrying the
  resolved scenario, the stationary level the run approaches, and
  integrator diagnostics;
* ``fixed-point`` -- ascending/descending stationary levels and
  bistability, JSON report on stdout;
* ``sweep``       -- plateau surface over an (r_prag, r_comp) grid,
  long-format CSV ``r_prag,r_comp,k_final``;
* ``simulate``    -- seeded ensemble, CSV envelope
  ``step,c_mean,k_min,k_max,k_mean`` with per-epoch seeds in the sidecar;
* ``compare``     -- mean-field curve against the ensemble envelope,
  containment report with a pass/fail verdict.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 validation error, 3 numerical failure (including a failed ``compare``
verdict).  Output files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .dynamics import StepControl, Trajectory, integrate_in_c, integrate_in_time
from .errors import (
    ContamdynError,
    DegenerateState,
    ScenarioSyntaxError,
    SingularDenominator,
    StepBudgetExceeded,
    ValidationError,
)
from .montecarlo import run_ensemble
from .scenario import (
    PRESETS,
    SCENARIO_KEYS,
    Scenario,
    build_scenario,
    parse_pairs,
)
from .stability import (
    DEFAULT_SCAN_STEP,
    DEFAULT_TOL,
    DESCENT_START,
    asymptote_from,
    hysteresis,
    sweep_plateau,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the documented contract is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    """Locale-independent, 9 significant digits."""
    return format(float(x), ".9g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".contamdyn-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def _sidecar(command: str, scenario: Scenario, extra: dict) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "artifact": {"name": "contamdyn", "version": __version__},
        "command": command,
        "scenario": scenario.as_dict(),
        "derived": {"b_mean": scenario.b_mean, "k0": scenario.cp0 / scenario.c0},
    }
    doc.update(extra)
    return doc


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _sidecar_path(out_path: str) -> str:
    root, _ = os.path.splitext(out_path)
    return root + ".json"


def _fp_dict(res) -> dict:
    return {
        "k_star": res.k_star,
        "bracket": list(res.bracket),
        "f_residual": res.f_residual,
        "iterations": res.iterations,
        "mode": res.mode,
        "tangent": res.tangent,
    }


# ---------------------------------------------------------------------------
# scenario assembly: defaults < preset < scenario file < individual flags

_FLAG_KEYS = list(SCENARIO_KEYS)


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("scenario")
    group.add_argument("--scenario", metavar="FILE",
                       help="scenario file (key = value lines)")
    group.add_argument("--preset", choices=sorted(PRESETS),
                       help="load a reference configuration")
    group.add_argument("--p-err", type=float, help="creation error probability")
    group.add_argument("--b", type=int,
                       help="fixed base-concept count (sets b_min = b_max)")
    group.add_argument("--b-min", type=int, help="lower base-count bound")
    group.add_argument("--b-max", type=int, help="upper base-count bound")
    group.add_argument("--r-prag", type=float, help="pragmatic cleanup strength")
    group.add_argument("--r-comp", type=float, help="competing cleanup strength")
    group.add_argument("--c0", type=int, help="initial concept count")
    group.add_argument("--cp0", type=int, help="initial parasitic count")
    group.add_argument("--c-end", type=float,
                       help="growth-domain integration end (default 10*c0)")
    group.add_argument("--steps", type=int, help="simulation step budget")
    group.add_argument("--epochs", type=int, help="ensemble size")
    group.add_argument("--seed", type=int, help="master seed (64-bit unsigned)")
    group.add_argument("--checkpoint-every", type=int,
                       help="steps between recorded checkpoints")


def _scenario_from_args(args: argparse.Namespace) -> Scenario:
    values: dict = {}
    if args.preset:
        values.update(PRESETS[args.preset])
    if args.scenario:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read scenario file: {exc}") from exc
        values.update(parse_pairs(text))
    if args.b is not None:
        values["b_min"] = args.b
        values["b_max"] = args.b
    for key in _FLAG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return build_scenario(values)


def _parse_axis(text: str, name: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"{name} must be start:stop:count, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ValidationError(f"{name} must be start:stop:count, got {text!r}") from None
    if count < 1:
        raise ValidationError(f"{name} count must be >= 1")
    if count == 1 and start != stop:
        raise ValidationError(f"{name} with count 1 needs start == stop")
    return np.linspace(start, stop, count)


# ---------------------------------------------------------------------------
# plotting (lazy matplotlib; vector output, no interactive windows)

def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _plot_trajectory(path, traj: Trajectory, asymptote_k, normalize, c0):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    x = traj.c / c0 if normalize else traj.c
    ax.plot(x, traj.k, color="black", label="mean-field trajectory")
    ax.axhline(asymptote_k, color="tab:blue", linestyle="--",
               label=f"stationary level {asymptote_k:.4g}")
    ax.set_xlabel("c / c0" if normalize else "total concepts c")
    ax.set_ylabel("contamination k")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_envelope(path, env, normalize, c0, ode=None):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.fill_between(env.step, env.k_min, env.k_max, alpha=0.3,
                    color="tab:red", label="ensemble min/max")
    ax.plot(env.step, env.k_mean, color="tab:red", label="ensemble mean")
    if ode is not None:
        ax.plot(ode[0], ode[1], color="black", label="mean-field")
    ax.set_xlabel("step")
    ax.set_ylabel("contamination k")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _plot_sweep(path, grid):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(6.5, 5))
    rp, rc = grid.r_prag_axis, grid.r_comp_axis
    extent = None
    if len(rc) > 1 and len(rp) > 1:
        extent = [rc[0], rc[-1], rp[0], rp[-1]]
    img = ax.imshow(grid.values, origin="lower", aspect="auto",
                    vmin=0.0, vmax=1.0, extent=extent)
    fig.colorbar(img, ax=ax, label="final contamination")
    ax.set_xlabel("r_comp")
    ax.set_ylabel("r_prag")
    start = "clean" if grid.k0 == 0.0 else f"contaminated (k0={grid.k0:.4g})"
    ax.set_title(f"plateau surface, {start} start")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# ---------------------------------------------------------------------------
# subcommands

def cmd_trajectory(scenario: Scenario, args: argparse.Namespace) -> int:
    params = scenario.model_params()
    initial = scenario.initial_state()
    asym = asymptote_from(params, initial.k, args.scan_step, args.tol)
    if args.time_domain:
        traj = integrate_in_time(params, initial, float(scenario.steps), args.dt)
    else:
        traj = integrate_in_c(params, initial, scenario.c_end,
                              StepControl(dc=args.dc))
    c_scale = scenario.c0 if args.normalize else 1
    rows = ((_fmt(c / c_scale), _fmt(cp), _fmt(k))
            for c, cp, k in zip(traj.c, traj.c_p, traj.k))
    meta = _sidecar("trajectory", scenario, {
        "asymptote": _fp_dict(asym),
        "integrator": {**traj.meta, "clamp_count": traj.clamp_count,
                       "samples": len(traj)},
        "normalized": bool(args.normalize),
        "final": {"c": float(traj.c[-1]), "c_p": float(traj.c_p[-1]),
                  "k": traj.final_k},
    })
    if args.format == "json":
        meta["samples"] = {
            "c": [float(v) / c_scale for v in traj.c],
            "c_p": [float(v) for v in traj.c_p],
            "k": [float(v) for v in traj.k],
        }
        out = args.out or "trajectory.json"
        _atomic_write(out, _dump_json(meta))
    else:
        out = args.out or "trajectory.csv"
        _write_csv(out, ["c", "c_p", "k"], rows)
        _atomic_write(_sidecar_path(out), _dump_json(meta))
    if args.emit_plot:
        _plot_trajectory(args.emit_plot, traj, asym.k_star,
                         args.normalize, scenario.c0)
    print(f"wrote {out}: {len(traj)} samples, final k = {traj.final_k:.6g}, "
          f"stationary level {asym.k_star:.6g}")
    return EXIT_OK


def cmd_fixed_point(scenario: Scenario, args: argparse.Namespace) -> int:
    params = scenario.model_params()
    result = hysteresis(params, tol=args.tol, scan_step=args.scan_step)
    report = _sidecar("fixed-point", scenario, {
        "k_up": result.k_up,
        "k_down": result.k_down,
        "bistable": result.bistable,
        "residuals": {"up": result.up.f_residual, "down": result.down.f_residual},
        "brackets": {"up": list(result.up.bracket),
                     "down": list(result.down.bracket)},
        "ascending": _fp_dict(result.up),
        "descending": _fp_dict(result.down),
    })
    text = _dump_json(report)
    sys.stdout.write(text)
    if args.out:
        _atomic_write(args.out, text)
    return EXIT_OK


def cmd_sweep(scenario: Scenario, args: argparse.Namespace) -> int:
    rp_axis = _parse_axis(args.r_prag_axis, "--r-prag-axis")
    rc_axis = _parse_axis(args.r_comp_axis, "--r-comp-axis")
    k0 = 0.0 if args.k0 == "clean" else DESCENT_START
    grid = sweep_plateau(scenario.model_params(), rp_axis, rc_axis, k0,
                         tol=args.tol, scan_step=args.scan_step)
    rows = []
    for i, rp in enumerate(grid.r_prag_axis):
        for j, rc in enumerate(grid.r_comp_axis):
            rows.append((_fmt(rp), _fmt(rc), _fmt(grid.values[i, j])))
    out = args.out or "sweep.csv"
    _write_csv(out, ["r_prag", "r_comp", "k_final"], rows)
    meta = _sidecar("sweep", scenario, {
        "k0": grid.k0,
        "start": args.k0,
        "r_prag_axis": [float(v) for v in grid.r_prag_axis],
        "r_comp_axis": [float(v) for v in grid.r_comp_axis],
        "tol": args.tol,
        "scan_step": args.scan_step,
    })
    _atomic_write(_sidecar_path(out), _dump_json(meta))
    if args.emit_plot:
        _plot_sweep(args.emit_plot, grid)
    print(f"wrote {out}: {grid.values.size} cells "
          f"({len(rp_axis)} x {len(rc_axis)}), {args.k0} start")
    return EXIT_OK


def cmd_simulate(scenario: Scenario, args: argparse.Namespace) -> int:
    env = run_ensemble(scenario.mc_config(), workers=args.workers)
    c_scale = scenario.c0 if args.normalize else 1
    rows = ((str(int(s)), _fmt(cm / c_scale), _fmt(kmin), _fmt(kmax), _fmt(kmean))
            for s, cm, kmin, kmax, kmean
            in zip(env.step, env.c_mean, env.k_min, env.k_max, env.k_mean))
    out = args.out or "envelope.csv"
    _write_csv(out, ["step", "c_mean", "k_min", "k_max", "k_mean"], rows)
    meta = _sidecar("simulate", scenario, {
        "epoch_seeds": env.epoch_seeds,
        "workers": args.workers,
        "checkpoints": len(env.step),
        "normalized": bool(args.normalize),
        "final": {"c_mean": float(env.c_mean[-1]),
                  "k_min": float(env.k_min[-1]),
                  "k_max": float(env.k_max[-1]),
                  "k_mean": float(env.k_mean[-1])},
    })
    _atomic_write(_sidecar_path(out), _dump_json(meta))
    if args.emit_plot:
        _plot_envelope(args.emit_plot, env, args.normalize, scenario.c0)
    print(f"wrote {out}: {len(env.step)} checkpoints from "
          f"{scenario.epochs} epochs, final k_mean = {env.k_mean[-1]:.6g}")
    return EXIT_OK


def cmd_compare(scenario: Scenario, args: argparse.Namespace) -> int:
    env = run_ensemble(scenario.mc_config(), workers=args.workers)
    params = scenario.model_params()
    initial = scenario.initial_state()
    ctl = StepControl(dc=args.dc)
    c_target = max(float(np.max(env.c_mean)) + ctl.dc, scenario.c0 + ctl.dc)
    ode = integrate_in_c(params, initial, c_target, ctl)
    ode_k = np.interp(env.c_mean, ode.c, ode.k)

    c_limit = args.c_limit if args.c_limit is not None else 5.0 * scenario.c0
    sel = env.c_mean <= c_limit
    if not np.any(sel):
        raise ValidationError(f"no checkpoints with c_mean <= {c_limit!r}")
    below = np.clip(env.k_min - ode_k, 0.0, None)
    above = np.clip(ode_k - env.k_max, 0.0, None)
    deviation = np.maximum(below, above)
    inside = (ode_k >= env.k_min - args.band_slack) & \
             (ode_k <= env.k_max + args.band_slack)
    containment = float(np.mean(inside[sel]))
    passed = containment >= args.min_containment

    report = _sidecar("compare", scenario, {
        "band_slack": args.band_slack,
        "min_containment": args.min_containment,
        "c_limit": c_limit,
        "checkpoints": int(len(env.step)),
        "checkpoints_within_limit": int(np.count_nonzero(sel)),
        "containment_fraction": containment,
        "max_deviation": float(deviation[sel].max()),
        "pass": passed,
        "epoch_seeds": env.epoch_seeds,
    })
    text = _dump_json(report)
    sys.stdout.write(text)
    if args.out:
        _atomic_write(args.out, text)
    if args.emit_plot:
        step_for_c = np.interp(ode.c, env.c_mean, env.step)
        _plot_envelope(args.emit_plot, env, False, scenario.c0,
                       ode=(step_for_c, ode.k))
    return EXIT_OK if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="contamdyn",
                     description="Contamination dynamics of a growing "
                                 "knowledge space")
    parser.add_argument("--version", action="version",
                        version=f"contamdyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_traj = sub.add_parser("trajectory",
                            help="integrate the mean-field contamination curve")
    _add_scenario_args(p_traj)
    p_traj.add_argument("--time-domain", action="store_true",
                        help="integrate over time instead of concept count "
                             "(handles cleanup rates >= 1)")
    p_traj.add_argument("--dt", type=float, default=1.0,
                        help="time-domain step size (default 1)")
    p_traj.add_argument("--dc", type=float, default=0.25,
                        help="growth-domain step size (default 0.25)")
    p_traj.add_argument("--normalize", action="store_true",
                        help="divide the c column by c0")
    p_traj.add_argument("--format", choices=["csv", "json"], default="csv")
    p_traj.add_argument("--out", help="output path (default trajectory.csv)")
    p_traj.add_argument("--emit-plot", metavar="PATH",
                        help="write a vector plot of the run")
    p_traj.add_argument("--scan-step", type=float, default=DEFAULT_SCAN_STEP)
    p_traj.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_traj.set_defaults(func=cmd_trajectory)

    p_fp = sub.add_parser("fixed-point",
                          help="ascending/descending stationary levels and "
                               "bistability")
    _add_scenario_args(p_fp)
    p_fp.add_argument("--scan-step", type=float, default=DEFAULT_SCAN_STEP)
    p_fp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_fp.add_argument("--out", help="also write the JSON report here")
    p_fp.set_defaults(func=cmd_fixed_point)

    p_sweep = sub.add_parser("sweep",
                             help="final contamination over an "
                                  "(r_prag, r_comp) grid")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--r-prag-axis", required=True, metavar="START:STOP:COUNT")
    p_sweep.add_argument("--r-comp-axis", required=True, metavar="START:STOP:COUNT")
    p_sweep.add_argument("--k0", choices=["clean", "contaminated"],
                         default="clean",
                         help="start level: clean (ascending) or "
                              "contaminated (descending)")
    p_sweep.add_argument("--scan-step", type=float, default=DEFAULT_SCAN_STEP)
    p_sweep.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_sweep.add_argument("--out", help="output path (default sweep.csv)")
    p_sweep.add_argument("--emit-plot", metavar="PATH",
                         help="write a heatmap of the surface")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate",
                           help="seeded stochastic ensemble with envelope output")
    _add_scenario_args(p_sim)
    p_sim.add_argument("--workers", type=int, default=1,
                       help="epoch workers; results are identical for any value")
    p_sim.add_argument("--normalize", action="store_true",
                       help="divide the c_mean column by c0")
    p_sim.add_argument("--out", help="output path (default envelope.csv)")
    p_sim.add_argument("--emit-plot", metavar="PATH",
                       help="write an envelope band plot")
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare",
                           help="check the mean-field curve against the "
                                "ensemble envelope")
    _add_scenario_args(p_cmp)
    p_cmp.add_argument("--band-slack", type=float, default=0.02,
                       help="tolerance added around the min/max band "
                            "(default 0.02)")
    p_cmp.add_argument("--min-containment", type=float, default=0.95,
                       help="required fraction of checkpoints inside the "
                            "band (default 0.95)")
    p_cmp.add_argument("--c-limit", type=float, default=None,
                       help="restrict the verdict to checkpoints with "
                            "c_mean <= this (default 5*c0)")
    p_cmp.add_argument("--dc", type=float, default=0.25)
    p_cmp.add_argument("--workers", type=int, default=1)
    p_cmp.add_argument("--out", help="also write the JSON report here")
    p_cmp.add_argument("--emit-plot", metavar="PATH",
                       help="write an overlay plot of curve and envelope")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = _scenario_from_args(args)
        return args.func(scenario, args)
    except (ValidationError, ScenarioSyntaxError) as exc:
        print(f"contamdyn: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SingularDenominator as exc:
        print(f"contamdyn: numerical failure: {exc}; rerun with --time-domain "
              "to use integrate_in_time", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DegenerateState, StepBudgetExceeded) as exc:
        print(f"contamdyn: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ContamdynError as exc:
        print(f"contamdyn: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
