"""Command-line interface: reproducible sweeps, scans, trajectories, analytic
tables, and the acceptance-check runner.

Every file-producing command writes a JSON sidecar holding the fully resolved
parameters next to its output; `--config sidecar.json` re-runs a command from
such a sidecar and reproduces the output byte for byte.  Exit codes: 0 on
success, 1 when validation checks fail, 2 for bad arguments, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, acceptance, analytic
from .bloch import bloch_system, trajectory, write_trajectory_csv
from .epmetrics import inner_product_metric
from .expm import expm_batch
from .liouvillian import ModelGenerators, postselected_hamiltonian
from .model import DISSIPATORS, FAMILIES, build_family_model, static_model
from .propagator import _spectrum_from_eig
from .sweep import (
    SweepSpec,
    extract_contours,
    load_sidecar,
    run_sweep,
    write_phase_csv,
    write_sidecar,
)

ENV_OUTDIR = "FLOQUET_EP_OUTDIR"
ENV_THREADS = "FLOQUET_EP_THREADS"


class CliError(Exception):
    """Bad command-line input (exit code 2)."""


def parse_range(text: str) -> tuple[float, float, int]:
    """Parse an inclusive lo:hi:count range specification."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"range must be lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"bad range {text!r}: {exc}") from None
    return lo, hi, count


def _range_values(rng: tuple[float, float, int]) -> np.ndarray:
    lo, hi, count = rng
    if count < 1:
        raise CliError("range count must be >= 1")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def _out_path(name: str) -> Path:
    path = Path(name)
    outdir = os.environ.get(ENV_OUTDIR)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    return path


def _default_threads() -> int:
    env = os.environ.get(ENV_THREADS)
    return max(1, int(env)) if env else 1


def _sidecar(command: str, params: dict, outputs: dict, extra: dict | None = None) -> dict:
    payload = {
        "tool": "floquet-ep",
        "version": __version__,
        "command": command,
        "params": params,
        "outputs": outputs,
    }
    if extra:
        payload.update(extra)
    return payload


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _run_sweep_params(params: dict) -> int:
    spec = SweepSpec.from_dict(params["spec"])
    threads = int(params.get("threads", 1))
    out = _out_path(params["out"])
    pd = run_sweep(spec, threads=threads)
    contours = extract_contours(pd, threshold=params.get("contour_threshold", 0.999))
    csv_path = out.with_suffix(".csv")
    write_phase_csv(pd, csv_path)
    write_sidecar(
        out.with_suffix(".json"),
        _sidecar(
            "sweep",
            params,
            {"csv": csv_path.name},
            {"contours": [[g, om] for g, om in contours]},
        ),
    )
    print(f"wrote {csv_path} ({len(pd.gammas) * len(pd.omegas)} cells)")
    return 0


def cmd_sweep(args) -> int:
    if args.config:
        return _run_sweep_params(load_sidecar(args.config)["params"])
    params = {
        "spec": SweepSpec(
            family=args.family,
            dissipator=args.dissipator,
            gamma=parse_range(args.gamma),
            omega=parse_range(args.omega),
            delta=args.delta,
            duty=args.duty,
            steps=args.steps,
        ).to_dict(),
        "threads": args.threads,
        "contour_threshold": args.contour_threshold,
        "out": args.out,
    }
    return _run_sweep_params(params)


# ---------------------------------------------------------------------------
# static-scan
# ---------------------------------------------------------------------------

def _run_static_params(params: dict) -> int:
    gammas = _range_values(tuple(params["gamma"]))
    dissipator = params["dissipator"]
    period = params["period"]
    out = _out_path(params["out"])
    rows = []
    if params["target"] == "liouvillian":
        gen = ModelGenerators.from_model(static_model(dissipator, 1.0))
        lh, dpart = gen.h_part, gen.diss_parts[0]
        gs = expm_batch(period * (lh[None] + gammas[:, None, None] * dpart))
        eigvals, eigvecs = np.linalg.eig(gs)
        header = ["gamma", "ip"] + [f"lambda_re_{k}" for k in range(1, 5)] + [
            f"lambda_im_{k}" for k in range(1, 5)
        ]
        for i, g in enumerate(gammas):
            sp = _spectrum_from_eig(gs[i], eigvals[i], eigvecs[i].copy(), 1e-10, 1e-8)
            rows.append(
                [_fmt(g), _fmt(inner_product_metric(sp))]
                + [_fmt(v) for v in sp.eigenvalues.real]
                + [_fmt(v) for v in sp.eigenvalues.imag]
            )
    else:
        header = ["gamma", "splitting", "eig_re_1", "eig_im_1", "eig_re_2", "eig_im_2"]
        for g in gammas:
            ev = np.linalg.eigvals(postselected_hamiltonian(static_model(dissipator, float(g))))
            ev = ev[np.argsort(ev.real)]
            rows.append(
                [_fmt(g), _fmt(abs(ev[0] - ev[1])),
                 _fmt(ev[0].real), _fmt(ev[0].imag), _fmt(ev[1].real), _fmt(ev[1].imag)]
            )
    csv_path = out.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    write_sidecar(out.with_suffix(".json"), _sidecar("static-scan", params, {"csv": csv_path.name}))
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def cmd_static_scan(args) -> int:
    if args.config:
        return _run_static_params(load_sidecar(args.config)["params"])
    params = {
        "dissipator": args.dissipator,
        "gamma": list(parse_range(args.gamma)),
        "target": args.target,
        "period": args.period,
        "out": args.out,
    }
    return _run_static_params(params)


# ---------------------------------------------------------------------------
# trajectory
# ---------------------------------------------------------------------------

def _run_trajectory_params(params: dict) -> int:
    model = build_family_model(
        params["family"], params["dissipator"], params["gamma"], params["omega"],
        params["delta"], params["duty"],
    )
    times, states = trajectory(
        bloch_system(model),
        np.array(params["s0"], dtype=float),
        params["t_end"],
        params["sample_dt"],
        stroboscopic=params["stroboscopic"],
    )
    out = _out_path(params["out"])
    csv_path = out.with_suffix(".csv")
    write_trajectory_csv(csv_path, times, states)
    write_sidecar(out.with_suffix(".json"), _sidecar("trajectory", params, {"csv": csv_path.name}))
    print(f"wrote {csv_path} ({len(times)} samples)")
    return 0


def cmd_trajectory(args) -> int:
    if args.config:
        return _run_trajectory_params(load_sidecar(args.config)["params"])
    try:
        s0 = [float(x) for x in args.s0.split(",")]
    except ValueError:
        raise CliError(f"bad --s0 {args.s0!r}; expected x,y,z") from None
    if len(s0) != 3:
        raise CliError("--s0 needs exactly three components")
    params = {
        "family": args.family,
        "dissipator": args.dissipator,
        "gamma": args.gamma,
        "omega": args.omega,
        "delta": args.delta,
        "duty": args.duty,
        "s0": s0,
        "t_end": args.t_end,
        "sample_dt": args.sample_dt,
        "stroboscopic": args.stroboscopic,
        "out": args.out,
    }
    return _run_trajectory_params(params)


# ---------------------------------------------------------------------------
# analytic
# ---------------------------------------------------------------------------

def _run_analytic_params(params: dict) -> int:
    out = _out_path(params["out"])
    csv_path = out.with_suffix(".csv")
    mode = params["mode"]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if mode == "contour":
            omegas = _range_values(tuple(params["omega"]))
            tables = [analytic.ep_contour_square_drive(float(om)) for om in omegas]
            width = max((len(t) for t in tables), default=0)
            writer.writerow(["omega"] + [f"gamma_root_{k}" for k in range(1, width + 1)])
            for om, roots in zip(omegas, tables):
                row = [_fmt(om)] + [_fmt(r) for r in roots]
                row += [""] * (width - len(roots))
                writer.writerow(row)
        elif mode == "ladder":
            family = params["family"]
            if family == "diss-even":
                ladder = analytic.dissipation_even_resonances(params["max_index"])
            else:
                ladder = analytic.resonance_ladder(family, params["dissipator"], params["max_index"])
            writer.writerow(["family", "dissipator", "index", "omega", "note"])
            for idx, om in ladder.entries:
                writer.writerow([ladder.family, ladder.dissipator, str(idx), _fmt(om), ladder.note])
        else:
            plus, minus = analytic.ep_slopes(params["family"], params["dissipator"], params["index"])
            writer.writerow(["family", "dissipator", "index", "slope_plus", "slope_minus"])
            writer.writerow([params["family"], params["dissipator"], str(params["index"]), _fmt(plus), _fmt(minus)])
            print(f"slopes: {plus:+g} / {minus:+g}")
    write_sidecar(out.with_suffix(".json"), _sidecar("analytic", params, {"csv": csv_path.name}))
    print(f"wrote {csv_path}")
    return 0


def cmd_analytic(args) -> int:
    if args.config:
        return _run_analytic_params(load_sidecar(args.config)["params"])
    modes = [m for m, flag in (("contour", args.contour), ("ladder", args.ladder), ("slopes", args.slopes)) if flag]
    if len(modes) != 1:
        raise CliError("pick exactly one of --contour / --ladder / --slopes")
    params: dict = {"mode": modes[0], "out": args.out}
    if args.contour:
        if args.contour != "square-drive":
            raise CliError("only the square-drive contour equation is available")
        if not args.omega:
            raise CliError("--contour needs --omega lo:hi:count")
        params["omega"] = list(parse_range(args.omega))
    elif args.ladder:
        params["family"] = args.ladder
        params["dissipator"] = args.dissipator
        params["max_index"] = args.max_index
    else:
        family, dissipator, index = args.slopes
        params.update({"family": family, "dissipator": dissipator, "index": int(index)})
    return _run_analytic_params(params)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    if args.list:
        for name in acceptance.CHECKS:
            print(name)
        return 0
    names = args.only or None
    try:
        results = acceptance.run_checks(names, seed=args.seed)
    except KeyError as exc:
        raise CliError(str(exc)) from None
    print(acceptance.format_table(results))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-ep",
        description="Exceptional-point phase diagrams of periodically driven/damped qubit dynamics (J = 1 units).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="IP(gamma, omega) phase-diagram sweep to CSV")
    p.add_argument("--config", help="re-run from a sidecar JSON (other options ignored)")
    p.add_argument("--family", choices=FAMILIES, default="drive-cos")
    p.add_argument("--dissipator", choices=DISSIPATORS, default="minus")
    p.add_argument("--gamma", default="0:10:200", help="lo:hi:count (inclusive)")
    p.add_argument("--omega", default="0.05:12:200", help="lo:hi:count (inclusive)")
    p.add_argument("--delta", type=float, default=1.0, help="cosine drive modulation depth")
    p.add_argument("--duty", type=float, default=0.5, help="square-wave duty cycle")
    p.add_argument("--steps", type=int, default=512, help="midpoint base steps for cosine schedules")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--contour-threshold", type=float, default=0.999)
    p.add_argument("--out", default="sweep", help="output path prefix")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("static-scan", help="gamma scan of the unmodulated model")
    p.add_argument("--config")
    p.add_argument("--dissipator", choices=DISSIPATORS, default="minus")
    p.add_argument("--gamma", default="7.5:8.5:201")
    p.add_argument("--target", choices=("liouvillian", "postselected"), default="liouvillian")
    p.add_argument("--period", type=float, default=0.5, help="reference stroboscopic period")
    p.add_argument("--out", default="static-scan")
    p.set_defaults(func=cmd_static_scan)

    p = sub.add_parser("trajectory", help="Bloch-vector time series to CSV")
    p.add_argument("--config")
    p.add_argument("--family", choices=FAMILIES, default="drive-square")
    p.add_argument("--dissipator", choices=DISSIPATORS, default="minus")
    p.add_argument("--gamma", type=float, default=1e-3)
    p.add_argument("--omega", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--duty", type=float, default=0.5)
    p.add_argument("--s0", default="0,0,-1", help="initial Bloch vector x,y,z")
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--sample-dt", type=float, default=0.1)
    p.add_argument("--stroboscopic", action="store_true")
    p.add_argument("--out", default="trajectory")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("analytic", help="contour roots, resonance ladders, slope tables")
    p.add_argument("--config")
    p.add_argument("--contour", metavar="MODEL", help="square-drive")
    p.add_argument("--omega", help="lo:hi:count for --contour")
    p.add_argument("--ladder", choices=("drive", "diss", "diss-even"))
    p.add_argument("--dissipator", choices=DISSIPATORS, default="minus")
    p.add_argument("--max-index", type=int, default=5)
    p.add_argument("--slopes", nargs=3, metavar=("FAMILY", "DISSIPATOR", "INDEX"))
    p.add_argument("--out", default="analytic")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--only", action="append", metavar="NAME", help="run only this check (repeatable)")
    p.add_argument("--list", action="store_true", help="list check names and exit")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
