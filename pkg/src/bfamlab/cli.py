"""Command-line surface: run, norms, radius, taylor, bound.

Exit codes: 0 success, 1 configuration problem (including usage errors),
2 numerical blow-up, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__, analyticity, evolve, norms, scenarios, taylor
from .errors import (
    BlowupError,
    ConfigurationError,
    InsufficientBandError,
    SnapshotError,
    TruncationError,
)
from .grid import RealField, dft


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; the exit-code contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="bfamlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"bfamlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline from a config file")
    p_run.add_argument("--config", required=True)

    p_norms = sub.add_parser("norms", help="print the norms of a snapshot")
    p_norms.add_argument("--snapshot", required=True)
    p_norms.add_argument("--sigma", type=float, required=True)
    p_norms.add_argument("--s", type=float, required=True)
    p_norms.add_argument("--m", type=int, default=2)
    p_norms.add_argument("--j-max", type=int, default=norms.DEFAULT_J_MAX)

    p_radius = sub.add_parser("radius", help="spectral decay fit of a snapshot")
    p_radius.add_argument("--snapshot", required=True)
    p_radius.add_argument("--k-min", type=int, default=analyticity.DEFAULT_FIT_K_MIN)
    p_radius.add_argument("--floor", type=float, default=analyticity.FIT_FLOOR)

    p_taylor = sub.add_parser("taylor", help="time-Taylor series report")
    p_taylor.add_argument("--config", required=True)
    p_taylor.add_argument("--order", type=int, default=16)

    p_bound = sub.add_parser("bound", help="strip lower-bound table")
    p_bound.add_argument("--config", required=True)
    return parser


def _read_config(path) -> tuple:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise SnapshotError(f"cannot read config {path}: {err}") from err
    return scenarios.parse_config(text), text


def _cmd_run(args) -> int:
    cfg, text = _read_config(args.config)
    result = scenarios.run_scenario(cfg, config_text=text)
    final = result.rows[-1]
    print(f"run complete: b = {cfg.b:g}, {len(result.rows)} samples, "
          f"t_final = {final.t:g}")
    print(f"outputs in {cfg.output_dir}")
    print(f"final sigma_hat = {final.sigma_hat:.6g} (fit quality {final.fit_quality:.4f}), "
          f"strip bound sigma = {final.km_sigma_bound:.6g}")
    for sigma in cfg.diagnostics.sigma_list:
        value, diverged = norms.gevrey_norm(
            result.trajectory.final_state, sigma, cfg.diagnostics.s
        )
        note = " (diverged)" if diverged else ""
        print(f"gevrey norm at sigma = {sigma:g}: {value:.6g}{note}")
    return 0


def _cmd_norms(args) -> int:
    snap = scenarios.read_snapshot(args.snapshot)
    u = scenarios.field_of(snap)
    print(f"snapshot: N = {snap.n_points}, L = {snap.box_length:g}, "
          f"t = {snap.t:g}, b = {snap.b:g}")
    print(f"l2          = {norms.sobolev_norm(u, 0.0):.12g}")
    print(f"sobolev s={args.s:g}  = {norms.sobolev_norm(u, args.s):.12g}")
    value, diverged = norms.gevrey_norm(u, args.sigma, args.s)
    note = " (diverged: sigma exceeds the resolvable decay rate)" if diverged else ""
    print(f"gevrey      = {value:.12g}{note}")
    try:
        hm = norms.hm_norm(u, args.sigma, args.m, args.j_max) if args.sigma > 0 else None
        print(f"hm m={args.m}      = {hm:.12g}" if hm is not None
              else "hm          = skipped (requires sigma > 0)")
    except TruncationError as err:
        print(f"hm          = not converged ({err})")
    print(f"km_phi m=32 = {norms.km_phi(u, args.sigma, 32):.12g}")
    try:
        print(f"km_radius   = {norms.km_radius_norm(u, args.sigma, args.j_max):.12g}")
    except TruncationError as err:
        print(f"km_radius   = not converged ({err})")
    return 0


def _cmd_radius(args) -> int:
    snap = scenarios.read_snapshot(args.snapshot)
    u = scenarios.field_of(snap)
    fit = analyticity.fit_decay_radius(dft(u), k_min=args.k_min, floor=args.floor)
    print(f"sigma_hat   = {fit.sigma_hat:.12g}")
    print(f"fit_quality = {fit.fit_quality:.12g}")
    print(f"band        = modes {fit.band[0]}..{fit.band[1]}")
    print(f"floor_hit   = {fit.floor_hit}")
    return 0


def _cmd_taylor(args) -> int:
    cfg, _ = _read_config(args.config)
    u0 = scenarios.build_initial(cfg)
    series = taylor.taylor_coeffs(u0, cfg.b, args.order)
    print(f"computed {series.order + 1} coefficients (c_0 .. c_{series.order})")
    for k, c in enumerate(series.coeffs):
        print(f"  |c_{k}|_L2 = {norms.sobolev_norm(c, 0.0):.6g}")
    rho = taylor.time_radius_estimate(series)
    print(f"temporal radius estimate = {rho:.6g}")
    t_check = 0.05 if math.isinf(rho) else min(rho / 4.0, 0.05)
    if t_check > 0:
        stepper_cfg = evolve.EvolveConfig(
            b=cfg.b, t_final=t_check, dt_max=t_check / 2000.0,
            sample_interval=t_check, cfl_safety=1.0,
            blowup_threshold=cfg.evolve.blowup_threshold,
        )
        endpoint = evolve.run(u0, stepper_cfg).final_state
        series_end = taylor.taylor_eval(series, t_check)
        diff = norms.sobolev_norm(
            RealField(u0.grid, series_end.samples - endpoint.samples), 0.0
        )
        ref = norms.sobolev_norm(endpoint, 0.0)
        rel = diff / ref if ref > 0 else diff
        print(f"stepper comparison at t = {t_check:g}: relative L2 difference = {rel:.3e}")
    return 0


def _cmd_bound(args) -> int:
    cfg, _ = _read_config(args.config)
    u0 = scenarios.build_initial(cfg)
    trajectory = evolve.run(u0, cfg.evolve, monitors=scenarios.STANDARD_MONITORS)
    rows, bound, _ = scenarios.compute_diagnostics(trajectory, cfg.diagnostics)
    print(f"mu = {bound.mu:.6g}, K = {bound.K_rate:.6g}, gamma = {bound.gamma:.6g}, "
          f"lambda = {bound.lam:.6g}, phi0 = {bound.phi0:.6g}")
    print(f"{'t':>12} {'sigma(t)':>16} {'r(t)':>16}")
    for row in rows:
        radius = analyticity.km_bound_radius(row.t, bound)
        print(f"{row.t:>12.6g} {row.km_sigma_bound:>16.6g} {radius:>16.6g}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "norms": _cmd_norms,
    "radius": _cmd_radius,
    "taylor": _cmd_taylor,
    "bound": _cmd_bound,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 1
    except InsufficientBandError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 1
    except BlowupError as err:
        print(f"numerical blow-up: {err}", file=sys.stderr)
        return 2
    except (SnapshotError, OSError) as err:
        print(f"io error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
