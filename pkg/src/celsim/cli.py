"""Command-line interface.

Subcommands: moments, squeezing, entanglement, photon, figure, verify.
Exit codes: 0 success/PASS, 1 validation or verification failure, 2 usage
error.  A default configuration file can be named in the CELSIM_CONFIG
environment variable; explicit flags override configuration values.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analytic, fock_oracle, metrics, ode_oracle, sweep
from .model import ModelParams, load_config, validate

# Truncation safety for the density-matrix engine; lift with --force.
FOCK_MAX_A = 2.0
FOCK_MAX_T = 5.0


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--A", type=float, help="linear gain coefficient")
    parser.add_argument("--kappa", type=float, help="cavity damping constant")
    parser.add_argument("--eta", type=float, help="population inversion in [-1, 1]")
    parser.add_argument("--nbar-a", type=float, help="thermal seed of mode a")
    parser.add_argument("--nbar-b", type=float, help="thermal seed of mode b")
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--t", type=float, help="single evaluation time")
    parser.add_argument("--t-max", type=float, help="time grid end (default 5)")
    parser.add_argument("--dt", type=float, help="grid/integration step (default 0.01)")
    parser.add_argument(
        "--engine",
        choices=("analytic", "ode", "fock"),
        default="analytic",
        help="evaluation engine (default analytic)",
    )
    parser.add_argument(
        "--steady", action="store_true", help="evaluate the steady state instead of a grid"
    )
    parser.add_argument(
        "--fock-cutoff", type=int, default=fock_oracle.DEFAULT_CUTOFF,
        help="Fock levels per mode for --engine fock",
    )
    parser.add_argument(
        "--force", action="store_true",
        help="lift the truncation-safety limits of --engine fock",
    )


def _gather_settings(args) -> dict:
    settings: dict = {}
    config_path = args.config or os.environ.get("CELSIM_CONFIG")
    if config_path:
        settings.update(load_config(config_path))
    for key, flag in (
        ("A", "A"),
        ("kappa", "kappa"),
        ("eta", "eta"),
        ("nbar_a", "nbar_a"),
        ("nbar_b", "nbar_b"),
        ("t_max", "t_max"),
        ("dt", "dt"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    return settings


def _params_from(settings: dict) -> ModelParams:
    if "A" not in settings or "kappa" not in settings:
        raise ValueError("A and kappa are required (flags or configuration file)")
    return ModelParams(
        A=settings["A"],
        kappa=settings["kappa"],
        eta=settings.get("eta", 0.0),
        nbar_a=settings.get("nbar_a", 0.0),
        nbar_b=settings.get("nbar_b", 0.0),
    )


def _states(args, params: ModelParams) -> list[analytic.MomentState]:
    """Moment states on the requested grid, via the selected engine."""
    if args.steady:
        return [analytic.steady_state_moments(params)]
    t_max = getattr(args, "t_max", None) or 5.0
    dt = getattr(args, "dt", None) or 0.01
    if args.t is not None:
        if args.engine != "analytic":
            raise ValueError("--t needs --engine analytic; use --t-max for integrators")
        return [analytic.moments(params, args.t)]
    if args.engine == "analytic":
        traj = analytic.trajectory(params, t_max, dt)
    elif args.engine == "ode":
        traj = ode_oracle.integrate(params, t_max, dt)
    else:
        if not args.force and (params.A > FOCK_MAX_A or t_max > FOCK_MAX_T):
            raise ValueError(
                "fock engine refuses A > 2 or t_max > 5 (truncation safety); "
                "pass --force to override"
            )
        state = fock_oracle.thermal_product_state(
            params.nbar_a, params.nbar_b, args.fock_cutoff, args.fock_cutoff
        )
        run = fock_oracle.evolve(state, params, t_max, dt)
        if run.truncation_suspect:
            print(
                f"warning: TRUNCATION-SUSPECT (tail mass {run.max_tail_mass:.3e})",
                file=sys.stderr,
            )
        traj = run.trajectory
    return [traj.state_at(i) for i in range(len(traj))]


def _print_table(states, columns) -> None:
    print("\t".join(["t", "u", "v", "w"] + [name for name, _ in columns]))
    for state in states:
        cells = [_fmt(state.t), _fmt(state.u), _fmt(state.v), _fmt(state.w)]
        for _, fn in columns:
            value = fn(state)
            cells.append(value if isinstance(value, str) else _fmt(value))
        print("\t".join(cells))


def _run_state_command(args, columns) -> int:
    settings = _gather_settings(args)
    params = _params_from(settings)
    report = validate(params)
    if report.errors:
        print(report.summary(), file=sys.stderr)
        return 1
    if report.unstable and args.steady:
        print("no steady state: parameter set is unstable", file=sys.stderr)
        return 1
    states = _states(args, params)
    _print_table(states, columns)
    return 0


def _cmd_moments(args) -> int:
    return _run_state_command(args, [])


def _cmd_squeezing(args) -> int:
    return _run_state_command(
        args,
        [
            ("dc_plus", lambda s: metrics.quadrature_variance(s, "plus")),
            ("dc_minus", lambda s: metrics.quadrature_variance(s, "minus")),
        ],
    )


def _cmd_entanglement(args) -> int:
    def record(state):
        return metrics.covariance_record(state)

    return _run_state_command(
        args,
        [
            ("Vs", lambda s: record(s).v_s),
            ("EN", lambda s: record(s).e_n),
            ("entangled", lambda s: str(metrics.is_entangled(record(s))).lower()),
        ],
    )


def _cmd_photon(args) -> int:
    return _run_state_command(args, [("mean_photon", metrics.mean_photon_number)])


def _cmd_figure(args) -> int:
    out_dir = args.out_dir
    if args.figure == "all":
        paths = sweep.run_all_figures(out_dir)
    else:
        try:
            fig = int(args.figure)
        except ValueError:
            print(f"figure must be 1..13 or 'all', got {args.figure!r}", file=sys.stderr)
            return 2
        config = sweep.figure_config(fig)
        result = sweep.run_figure(config, out_dir=out_dir, include_moments=args.moments)
        if result.errors:
            for err in result.errors:
                print(f"error: {err}", file=sys.stderr)
            return 1
        paths = [result.path]
    for path in paths:
        print(path)
    return 0


def _cmd_verify(args) -> int:
    report = sweep.verify_all(args.profile)
    for line in report.text_lines():
        print(line)
    for line in report.summary_lines():
        print(line)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="celsim",
        description="Two-mode cavity simulator: squeezing, entanglement and intensity "
        "of a thermally seeded correlated-emission laser.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, extra in (
        ("moments", _cmd_moments, "print t, u, v, w"),
        ("squeezing", _cmd_squeezing, "add the quadrature variances"),
        ("entanglement", _cmd_entanglement, "add V_s, E_N and the verdict"),
        ("photon", _cmd_photon, "add the mean photon number"),
    ):
        p = sub.add_parser(name, help=extra)
        _add_param_flags(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("figure", help="write figNN.csv for one figure or 'all'")
    p.add_argument("figure", help="figure id 1..13 or 'all'")
    p.add_argument("--out-dir", default=".", help="output directory (default .)")
    p.add_argument(
        "--moments", action="store_true", help="append u, v, w provenance columns"
    )
    p.set_defaults(fn=_cmd_figure)

    p = sub.add_parser("verify", help="run the cross-oracle verification matrix")
    p.add_argument(
        "--profile", choices=("default", "fock", "full"), default="default"
    )
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
