# cli/commands.py
"""Command-line entry: run, groundstate, sweep, check-identities, resume"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from config.settings import get_config
from core import GNLSLab
from core.lab import write_json
from errors import CheckpointError, GNLSError, UsageError
from polynomial import GaugePolynomial, get_preset, load_polynomial_file
from .scenario import as_complex, load_scenario

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse reporting bad arguments as UsageError (exit 1) instead of exiting with 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_lambdas(spec: str) -> List[float]:
    """'a:b:step' inclusive of b, or a comma-separated list"""
    try:
        if ":" in spec:
            start, stop, step = (float(v) for v in spec.split(":"))
            if step <= 0:
                raise UsageError(f"lambda step must be positive, got {step}")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [float(v) for v in np.round(start + step * np.arange(count), 12)]
        return [float(v) for v in spec.split(",")]
    except ValueError as e:
        if isinstance(e, UsageError):
            raise
        raise UsageError(f"cannot parse --lambda {spec!r}: {e}") from e


def _parse_params(pairs: Optional[List[str]]) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        try:
            params[key] = int(value) if key == "n" else float(value)
        except ValueError as e:
            raise UsageError(f"--param {pair!r}: {e}") from e
    return params


def _polynomial_from_args(args) -> GaugePolynomial:
    if args.poly_file:
        return load_polynomial_file(args.poly_file)
    return get_preset(args.preset, **_parse_params(args.param))


def _parse_w(text: str) -> Optional[np.ndarray]:
    if text == "optimize":
        return None
    try:
        values = [complex(v.replace(" ", "")) for v in text.split(",")]
    except ValueError as e:
        raise UsageError(f"--w expects 'optimize' or comma-separated complex numbers: {e}") from e
    return as_complex([[v.real, v.imag] for v in values])


def _lab(args) -> GNLSLab:
    overrides = {}
    if getattr(args, "restarts", None):
        overrides["restarts"] = args.restarts
    return GNLSLab(get_config(**overrides))


def _write_report(path: Optional[str], payload: dict):
    if path:
        write_json(Path(path), payload)
        print(f"📄 Report written to {path}")


# ---------------------------------------------------------------------- #
# subcommands


def cmd_run(args) -> int:
    lab = _lab(args)
    scenario = load_scenario(args.scenario, defaults=lab.config)
    print(f"🚀 Running scenario {args.scenario}")
    run = lab.run_scenario(scenario)
    summary = run.summary
    print(f"🧭 Verdict: {run.verdict or 'n/a'}")
    print(f"✅ Status: {run.status.value} at t={summary['t_final']:.4f}")
    drifts = summary["drifts"]
    print(f"📊 Drifts: M {drifts['M']:.2e}, E {drifts['E']:.2e}, P {drifts['P']:.2e}")
    print(f"📄 Summary written to {scenario.outputs.json_path}")
    return 0


def cmd_resume(args) -> int:
    checkpoint = Path(args.checkpoint)
    if not checkpoint.exists():
        raise CheckpointError(f"checkpoint {checkpoint} does not exist")
    print(f"🔁 Resuming from {checkpoint}")
    run = _lab(args).resume(checkpoint)
    print(f"✅ Status: {run.status.value} at t={run.summary['t_final']:.4f}")
    return 0


def cmd_groundstate(args) -> int:
    g = _polynomial_from_args(args)
    lab = _lab(args)
    print("🔎 Solving for the scalar ground state and g_max...")
    report = lab.ground_state_report(g, omega=args.omega, w=_parse_w(args.w), n=args.grid,
                                     box_length=args.box, seed=args.seed)
    print(f"   Q(0) = {report['q0']:.10f}")
    print(f"   g_max = {report['g_max']:.10f} ({len(report['maximizers'])} maximizers)")
    print(f"   M*E threshold = {report['thresholds']['me_threshold']:.6f}")
    _write_report(args.out, report)
    return 0


def cmd_sweep(args) -> int:
    lambdas = parse_lambdas(args.lambdas)
    lab = _lab(args)
    scenario = load_scenario(args.scenario, defaults=lab.config)
    print(f"🧪 Sweeping {len(lambdas)} values of lambda"
          + (" with simulations" if args.simulate else ""))
    sweep = lab.sweep_dichotomy(scenario, lambdas, run_simulations=args.simulate)
    for row in sweep.rows:
        if row.failed:
            print(f"   lambda={row.scale:<8g} ❌ {row.error}")
        else:
            status = f" -> {row.status}" if row.status else ""
            print(f"   lambda={row.scale:<8g} ME={row.mass_energy:<12.6g} K={row.K:<12.6g} {row.verdict}{status}")
    if sweep.bracket:
        b = sweep.bracket
        print(f"🎯 Verdict changes in [{b['lower']}, {b['upper']}]: {b['from']} -> {b['to']}")
    paths = lab.write_sweep(sweep, Path(scenario.outputs.dir))
    print(f"📄 Table written to {paths['csv']}")
    return 0


def cmd_check_identities(args) -> int:
    g = _polynomial_from_args(args)
    report = _lab(args).identity_report(g, trials=args.trials, seed=args.seed)
    for check in report["checks"]:
        mark = "✅" if check["passed"] else "❌"
        print(f"{mark} {check['name']:<18} max deviation {check['max_deviation']:.2e}")
    _write_report(args.out, report)
    return 0 if report["passed"] else 3


def _add_polynomial_args(parser):
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--preset", default="manakov", help="Preset polynomial (manakov, spinor)")
    source.add_argument("--poly-file", help="JSON polynomial table")
    parser.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="Preset parameter, e.g. n=3 or b=0.5 (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gnls", description="Numerical lab for coupled cubic NLS systems")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging verbosity")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    run = sub.add_parser("run", help="Run a scenario file")
    run.add_argument("scenario", help="Scenario JSON")
    run.set_defaults(handler=cmd_run)

    gs = sub.add_parser("groundstate", help="Ground state, g_max and thresholds")
    _add_polynomial_args(gs)
    gs.add_argument("--omega", type=float, default=1.0, help="Frequency omega > 0")
    gs.add_argument("--w", default="optimize", help="'optimize' or comma-separated unit vector")
    gs.add_argument("--grid", type=int, help="Points per axis (default: config grid_n)")
    gs.add_argument("--box", type=float, help="Box side length (default: config box_length)")
    gs.add_argument("--seed", type=int, default=0, help="Optimizer seed")
    gs.add_argument("--restarts", type=int, help="Sphere optimizer restarts")
    gs.add_argument("--out", help="JSON report path")
    gs.set_defaults(handler=cmd_groundstate)

    sweep = sub.add_parser("sweep", help="Dichotomy sweep over lambda * u0")
    sweep.add_argument("scenario", help="Base scenario JSON")
    sweep.add_argument("--lambda", dest="lambdas", required=True, help="a:b:step or comma list")
    sweep.add_argument("--simulate", action="store_true", help="Also evolve every row")
    sweep.set_defaults(handler=cmd_sweep)

    ids = sub.add_parser("check-identities", help="Randomized identity checks of a polynomial")
    _add_polynomial_args(ids)
    ids.add_argument("--trials", type=int, default=1000, help="Random samples")
    ids.add_argument("--seed", type=int, default=0, help="Sampling seed")
    ids.add_argument("--out", help="JSON report path")
    ids.set_defaults(handler=cmd_check_identities)

    resume = sub.add_parser("resume", help="Continue a run from a checkpoint")
    resume.add_argument("checkpoint", help="Checkpoint file")
    resume.set_defaults(handler=cmd_resume)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code

    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except GNLSError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ I/O error: {e}", file=sys.stderr)
        return CheckpointError.exit_code
    except KeyboardInterrupt:
        print("\n👋 Interrupted")
        return 130
