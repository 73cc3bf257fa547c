"""Command-line front end: sepcert {check,twirl,spa,hakye,choi,export,schema}."""

import argparse
import json
import logging
import sys
from typing import Any, List, Optional

import numpy as np
from pydantic import ValidationError

from sepcert import __version__
from sepcert.bipartite import (
    necessary_separability_check, t_functional, twirl, twirl_monte_carlo,
    werner_separability,
)
from sepcert.choi import choi
from sepcert.config import Settings, load_settings
from sepcert.errors import SepCertError
from sepcert.hakye import counterexample
from sepcert.presets import MAP_PRESETS, STATE_PRESETS, get_hakye_counterexample
from sepcert.schema import SCHEMA_VERSION, ChainVerdict, WernerReport, export_json_schema
from sepcert.spa import spa, spa_entanglement_certificate
from sepcert.util_json import (
    bipartite_to_json, complex_pair, dump_json, load_bipartite, load_map, map_to_json, matrix_to_json,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHAIN_BROKEN = 3
DIGITS = 12


class UsageError(Exception):
    pass


def _round(x: float) -> float:
    return float(f"{x:.{DIGITS}g}")


def _normalize(obj: Any) -> Any:
    """Round every float to 12 significant digits so JSON and text agree."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return _round(obj)
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    return obj


def _fmt(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.{DIGITS}g}"
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, float) for v in value):
        return f"{value[0]:.{DIGITS}g}{value[1]:+.{DIGITS}g}j"
    return str(value)


def _emit(command: str, report: dict, as_json: bool) -> None:
    report = _normalize(report)
    if as_json:
        envelope = {"command": command, "report": report, "schema_version": SCHEMA_VERSION}
        print(json.dumps(envelope, indent=2, sort_keys=True))
        return
    print(f"[{command}]")
    for key, value in report.items():
        if key == "chain":
            print("chain:")
            for entry in value:
                mark = "ok " if entry["holds"] else "BROKEN"
                print(f"  {mark} {entry['name']}: {_fmt(entry['lhs'])} vs {_fmt(entry['rhs'])}")
        elif isinstance(value, dict):
            print(f"{key}:")
            for sub_key, sub_value in value.items():
                print(f"  {sub_key}: {_fmt(sub_value)}")
        else:
            print(f"{key}: {_fmt(value)}")
    print(f"schema_version: {SCHEMA_VERSION}")


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    state = load_bipartite(args.state_file)
    report = necessary_separability_check(state, settings.tol)
    _emit("check", report.model_dump(mode="json"), args.json)
    return EXIT_OK


def cmd_twirl(args: argparse.Namespace, settings: Settings) -> int:
    state = load_bipartite(args.state_file)
    form = twirl(state)
    verdict = werner_separability(state, settings.tol)
    report = WernerReport(
        n=state.n,
        alpha=complex_pair(form.alpha),
        beta=complex_pair(form.beta),
        T=t_functional(state).real,
        verdict=verdict,
    )
    if settings.mc_samples > 0:
        sampled = twirl_monte_carlo(state, settings.mc_samples, settings.seed, settings.threads)
        closed = form.reconstruct(state.n)
        report.mc_samples = settings.mc_samples
        report.mc_deviation = float(np.max(np.abs(sampled.mat - closed.mat)))
    _emit("twirl", report.model_dump(mode="json"), args.json)
    return EXIT_OK


def cmd_spa(args: argparse.Namespace, settings: Settings) -> int:
    phi = load_map(args.map_file)
    result = spa(phi, args.allow_normalize, settings.tol)
    cert = spa_entanglement_certificate(phi, settings.tol, args.allow_normalize)
    report = {
        "spa": result.summary().model_dump(mode="json"),
        "certificate": cert.model_dump(mode="json"),
    }
    _emit("spa", report, args.json)
    return EXIT_OK


def cmd_hakye(args: argparse.Namespace, settings: Settings) -> int:
    report = counterexample(settings.epsilon)
    _emit("hakye", report.model_dump(mode="json"), args.json)
    if report.verdict != ChainVerdict.ENTANGLED:
        print(f"Chain broken: {', '.join(report.failed_links) or 'certificate'}", file=sys.stderr)
        return EXIT_CHAIN_BROKEN
    return EXIT_OK


def cmd_choi(args: argparse.Namespace, settings: Settings) -> int:
    phi = load_map(args.map_file)
    c = choi(phi)
    payload = matrix_to_json(c.mat)
    payload["local_dims"] = [c.n, c.m]
    if args.json:
        _emit("choi", payload, True)
        return EXIT_OK
    print(f"[choi] local dims ({c.n}, {c.m})")
    for row in np.asarray(c.mat):
        print("  ".join(f"{z.real:.{DIGITS}g}{z.imag:+.{DIGITS}g}j" for z in row))
    return EXIT_OK


def cmd_export(args: argparse.Namespace, settings: Settings) -> int:
    name = args.name
    if name in STATE_PRESETS:
        obj: Any = bipartite_to_json(STATE_PRESETS[name](args.n))
    elif name in MAP_PRESETS:
        obj = map_to_json(MAP_PRESETS[name](args.n))
    elif name == "hakye":
        obj = map_to_json(get_hakye_counterexample(settings.epsilon))
    else:
        raise UsageError(f"Unknown preset '{name}'")
    if args.output:
        dump_json(obj, args.output)
        logger.info("Wrote preset %s to %s", name, args.output)
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_schema(args: argparse.Namespace, settings: Settings) -> int:
    print(json.dumps(export_json_schema(), indent=2, sort_keys=True))
    return EXIT_OK


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="Numerical tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--json", action="store_true", help="Emit a single JSON document")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="sepcert",
        description="Separability certificates: S/T functionals, twirl, Choi matrices and SPA.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="S/T and PPT tests on a bipartite density")
    check.add_argument("state_file")
    check.set_defaults(handler=cmd_check)

    tw = sub.add_parser("twirl", parents=[common], help="Werner twirl P(a) and its separability")
    tw.add_argument("state_file")
    tw.add_argument("--mc-samples", type=int, default=None)
    tw.set_defaults(handler=cmd_twirl)

    sp = sub.add_parser("spa", parents=[common], help="SPA of a unital map and its certificate")
    sp.add_argument("map_file")
    sp.add_argument("--allow-normalize", action="store_true", help="Rescale a map with phi(1) = lambda·1")
    sp.set_defaults(handler=cmd_spa)

    hk = sub.add_parser("hakye", parents=[common], help="Reproduce the optimal map with entangled SPA")
    hk.add_argument("--epsilon", type=float, default=None)
    hk.set_defaults(handler=cmd_hakye)

    ch = sub.add_parser("choi", parents=[common], help="Print the Choi matrix of a map file")
    ch.add_argument("map_file")
    ch.set_defaults(handler=cmd_choi)

    ex = sub.add_parser("export", parents=[common], help="Write a preset state or map as JSON")
    ex.add_argument("name", help=", ".join(sorted([*STATE_PRESETS, *MAP_PRESETS, "hakye"])))
    ex.add_argument("--n", type=int, default=3)
    ex.add_argument("--epsilon", type=float, default=None)
    ex.add_argument("-o", "--output", default=None)
    ex.set_defaults(handler=cmd_export)

    sc = sub.add_parser("schema", parents=[common], help="Dump the JSON schemas")
    sc.set_defaults(handler=cmd_schema)
    return parser


# settings that only some subcommands read
COMMAND_SETTINGS = {
    "mc_samples": {"twirl"},
    "epsilon": {"hakye", "export"},
}


def _settings_from(args: argparse.Namespace) -> Settings:
    unused = [name for name, commands in COMMAND_SETTINGS.items() if args.command not in commands]
    settings = load_settings(skip=unused)
    overrides = {
        "tol": args.tol,
        "seed": args.seed,
        "threads": args.threads,
        "log_level": args.log_level,
        "mc_samples": getattr(args, "mc_samples", None),
        "epsilon": getattr(args, "epsilon", None),
    }
    values = settings.model_dump()
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Settings.model_validate(values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = _settings_from(args)
    except ValidationError as e:
        print(f"Error: invalid settings: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("Running %s with %s", args.command, settings)

    try:
        return args.handler(args, settings)
    except (SepCertError, UsageError, OSError, ValidationError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
