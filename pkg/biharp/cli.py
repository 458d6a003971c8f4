"""
Command line entry point: `biharp <subcommand>`.

Exit codes: 0 success, 1 a verified inequality failed, 2 configuration or
domain error, 3 I/O error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import BaseModel, ValidationError

from .config import Settings, get_settings
from .core.errors import BiharpError, ConfigError, InvariantViolation
from .core.haar import HaarExpansion, MultiplierSequence
from .core.pietsch import Normalization
from .harness import workflows
from .harness.ensembles import generate, load_spec
from .harness.reports import render_constants_text, render_csv, render_text, to_json, write_output
from .harness.suite import load_config, run_suite
from .schemas.ensemble import EnsembleKind, EnsembleOut
from .schemas.expansion import HaarExpansionIn
from .utils.logging import configure_logging, log_action

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _read_json(path: Optional[Path]) -> Any:
    if path is None:
        raise ConfigError("--input is required")
    return json.loads(Path(path).read_text(encoding="utf-8"))


def read_expansion(path: Optional[Path], index: int = 0) -> HaarExpansion:
    """A HaarExpansion document, or fixture `index` of a `gen` output document."""
    data = _read_json(path)
    if isinstance(data, dict) and "expansions" in data:
        try:
            data = data["expansions"][index]
        except (IndexError, TypeError) as exc:
            raise ConfigError(f"no expansion at index {index} in {path}") from exc
    try:
        document = HaarExpansionIn.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid expansion document {path}: {exc}") from exc
    return document.to_expansion()


def _check_depth(depth: int, settings: Settings) -> int:
    if not 0 <= depth <= settings.MAX_DEPTH:
        raise ConfigError(f"--depth must lie in [0, {settings.MAX_DEPTH}], got {depth}")
    return depth


def _p(args: argparse.Namespace, default: float = 1.0) -> float:
    return args.p if args.p is not None else default


def _p_values(args: argparse.Namespace) -> list[float]:
    if args.p_values:
        return args.p_values
    if args.p is not None:
        return [args.p]
    return [0.5, 1.0, 1.5, 2.0]


def _scalar_rows(model: BaseModel) -> list[tuple[str, str]]:
    rows = []
    for key, value in model.model_dump(mode="json").items():
        if isinstance(value, (dict, list)):
            continue
        rows.append((key, f"{value:.12g}" if isinstance(value, float) else str(value)))
    return rows


def emit(model: BaseModel, args: argparse.Namespace, csv_rows: Optional[Sequence[BaseModel]] = None) -> None:
    if args.format == "json":
        text = to_json(model)
    elif args.format == "csv":
        text = render_csv(csv_rows) if csv_rows is not None else render_csv([model])
    else:
        rows = _scalar_rows(model)
        width = max((len(key) for key, _ in rows), default=0)
        text = "".join(f"{key.ljust(width)}  {value}\n" for key, value in rows)
    write_output(text, args.output)


def _ensemble_spec(args: argparse.Namespace, settings: Settings):
    return load_spec(
        {
            "kind": args.kind,
            "maxLevel": _check_depth(args.depth if args.depth is not None else settings.DEFAULT_DEPTH, settings),
            "count": args.count,
            "seed": args.seed if args.seed is not None else settings.DEFAULT_SEED,
            "coefficientScale": args.scale,
            "density": args.density,
            "ratio": args.ratio,
        }
    )


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    spec = _ensemble_spec(args, settings)
    expansions = generate(spec)
    out = EnsembleOut(spec=spec, expansions=[HaarExpansionIn.from_expansion(f) for f in expansions])
    write_output(to_json(out), args.output)
    return EXIT_OK


def cmd_norms(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    emit(workflows.norms(f, _p(args), args.grid), args)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    emit(workflows.decompose(f, _p(args), args.grid), args)
    return EXIT_OK


def cmd_weights(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    result = workflows.weights(f, _p(args), args.grid, Normalization(args.mode), args.ap)
    emit(result, args, csv_rows=result.weights)
    return EXIT_OK


def cmd_verify_domination(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    result = workflows.verify_domination(
        f,
        _p(args),
        args.grid,
        MultiplierSequence.constant(args.phi),
        trials=args.trials if args.trials is not None else settings.DEFAULT_TRIALS,
        iterations=args.iterations if args.iterations is not None else settings.ADVERSARIAL_BUDGET,
        restarts=args.restarts,
        sequences=args.sequences if args.sequences is not None else settings.TWO_SUMMING_SEQUENCES,
        seed=args.seed if args.seed is not None else settings.DEFAULT_SEED,
    )
    emit(result, args)
    return EXIT_OK


def cmd_verify_atomic(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    result = workflows.verify_atomic(f, _p(args), args.grid, args.epsilon)
    emit(result, args, csv_rows=result.levels)
    return EXIT_OK


def cmd_factorize(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    budget = args.budget if args.budget is not None else settings.X0_BUDGET
    seed = args.seed if args.seed is not None else settings.DEFAULT_SEED
    emit(workflows.factorize(f, _p(args, 1.5), args.grid, budget, seed), args)
    return EXIT_OK


def cmd_x0(args: argparse.Namespace, settings: Settings) -> int:
    f = read_expansion(args.input, args.index)
    budget = args.budget if args.budget is not None else settings.X0_BUDGET
    seed = args.seed if args.seed is not None else settings.DEFAULT_SEED
    emit(workflows.x0(f, _p(args, 1.5), args.theta, args.grid, budget, seed), args)
    return EXIT_OK


def cmd_estimate_constants(args: argparse.Namespace, settings: Settings) -> int:
    spec = _ensemble_spec(args, settings)
    theta = args.theta if args.theta is not None else 0.5
    rows = workflows.estimate_constants(spec, _p_values(args), theta, args.grid)
    if args.format == "json":
        text = json.dumps([row.model_dump(mode="json") for row in rows], sort_keys=True, indent=2) + "\n"
    elif args.format == "csv":
        text = render_csv(rows)
    else:
        text = render_constants_text(rows)
    write_output(text, args.output)
    return EXIT_OK


def cmd_suite(args: argparse.Namespace, settings: Settings) -> int:
    if args.config is not None:
        config = load_config(_read_json(args.config))
    else:
        spec = _ensemble_spec(args, settings)
        config = load_config(
            {
                "ensembles": [spec.model_dump(by_alias=True)],
                "p_values": _p_values(args),
                "grid": args.grid,
                "theta": args.theta if args.theta is not None else 0.5,
                "trials": args.trials if args.trials is not None else settings.DEFAULT_TRIALS,
                "adversarial_budget": args.iterations if args.iterations is not None else settings.ADVERSARIAL_BUDGET,
                "two_summing_sequences": settings.TWO_SUMMING_SEQUENCES,
                "x0_budget": args.budget if args.budget is not None else settings.X0_BUDGET,
            }
        )
    report = run_suite(config, timestamp=not args.no_timestamp)
    if args.format == "json":
        text = to_json(report)
    elif args.format == "csv":
        text = render_csv(report.fixtures)
    else:
        text = render_text(report)
    write_output(text, args.output)
    return EXIT_OK if report.passed else EXIT_INVARIANT


def cmd_serve(args: argparse.Namespace, settings: Settings) -> int:
    import uvicorn

    uvicorn.run("biharp.main:app", host=args.host, port=args.port)
    return EXIT_OK


def _common(parser: argparse.ArgumentParser, expansion: bool = True) -> None:
    parser.add_argument("--p", type=float, default=None, help="Hardy space exponent in (0, 2]")
    parser.add_argument("--theta", type=float, default=None)
    parser.add_argument("--grid", type=int, default=None, help="grid exponent G (default maxLevel + 1)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--output", type=Path, default=None)
    parser.add_argument("--format", choices=("json", "csv", "text"), default="json")
    if expansion:
        parser.add_argument("--input", type=Path, default=None, help="HaarExpansion JSON (or a gen output)")
        parser.add_argument("--index", type=int, default=0, help="fixture index inside a gen output")


def _ensemble_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", choices=[k.value for k in EnsembleKind], default=EnsembleKind.SPARSE_RANDOM.value)
    parser.add_argument("--depth", type=int, default=None, help="maximal level L")
    parser.add_argument("--count", type=int, default=1)
    parser.add_argument("--density", type=float, default=0.2)
    parser.add_argument("--ratio", type=float, default=4.0)
    parser.add_argument("--scale", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biharp", description="Bi-parameter dyadic Hardy space verification toolkit")
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    commands: dict[str, tuple[Callable[[argparse.Namespace, Settings], int], str]] = {
        "gen": (cmd_gen, "generate a seeded ensemble"),
        "norms": (cmd_norms, "square-function norms"),
        "decompose": (cmd_decompose, "atomic decomposition export"),
        "weights": (cmd_weights, "explicit Pietsch weights"),
        "verify-domination": (cmd_verify_domination, "domination and 2-summing checks"),
        "verify-atomic": (cmd_verify_atomic, "atomic chain and l2 atom bounds"),
        "factorize": (cmd_factorize, "factor split |f| = |x|^(1-theta) |y|^theta"),
        "x0": (cmd_x0, "X0 quantity estimate (--p is the target exponent)"),
        "estimate-constants": (cmd_estimate_constants, "implied constant table over an ensemble"),
        "suite": (cmd_suite, "full verification suite"),
        "serve": (cmd_serve, "serve the HTTP API"),
    }
    for name, (handler, help_text) in commands.items():
        command = sub.add_parser(name, help=help_text)
        command.set_defaults(handler=handler)
        if name == "serve":
            command.add_argument("--host", default="127.0.0.1")
            command.add_argument("--port", type=int, default=8000)
            continue
        _common(command, expansion=name not in ("gen", "estimate-constants", "suite"))
        if name in ("gen", "estimate-constants", "suite"):
            _ensemble_flags(command)
        if name in ("estimate-constants", "suite"):
            command.add_argument("--p-values", dest="p_values", type=float, action="append", default=None)
        if name == "weights":
            command.add_argument("--mode", choices=[m.value for m in Normalization], default=Normalization.B_NORMALIZED.value)
            command.add_argument("--ap", type=float, default=None, help="A_p for --mode ap")
        if name in ("verify-domination", "suite"):
            command.add_argument("--iterations", type=int, default=None, help="adversarial evaluation budget")
        if name == "verify-domination":
            command.add_argument("--restarts", type=int, default=4)
            command.add_argument("--sequences", type=int, default=None)
            command.add_argument("--phi", type=float, default=1.0, help="constant multiplier value")
        if name == "verify-atomic":
            command.add_argument("--epsilon", type=float, default=0.5)
        if name in ("factorize", "x0", "suite"):
            command.add_argument("--budget", type=int, default=None, help="X0 witness search budget")
        if name == "suite":
            command.add_argument("--config", type=Path, default=None, help="suite config JSON")
            command.add_argument("--no-timestamp", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(args.log_level or settings.LOG_LEVEL)
    try:
        code = args.handler(args, settings)
    except InvariantViolation as exc:
        logger.error("invariant violated: %s", exc)
        code = EXIT_INVARIANT
    except BiharpError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        code = EXIT_CONFIG
    except (OSError, json.JSONDecodeError) as exc:
        logger.error("I/O error: %s", exc)
        code = EXIT_IO
    log_action(args.command, "cli", details={"exit": code})
    return code


if __name__ == "__main__":
    sys.exit(main())
