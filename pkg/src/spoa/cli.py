"""Command-line entry point ``spoa``.

Exit codes: 0 success, 2 invalid configuration or input file, 3 a size
guard tripped, 4 solver failure or a broken internal invariant.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bounds import BoundError, WelfareCurve, design_bound, spoa_bound, spoa_curve
from .formats import (
    bound_json, certificate_json, curve_csv, curve_json, curve_svg, dump_game, load_game,
    parse_action, trace_json, verdict_json,
)
from .games import GameError, InstanceTooLarge, is_k_strong_ne, ring_game, run_dynamics
from .lp import LpError
from .worstcase import TightnessError, certify_tightness

EXIT_OK, EXIT_CONFIG, EXIT_SIZE, EXIT_FAILURE = 0, 2, 3, 4

log = logging.getLogger("spoa")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None
    ks: list[int]
    welfare: WelfareCurve | None
    design: bool
    fmt: str
    seed: int | None
    mode: str
    game_path: Path | None
    action: str | None
    output: Path | None
    game_output: Path | None
    cap: int | None
    workers: int
    decimal: bool


def parse_k(text: str) -> list[int]:
    """``5``, ``1..20`` or ``1,2,5``."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = (int(v) for v in text.split("..", 1))
            if lo > hi:
                raise ConfigError(f"empty k range {text!r}")
            return list(range(lo, hi + 1))
        return sorted({int(v) for v in text.split(",")})
    except ValueError:
        raise ConfigError(f"cannot parse k {text!r}; use 5, 1..20 or 1,2,5") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spoa", description="Exact k-strong price of anarchy bounds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_n=True):
        p.add_argument("-o", "--output", type=Path, help="write here instead of stdout")
        if need_n:
            p.add_argument("--n", type=int, required=True, help="number of players")
            p.add_argument("--welfare", default="indicator",
                           help="indicator, identity or n+1 comma-separated exact values")

    p = sub.add_parser("curve", help="bound(s) over a range of coalition sizes")
    common(p)
    p.add_argument("--k", default=None, help="5, 1..20 or 1,2,5 (default 1..n)")
    p.add_argument("--design", action=argparse.BooleanOptionalAction, default=True,
                   help="also solve the utility design program (default on)")
    p.add_argument("--format", dest="fmt", choices=["csv", "json", "svg"], default="csv")
    p.add_argument("--decimal", action="store_true", help="decimal instead of p/q in CSV")
    p.add_argument("--workers", type=int, default=1)

    for name, text in (("bound", "tight bound for one k"), ("design", "utility design bound for one k")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--k", required=True)

    p = sub.add_parser("construct", help="build and certify a worst-case ring instance")
    common(p)
    p.add_argument("--k", required=True)
    p.add_argument("--game-output", type=Path, help="also write the constructed game as JSON")

    p = sub.add_parser("ring", help="write the ring example game")
    common(p)

    p = sub.add_parser("simulate", help="coalition best-response dynamics on a game file")
    common(p, need_n=False)
    p.add_argument("--game", type=Path, required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--action", help="initial joint action, e.g. 0,0,0 (default all zeros)")
    p.add_argument("--mode", choices=["deterministic", "asynchronous"], default="deterministic")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="check whether a joint action is a k-strong equilibrium")
    common(p, need_n=False)
    p.add_argument("--game", type=Path, required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--action", required=True)

    for p in sub.choices.values():
        p.add_argument("--cap", type=int, help="brute-force state cap (default SPOA_BRUTE_CAP or 10^7)")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    n = getattr(args, "n", None)
    if n is not None and n < 1:
        raise ConfigError(f"--n must be at least 1, got {n}")
    welfare = None
    if n is not None:
        try:
            welfare = WelfareCurve.parse(args.welfare, n)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"--welfare: {exc}") from None
    k_text = getattr(args, "k", None)
    if k_text is None:
        ks = list(range(1, n + 1)) if n else []
    else:
        ks = parse_k(k_text)
    if args.command in ("bound", "design", "construct", "simulate", "verify") and len(ks) != 1:
        raise ConfigError(f"{args.command} takes a single k, got {k_text!r}")
    if n is not None:
        bad = [k for k in ks if not 1 <= k <= n]
        if bad:
            raise ConfigError(f"k={bad[0]} outside [1, {n}]")
    workers = getattr(args, "workers", 1)
    if workers < 1:
        raise ConfigError("--workers must be positive")
    return RunConfig(
        command=args.command, n=n, ks=ks, welfare=welfare,
        design=getattr(args, "design", False), fmt=getattr(args, "fmt", "json"),
        seed=getattr(args, "seed", None), mode=getattr(args, "mode", "deterministic"),
        game_path=getattr(args, "game", None), action=getattr(args, "action", None),
        output=args.output, game_output=getattr(args, "game_output", None),
        cap=args.cap, workers=workers, decimal=getattr(args, "decimal", False),
    )


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _load(cfg: RunConfig):
    try:
        text = cfg.game_path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read game file: {exc}") from None
    return load_game(text)


def cmd_curve(cfg: RunConfig) -> str:
    table = spoa_curve(cfg.n, cfg.welfare, cfg.ks, include_design=cfg.design, workers=cfg.workers)
    if cfg.fmt == "json":
        return curve_json(table)
    if cfg.fmt == "svg":
        return curve_svg(table)
    return curve_csv(table, decimal=cfg.decimal)


def cmd_bound(cfg: RunConfig) -> str:
    return bound_json(spoa_bound(cfg.n, cfg.welfare, cfg.ks[0]))


def cmd_design(cfg: RunConfig) -> str:
    return bound_json(design_bound(cfg.n, cfg.welfare, cfg.ks[0]))


def cmd_construct(cfg: RunConfig) -> str:
    cert, case = certify_tightness(cfg.n, cfg.welfare, cfg.ks[0])
    if cfg.game_output is not None:
        cfg.game_output.write_text(dump_game(case.game))
    return certificate_json(cert)


def cmd_ring(cfg: RunConfig) -> str:
    return dump_game(ring_game(cfg.n, cfg.welfare))


def _game_k(cfg: RunConfig, game) -> int:
    k = cfg.ks[0]
    if not 1 <= k <= game.n:
        raise ConfigError(f"k={k} outside [1, {game.n}]")
    return k


def cmd_simulate(cfg: RunConfig) -> str:
    game = _load(cfg)
    k = _game_k(cfg, game)
    start = parse_action(cfg.action, game) if cfg.action else (0,) * game.n
    seed = cfg.seed if cfg.mode == "asynchronous" else None
    return trace_json(game, run_dynamics(game, start, k, cfg.mode, seed))


def cmd_verify(cfg: RunConfig) -> str:
    game = _load(cfg)
    k = _game_k(cfg, game)
    action = parse_action(cfg.action, game)
    return verdict_json(is_k_strong_ne(game, action, k), action, k)


COMMANDS = {
    "curve": cmd_curve, "bound": cmd_bound, "design": cmd_design, "construct": cmd_construct,
    "ring": cmd_ring, "simulate": cmd_simulate, "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        if cfg.cap is not None:
            os.environ["SPOA_BRUTE_CAP"] = str(cfg.cap)
        _emit(COMMANDS[cfg.command](cfg), cfg.output)
    except InstanceTooLarge as exc:
        print(f"spoa: size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (TightnessError, LpError) as exc:
        print(f"spoa: solver failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ConfigError, BoundError, GameError) as exc:
        print(f"spoa: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        log.debug("internal failure", exc_info=True)
        print(f"spoa: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
