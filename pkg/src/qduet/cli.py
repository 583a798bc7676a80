"""Command line front end: replay, sweep, probs, serve."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from qduet import __version__, qcore, traceio
from qduet.engine import EngineConfig

_INT_CONFIG_KEYS = (
    "window_size", "shots_per_sim", "sim_period_ms", "ramp_tick_ms",
    "ramp_step", "cc_controller_a", "cc_controller_b", "cc_channel_a",
    "cc_channel_b", "seed",
)


class ConfigError(ValueError):
    """Bad config file; message carries the offending line or key."""


def load_config(path: str) -> EngineConfig:
    """Read a flat key = value config whose keys mirror EngineConfig fields.

    Blank lines and #-comments are ignored; quoting string values is
    optional.  Routing is given as relay_a / relay_b (output port for each
    input port).
    """
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key = key.strip()
            val = val.split("#", 1)[0].strip().strip("\"'")
            if not key or not val:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            values[key] = val

    kwargs: dict = {}
    relay = {"A": "A", "B": "B"}
    for key, val in values.items():
        if key == "relay_a":
            relay["A"] = val
        elif key == "relay_b":
            relay["B"] = val
        elif key in _INT_CONFIG_KEYS:
            try:
                kwargs[key] = int(val)
            except ValueError:
                raise ConfigError(f"{path}: {key} must be an integer, got {val!r}") from None
        else:
            raise ConfigError(f"{path}: unknown config key {key!r}")
    config = EngineConfig(relay=relay, **kwargs)
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config


def _build_config(config_path: str | None, seed: int | None) -> EngineConfig:
    config = load_config(config_path) if config_path else EngineConfig()
    if seed is not None:
        config.seed = seed
        config.validate()
    return config


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        config = _build_config(args.config, args.seed)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        trace = traceio.load_trace(args.trace)
    except OSError as exc:
        print(f"error: cannot read trace {args.trace}: {exc}", file=sys.stderr)
        return 1
    except traceio.TraceError as exc:
        print(f"error: {args.trace}: {exc}", file=sys.stderr)
        return 1

    stem = Path(args.trace)
    out_path = args.out or str(stem.with_name(stem.stem + ".out.jsonl"))
    stats_path = args.stats or str(stem.with_name(stem.stem + ".stats.json"))
    outputs, stats = traceio.run_replay(trace, config)
    try:
        traceio.write_outputs(outputs, stats, out_path, stats_path)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 1
    print(f"replayed {len(trace)} events -> {len(outputs)} events, "
          f"{stats.sim_count} sims ({out_path}, {stats_path})")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.steps < 2 or args.shots < 1:
        print("error: need --steps >= 2 and --shots >= 1", file=sys.stderr)
        return 1
    rng = qcore.SplitMix64(args.seed)
    lines = ["s,p00,p01,p10,p11,correlation"]
    for i in range(args.steps):
        s = i / (args.steps - 1)
        counts = [0, 0, 0, 0]
        for b0, b1 in qcore.run_shots(s, args.shots, rng):
            counts[2 * b0 + b1] += 1
        agree = counts[0] + counts[3]
        corr = (2 * agree - args.shots) / args.shots
        freqs = ",".join(f"{c / args.shots:.6f}" for c in counts)
        lines.append(f"{s:.6f},{freqs},{corr:.6f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def cmd_probs(args: argparse.Namespace) -> int:
    if not 0.0 <= args.s <= 1.0:
        print(f"error: s must be in [0, 1], got {args.s}", file=sys.stderr)
        return 1
    state = qcore.entanglement_switch_state(args.s)
    p = qcore.measure_probs(state)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    phi = abs((state[0] + state[3]) * inv_sqrt2) ** 2
    psi = abs((state[1] + state[2]) * inv_sqrt2) ** 2
    print(f"s: {args.s:.6f}")
    for label, value in zip(("p00", "p01", "p10", "p11"), p):
        print(f"{label}: {value:.6f}")
    print(f"phi_plus_weight: {phi:.6f}")
    print(f"psi_plus_weight: {psi:.6f}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = _build_config(args.config, args.seed)
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ui_dir = args.ui
    if ui_dir is None:
        default_ui = Path("frontend")
        if (default_ui / "index.html").exists():
            ui_dir = str(default_ui)
    import uvicorn

    from qduet.server import create_app

    app = create_app(config, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:
        print(f"error: cannot serve on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qduet", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qduet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="replay a trace file deterministically")
    p.add_argument("trace", help="input trace (JSON lines)")
    p.add_argument("--config", help="engine config file (key = value)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", help="output trace path (default: <trace>.out.jsonl)")
    p.add_argument("--stats", help="stats report path (default: <trace>.stats.json)")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("sweep", help="sample outcome statistics across s")
    p.add_argument("--shots", type=int, default=10000, help="shots per s value")
    p.add_argument("--steps", type=int, default=13, help="number of s values in [0, 1]")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probs", help="print exact outcome probabilities at s")
    p.add_argument("s", type=float)
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("serve", help="run the live websocket service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--config", help="engine config file")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--ui", help="static UI directory (default: ./frontend if present)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
