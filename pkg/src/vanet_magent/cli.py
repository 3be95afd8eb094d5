"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 config file not found, 4 config
parse error, 5 config validation error, 6 output I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import Strategy, TaskSpec, compare_strategies, write_bench_csv
from .config import parse_config
from .errors import ConfigNotFound, IoError, ParseError, ValidationError
from .reports import metrics_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_PARSE = 4
EXIT_INVALID = 5
EXIT_IO = 6

OUT_ENV = "VANET_MAGENT_OUT"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vanet-magent",
                                 description="VANET simulator with mobile-agent QoS route discovery")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write its artifacts")
    run.add_argument("--config", required=True)
    run.add_argument("--out-dir", default=os.environ.get(OUT_ENV))
    run.add_argument("--seed", type=int, default=None, help="overrides the config seed")

    bench = sub.add_parser("bench-strategies", help="compare CS and MA dispatch strategies")
    bench.add_argument("--config", required=True)
    bench.add_argument("--out-dir", default=os.environ.get(OUT_ENV))

    val = sub.add_parser("validate-config", help="check a config file and print the effective config")
    val.add_argument("--config", required=True)
    return ap


def _load(path):
    try:
        return parse_config(path), None
    except ConfigNotFound as e:
        return None, (EXIT_NOT_FOUND, str(e))
    except ParseError as e:
        return None, (EXIT_PARSE, f"parse error: {e}")
    except ValidationError as e:
        return None, (EXIT_INVALID, str(e))


def main(argv=None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    cfg, err = _load(args.config)
    if err:
        print(err[1], file=sys.stderr)
        return err[0]

    if args.command == "validate-config":
        sys.stdout.write(cfg.to_json())
        return EXIT_OK

    if not args.out_dir:
        print(f"--out-dir is required (or set {OUT_ENV})", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "run":
            from .scenario import run_scenario

            if args.seed is not None and not 0 <= args.seed < 2**64:
                print("--seed must be a 64-bit unsigned integer", file=sys.stderr)
                return EXIT_USAGE
            result = run_scenario(cfg, args.out_dir, seed=args.seed)
            sys.stdout.write(metrics_json(result.metrics))
        else:
            rows = []
            for t in cfg.bench.tasks:
                task = TaskSpec(n=t.n, q=t.q, s=t.s, c=t.c, u=t.u, p=t.p, L=t.L, k=t.k)
                for r in compare_strategies(task):
                    rows.append((task, r))
            os.makedirs(args.out_dir, exist_ok=True)
            path = os.path.join(args.out_dir, "strategy_bench.csv")
            write_bench_csv(rows, path)
            width = max(len(s.value) for s in Strategy)
            for task, r in rows:
                print(f"n={task.n} k={task.k} {r.strategy.value:<{width}} latency={r.total_latency_ms} ms "
                      f"bytes={r.total_bytes} messages={r.message_count}")
    except (IoError, OSError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
