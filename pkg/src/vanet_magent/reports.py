"""Batch artifacts written after a scenario run."""

from __future__ import annotations

import csv
import json
import os

from .agents import write_lifelog_csv
from .errors import IoError

ROUTES_HEADER = ["owner_dfa", "dst_dfa", "node_sequence", "hop_count", "bottleneck_kbps",
                 "est_delay_ms", "worst_loss_rate", "discovered_at_ms"]
COVERAGE_HEADER = ["time_ms", "alert_id", "covered_nodes"]
PAIRS_HEADER = ["owner_dfa", "dst_dfa", "path_count"]


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_routes_csv(tables, path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(ROUTES_HEADER)
        for owner in sorted(tables):
            for rec in tables[owner].records():
                w.writerow([owner, rec.dst_dfa, ";".join(map(str, rec.node_sequence)), rec.hop_count,
                            rec.bottleneck_kbps, rec.est_delay_ms, repr(rec.worst_loss_rate),
                            rec.discovered_at])


def write_paths_per_pair_csv(tables, path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(PAIRS_HEADER)
        for owner in sorted(tables):
            for dst in sorted(tables[owner].entries):
                w.writerow([owner, dst, len(tables[owner].entries[dst])])


def write_coverage_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(COVERAGE_HEADER)
        for r in records:
            if r.category == "alert_delivered":
                w.writerow([r.time, r.payload["alert"], r.payload["covered"]])


def metrics_json(metrics) -> str:
    return json.dumps(metrics.as_dict(), indent=2, sort_keys=True) + "\n"


def emit_reports(world, out_dir) -> dict[str, str]:
    """Write every artifact of a finished run into ``out_dir``."""
    try:
        os.makedirs(out_dir, exist_ok=True)
        files = {name: os.path.join(out_dir, name) for name in (
            "trace.jsonl", "lifelog.csv", "routes.csv", "metrics.json",
            "coverage_over_time.csv", "paths_per_pair.csv", "effective_config.json")}
        world.engine.trace.write(files["trace.jsonl"])
        write_lifelog_csv(world.runtime.lifelog, files["lifelog.csv"])
        write_routes_csv(world.qos.tables, files["routes.csv"])
        write_paths_per_pair_csv(world.qos.tables, files["paths_per_pair.csv"])
        write_coverage_csv(world.engine.trace.records, files["coverage_over_time.csv"])
        with open(files["metrics.json"], "w", newline="\n") as fh:
            fh.write(metrics_json(world.metrics()))
        with open(files["effective_config.json"], "w", newline="\n") as fh:
            fh.write(world.cfg.model_copy(update={"seed": world.seed}).to_json())
    except OSError as e:
        raise IoError(str(e)) from e
    return files
