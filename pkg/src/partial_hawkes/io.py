"""Event CSV files and their JSON sidecars."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .simulator import EventData, SimConfig


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_events(events: EventData, path, config: SimConfig | None = None) -> Path:
    """Write ``individual,timestamp`` rows in causal order plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write("individual,timestamp\n")
        for i, t in zip(events.ids.tolist(), events.times.tolist()):
            fh.write(f"{i},{t:.17g}\n")
    meta = {"N": events.N, "horizon": events.horizon, "total_events": events.total_events,
            "seed": events.seed}
    if config is not None:
        meta["config"] = config.to_dict()
    side = sidecar_path(path)
    side.write_text(json.dumps(meta, indent=2) + "\n")
    return side


def read_events(path, N: int | None = None, horizon: float | None = None) -> EventData:
    """Load an event CSV; N and horizon default to the sidecar values."""
    path = Path(path)
    side = sidecar_path(path)
    meta = json.loads(side.read_text()) if side.exists() else {}
    N = N if N is not None else meta.get("N")
    horizon = horizon if horizon is not None else meta.get("horizon")
    ids, times = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["individual", "timestamp"]:
            raise ValueError(f"expected header 'individual,timestamp', got {reader.fieldnames}")
        for row in reader:
            ids.append(int(row["individual"]))
            times.append(float(row["timestamp"]))
    ids = np.asarray(ids, dtype=np.int64)
    times = np.asarray(times, dtype=float)
    if N is None:
        if not ids.size:
            raise ValueError("cannot infer N from an empty event file without a sidecar")
        N = int(ids.max()) + 1
    if horizon is None:
        horizon = float(times.max()) if times.size else 0.0
    order = np.argsort(times, kind="stable")
    return EventData(int(N), float(horizon), times[order], ids[order], meta.get("seed"))
