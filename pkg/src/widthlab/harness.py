"""Suite runner: config loading, deterministic parallel execution, reports.

Reports are the contract: one CSV per experiment (RFC-4180, '.' decimal,
UTF-8, stable column order) plus a JSON summary {config, aggregates, verdict}
and a manifest recording sha256 digests of every written file.  CSV and JSON
outputs are byte-identical across reruns and parallelism levels; only the
manifest carries wall-clock timestamps.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .ensembles import ConfigError
from .experiments import ExperimentConfig, Report, run_experiment

__all__ = ["RunManifest", "parse_config", "run_suite", "summarize"]

TOOL_VERSION = "0.1.0"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


@dataclass
class RunManifest:
    config_path: Optional[str]
    master_seed: Optional[int]
    out_dir: str
    tool_version: str = TOOL_VERSION
    started: float = 0.0
    finished: float = 0.0
    files: Dict[str, str] = field(default_factory=dict)   # relpath -> sha256
    verdicts: Dict[str, str] = field(default_factory=dict)
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(v == "FAIL" for v in self.verdicts.values()) or bool(self.errors)

    def to_dict(self) -> dict:
        return {
            "config_path": self.config_path, "master_seed": self.master_seed,
            "out_dir": self.out_dir, "tool_version": self.tool_version,
            "started": self.started, "finished": self.finished,
            "files": self.files, "verdicts": self.verdicts, "errors": self.errors,
        }


def parse_config(path: str) -> List[ExperimentConfig]:
    """Load and validate a JSON experiment-suite config.

    The file is either a list of experiment objects or
    {"master_seed": ..., "experiments": [...]}; a top-level master_seed is a
    default for experiments that do not set their own.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from exc
    default_seed = None
    if isinstance(raw, dict):
        extra = set(raw) - {"master_seed", "experiments"}
        if extra:
            raise ConfigError(f"{path}: unknown top-level keys {sorted(extra)}")
        default_seed = raw.get("master_seed")
        raw = raw.get("experiments", [])
    if not isinstance(raw, list):
        raise ConfigError(f"{path}: expected a list of experiment objects")
    configs, seen = [], set()
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: experiment #{i} is not a JSON object")
        if default_seed is not None and "master_seed" not in entry:
            entry = dict(entry, master_seed=default_seed)
        try:
            cfg = ExperimentConfig.from_dict(entry)
        except (ConfigError, TypeError) as exc:
            raise ConfigError(f"{path}: experiment #{i}: {exc}") from exc
        if cfg.id in seen:
            raise ConfigError(f"{path}: duplicate experiment id '{cfg.id}'")
        seen.add(cfg.id)
        configs.append(cfg)
    return configs


def _csv_text(report: Report) -> str:
    buf = io.StringIO()
    cols = report.row_columns()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(cols)
    for row in report.rows:
        writer.writerow([_format_cell(row.get(c, "")) for c in cols])
    return buf.getvalue()


def _format_cell(v):
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    return v


def _write(out_dir: str, name: str, text: str, manifest: RunManifest) -> None:
    path = os.path.join(out_dir, name)
    data = text.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    manifest.files[name] = hashlib.sha256(data).hexdigest()


def run_suite(configs: List[ExperimentConfig], out_dir: str,
              parallelism: int = 1, config_path: Optional[str] = None) -> RunManifest:
    """Run every experiment, persist reports, return the manifest.

    Experiment failures (exceptions) are recorded per experiment and the suite
    continues; the manifest's ``failed`` flag covers both FAIL verdicts and
    errors.
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(config_path, configs[0].master_seed if configs else None,
                           out_dir, started=time.time())

    def _one(cfg: ExperimentConfig):
        return cfg.id, run_experiment(cfg)

    results: Dict[str, Report] = {}
    if parallelism <= 1 or len(configs) <= 1:
        for cfg in configs:
            try:
                results[cfg.id] = run_experiment(cfg)
            except Exception as exc:  # noqa: BLE001 - partial failure is recorded
                manifest.errors[cfg.id] = f"{type(exc).__name__}: {exc}"
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {cfg.id: pool.submit(run_experiment, cfg) for cfg in configs}
            for eid, fut in futures.items():
                try:
                    results[eid] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    manifest.errors[eid] = f"{type(exc).__name__}: {exc}"

    # single-threaded writer; iterate in config order for a stable manifest
    for cfg in configs:
        report = results.get(cfg.id)
        if report is None:
            continue
        _write(out_dir, f"{cfg.id}.csv", _csv_text(report), manifest)
        summary = {"config": report.config, "aggregates": report.aggregates,
                   "verdict": report.verdict}
        _write(out_dir, f"{cfg.id}.json", _dump_json(summary), manifest)
        manifest.verdicts[cfg.id] = report.verdict
    manifest.finished = time.time()
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(_dump_json(manifest.to_dict()))
    return manifest


def summarize(out_dir: str) -> dict:
    """Re-read a finished run directory and summarize verdicts, verifying digests."""
    mpath = os.path.join(out_dir, "manifest.json")
    if not os.path.exists(mpath):
        raise ConfigError(f"no manifest.json in {out_dir}")
    with open(mpath, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    mismatches = []
    for name, digest in manifest.get("files", {}).items():
        path = os.path.join(out_dir, name)
        if not os.path.exists(path):
            mismatches.append(f"{name}: missing")
            continue
        with open(path, "rb") as fh:
            actual = hashlib.sha256(fh.read()).hexdigest()
        if actual != digest:
            mismatches.append(f"{name}: digest mismatch")
    return {"verdicts": manifest.get("verdicts", {}),
            "errors": manifest.get("errors", {}),
            "integrity": mismatches or "ok"}
