"""On-disk formats: item collections, append-only observation logs, model
snapshots, score exports, and experiment reports.

Everything is line-delimited JSON with a ``format_version`` header line, so
files stream and stay human-inspectable. Observation logs are the source of
truth: they carry the model config and the item collection in their header,
and replaying a log reproduces the exact live state that wrote it. Scores
travel on the wire in the annotator-facing 0-100 scale and are normalized
to [0, 1] at the model boundary.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .models import ModelConfig, ModelState, PairwiseOutcome

FORMAT_VERSION = 1


class PersistenceError(Exception):
    """Malformed or inconsistent on-disk data."""


@dataclass(frozen=True)
class ItemRecord:
    item_id: str
    payload: str
    oracle_value: float | None = None

    def __post_init__(self) -> None:
        if not self.item_id:
            raise ValueError("item_id must be non-empty")
        if not self.payload:
            raise ValueError(f"payload for {self.item_id!r} must be non-empty")
        if self.oracle_value is not None and not (
            math.isfinite(self.oracle_value) and 0.0 <= self.oracle_value <= 1.0
        ):
            raise ValueError(f"oracle_value must be in [0, 1], got {self.oracle_value}")

    def to_dict(self) -> dict:
        d: dict = {"item_id": self.item_id, "payload": self.payload}
        if self.oracle_value is not None:
            d["oracle_value"] = self.oracle_value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ItemRecord":
        return cls(d["item_id"], d["payload"], d.get("oracle_value"))


@dataclass
class ObservationRecord:
    """One elicited judgment bound to a HIT and an annotator.

    ``kind`` is "scalar" (item_id + score on the 0-100 wire scale) or
    "pairwise" (winner/loser ids + tie flag). ``seq`` is assigned by the
    log on append.
    """

    kind: str
    hit_id: str
    annotator_id: str
    item_id: str | None = None
    score: float | None = None
    winner: str | None = None
    loser: str | None = None
    tie: bool = False
    seq: int | None = None
    timestamp: float = 0.0

    def __post_init__(self) -> None:
        if self.kind == "scalar":
            if self.item_id is None or self.score is None:
                raise ValueError("scalar record needs item_id and score")
            if not (math.isfinite(self.score) and 0.0 <= self.score <= 100.0):
                raise ValueError(f"wire score must be in [0, 100], got {self.score}")
        elif self.kind == "pairwise":
            if not self.winner or not self.loser:
                raise ValueError("pairwise record needs winner and loser")
        else:
            raise ValueError(f"unknown record kind {self.kind!r}")

    def to_dict(self) -> dict:
        d: dict = {
            "seq": self.seq,
            "timestamp": self.timestamp,
            "hit_id": self.hit_id,
            "annotator_id": self.annotator_id,
            "kind": self.kind,
        }
        if self.kind == "scalar":
            d["item_id"] = self.item_id
            d["score"] = self.score
        else:
            d["winner"] = self.winner
            d["loser"] = self.loser
            d["tie"] = self.tie
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ObservationRecord":
        return cls(
            kind=d["kind"],
            hit_id=d["hit_id"],
            annotator_id=d["annotator_id"],
            item_id=d.get("item_id"),
            score=d.get("score"),
            winner=d.get("winner"),
            loser=d.get("loser"),
            tie=bool(d.get("tie", False)),
            seq=d["seq"],
            timestamp=d.get("timestamp", 0.0),
        )


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _parse_line(line: str, lineno: int, path: str) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise PersistenceError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise PersistenceError(f"{path}:{lineno}: expected an object")
    return obj


def _check_header(obj: dict, expected_type: str, lineno: int, path: str) -> dict:
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise PersistenceError(
            f"{path}:{lineno}: unsupported format_version {version!r}"
        )
    if obj.get("type") != expected_type:
        raise PersistenceError(
            f"{path}:{lineno}: expected type {expected_type!r}, got {obj.get('type')!r}"
        )
    return obj


# ---------------------------------------------------------------------------
# Item collections
# ---------------------------------------------------------------------------


def write_items(items: Sequence[ItemRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dumps({"format_version": FORMAT_VERSION, "type": "items"}) + "\n")
        for item in items:
            fh.write(_dumps(item.to_dict()) + "\n")


def load_items(path: str | Path) -> list[ItemRecord]:
    items: list[ItemRecord] = []
    seen: set[str] = set()
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = _parse_line(line, lineno, str(path))
            if not header_seen:
                _check_header(obj, "items", lineno, str(path))
                header_seen = True
                continue
            try:
                item = ItemRecord.from_dict(obj)
            except (KeyError, ValueError) as exc:
                raise PersistenceError(f"{path}:{lineno}: bad item record ({exc})") from exc
            if item.item_id in seen:
                raise PersistenceError(
                    f"{path}:{lineno}: duplicate item_id {item.item_id!r}"
                )
            seen.add(item.item_id)
            items.append(item)
    if not items:
        raise PersistenceError(f"{path}: no item records")
    return items


# ---------------------------------------------------------------------------
# Observation logs
# ---------------------------------------------------------------------------


class ObservationLog:
    """Append-only judgment log with a self-describing header.

    The header pins the model config and the item collection, which makes
    a log fully replayable on its own. A single writer owns a log.
    """

    def __init__(self, path: str | Path, cfg: ModelConfig, items: Sequence[ItemRecord]):
        self.path = Path(path)
        self.cfg = cfg
        self.items = list(items)
        self._last_seq = 0
        self._fh: io.TextIOWrapper | None = None

    @classmethod
    def create(
        cls,
        path: str | Path,
        cfg: ModelConfig,
        items: Sequence[ItemRecord],
        meta: dict | None = None,
    ) -> "ObservationLog":
        log = cls(path, cfg, items)
        header = {
            "format_version": FORMAT_VERSION,
            "type": "observations",
            "config": cfg.to_dict(),
            "items": [i.to_dict() for i in items],
        }
        if meta:
            header["meta"] = meta
        log._fh = open(path, "w", encoding="utf-8")
        log._fh.write(_dumps(header) + "\n")
        log._fh.flush()
        return log

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self) -> "ObservationLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def append(self, record: ObservationRecord) -> int:
        if self._fh is None:
            raise PersistenceError(f"log {self.path} is not open for writing")
        if record.seq is None:
            record.seq = self._last_seq + 1
        if record.seq <= self._last_seq:
            raise PersistenceError(
                f"seq must increase: got {record.seq} after {self._last_seq}"
            )
        self._last_seq = record.seq
        self._fh.write(_dumps(record.to_dict()) + "\n")
        self._fh.flush()
        return record.seq


def append_observation(log: ObservationLog, record: ObservationRecord) -> int:
    """Append one record; returns its assigned sequence number."""
    return log.append(record)


@dataclass
class LogData:
    cfg: ModelConfig
    items: list[ItemRecord]
    records: list[ObservationRecord]
    meta: dict


def read_log(path: str | Path) -> LogData:
    """Read a log's header and records, verifying seq monotonicity."""
    cfg: ModelConfig | None = None
    items: list[ItemRecord] = []
    records: list[ObservationRecord] = []
    meta: dict = {}
    last_seq = 0
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = _parse_line(line, lineno, str(path))
            if not header_seen:
                header = _check_header(obj, "observations", lineno, str(path))
                header_seen = True
                try:
                    cfg = ModelConfig.from_dict(header["config"])
                    items = [ItemRecord.from_dict(d) for d in header["items"]]
                    meta = header.get("meta", {})
                except (KeyError, ValueError) as exc:
                    raise PersistenceError(
                        f"{path}:{lineno}: bad log header ({exc})"
                    ) from exc
                continue
            try:
                record = ObservationRecord.from_dict(obj)
            except (KeyError, ValueError) as exc:
                raise PersistenceError(
                    f"{path}:{lineno}: bad observation record ({exc})"
                ) from exc
            if record.seq is None or record.seq <= last_seq:
                raise PersistenceError(
                    f"{path}:{lineno}: seq regression ({record.seq} after {last_seq})"
                )
            last_seq = record.seq
            records.append(record)
    if cfg is None:
        raise PersistenceError(f"{path}: missing log header")
    return LogData(cfg, items, records, meta)


def apply_record_to_model(model: ModelState, record: ObservationRecord) -> None:
    """Feed one wire record into a model, normalizing the 0-100 score."""
    if record.kind == "scalar":
        model.apply_scalar(record.item_id, record.score / 100.0)
    else:
        kind = "tie" if record.tie else "win"
        model.apply_pairwise(PairwiseOutcome(record.winner, record.loser, kind))


def replay(path: str | Path, cfg: ModelConfig | None = None) -> ModelState:
    """Rebuild the model state a log produced, record by record.

    If ``cfg`` is given it must equal the config recorded in the log
    header; a mismatch is refused rather than silently reinterpreting the
    log under different hyperparameters.
    """
    data = read_log(path)
    if cfg is not None and cfg != data.cfg:
        raise PersistenceError(
            f"config mismatch: log was written under {data.cfg.to_dict()}"
        )
    model = ModelState(data.cfg, [i.item_id for i in data.items])
    for record in data.records:
        apply_record_to_model(model, record)
    return model


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------


def snapshot(model: ModelState, path: str | Path) -> None:
    """Write a deterministic, byte-stable snapshot of a model state."""
    doc = {
        "format_version": FORMAT_VERSION,
        "type": "snapshot",
        "state": model.to_snapshot_dict(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def restore(path: str | Path, expected_cfg: ModelConfig | None = None) -> ModelState:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PersistenceError(f"{path}: malformed snapshot ({exc.msg})") from exc
    if doc.get("format_version") != FORMAT_VERSION or doc.get("type") != "snapshot":
        raise PersistenceError(f"{path}: not a snapshot file")
    model = ModelState.from_snapshot_dict(doc["state"])
    if expected_cfg is not None and model.cfg != expected_cfg:
        raise PersistenceError(
            f"config mismatch: snapshot was written under {model.cfg.to_dict()}"
        )
    return model


# ---------------------------------------------------------------------------
# Score export and reports
# ---------------------------------------------------------------------------


def export_scores(model: ModelState, path: str | Path) -> None:
    """Ranked score table as CSV: item_id, score, variance, count."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item_id", "score", "variance", "count"])
        for row in model.scores_table():
            writer.writerow([row.item_id, repr(row.score), repr(row.variance), row.count])


def write_report(report_dict: dict, path: str | Path) -> None:
    """Write an experiment report as self-describing JSON lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dumps({"format_version": FORMAT_VERSION, "type": "report"}) + "\n")
        meta = {k: v for k, v in report_dict.items() if k not in ("iterations", "final_scores")}
        fh.write(_dumps({"kind": "meta", **meta}) + "\n")
        for it in report_dict.get("iterations", []):
            fh.write(_dumps({"kind": "iteration", **it}) + "\n")
        for row in report_dict.get("final_scores", []):
            fh.write(_dumps({"kind": "score", **row}) + "\n")


def read_report(path: str | Path) -> dict:
    meta: dict = {}
    iterations: list[dict] = []
    scores: list[dict] = []
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            obj = _parse_line(line, lineno, str(path))
            if not header_seen:
                _check_header(obj, "report", lineno, str(path))
                header_seen = True
                continue
            kind = obj.pop("kind", None)
            if kind == "meta":
                meta = obj
            elif kind == "iteration":
                iterations.append(obj)
            elif kind == "score":
                scores.append(obj)
            else:
                raise PersistenceError(f"{path}:{lineno}: unknown report line {kind!r}")
    meta["iterations"] = iterations
    meta["final_scores"] = scores
    return meta


def default_data_dir() -> Path:
    """Output directory: $EASL_DATA_DIR or ./easl-data."""
    return Path(os.environ.get("EASL_DATA_DIR", "easl-data"))
