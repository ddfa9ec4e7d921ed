"""HTTP service that serves HITs to live annotators and updates the model
online.

Each session owns one item collection, one model state, and one append-only
observation log. Annotators pull HITs (leased, so abandoned work returns to
the queue), submit 0-100 scores for every presented item, and the model is
updated per the session's method: scalar folds for DA and EASL, derived
pairwise outcomes for the RA methods. When an iteration's queue drains, the
next iteration's HITs are sampled from the updated state, which is what
closes the active-elicitation loop.

All mutations of a session are serialized under its lock, so the judgment
stream has a total order and replaying the session's log reproduces the
live state exactly. Submissions are idempotent per (hit_id, annotator_id).
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .models import Method, ModelConfig, ModelState, scores_to_outcomes
from .persistence import (
    ItemRecord,
    ObservationLog,
    ObservationRecord,
    default_data_dir,
)
from .scheduler import Hit, sample_hits


class LeaseConflict(Exception):
    """The request collides with an outstanding assignment."""


class CampaignComplete(Exception):
    """All iterations have been fully annotated."""


@dataclass
class SessionSettings:
    iterations: int = 10
    hits_per_iteration: int | None = None
    seed: int = 0
    lease_timeout: float = 600.0
    annotator_hit_cap: int | None = None  # per iteration; None = unlimited
    allow_anchor_comparators: bool = False


@dataclass
class _HitSlot:
    hit: Hit
    leased_to: str | None = None
    lease_expires: float = 0.0


class Session:
    """One live annotation campaign."""

    def __init__(
        self,
        session_id: str,
        items: Sequence[ItemRecord],
        cfg: ModelConfig,
        settings: SessionSettings,
        log_path: Path,
        clock: Callable[[], float] = time.monotonic,
    ):
        if not items:
            raise ValueError("session needs at least one item")
        self.session_id = session_id
        self.items = list(items)
        self.payloads = {i.item_id: i.payload for i in items}
        self.cfg = cfg
        self.settings = settings
        self.clock = clock
        self.lock = threading.Lock()
        self.model = ModelState(cfg, [i.item_id for i in items])
        self.log = ObservationLog.create(
            log_path,
            cfg,
            items,
            meta={
                "iterations": settings.iterations,
                "hits_per_iteration": settings.hits_per_iteration,
            },
        )
        self.iteration = 0
        self.complete = False
        self.queue: list[_HitSlot] = []
        self.completed_hits: dict[str, Hit] = {}
        self.acks: dict[tuple[str, str], dict] = {}
        self.seen: dict[str, set[str]] = {}
        self.annotator_completed: dict[str, int] = {}
        self.annotator_iteration_counts: dict[str, int] = {}
        self._iteration_seeds = np.random.SeedSequence(settings.seed).generate_state(
            max(settings.iterations, 1), dtype=np.uint32
        )
        self._build_queue()

    # -- queue construction -------------------------------------------------

    def _build_queue(self) -> None:
        if self.cfg.method == Method.DA:
            hits = [
                Hit(
                    hit_id=f"hit-{self.iteration:04d}-{idx:03d}",
                    iteration=self.iteration,
                    anchor_id=item.item_id,
                    item_ids=[item.item_id],
                )
                for idx, item in enumerate(self.items)
            ]
        else:
            hits = sample_hits(
                self.model.states(),
                self.cfg,
                rng_seed=int(self._iteration_seeds[self.iteration]),
                iteration=self.iteration,
                num_hits=self.settings.hits_per_iteration,
                allow_anchor_comparators=self.settings.allow_anchor_comparators,
            )
        self.queue = [_HitSlot(h) for h in hits]
        self.annotator_iteration_counts = {}

    def _sweep_leases(self) -> None:
        now = self.clock()
        for slot in self.queue:
            if slot.leased_to is not None and slot.lease_expires <= now:
                slot.leased_to = None

    def _advance_if_drained(self) -> None:
        if self.queue:
            return
        if self.iteration + 1 >= self.settings.iterations:
            self.complete = True
            return
        self.iteration += 1
        self._build_queue()

    # -- operations ----------------------------------------------------------

    def next_hit(self, annotator_id: str) -> Hit:
        if not annotator_id:
            raise ValueError("annotator id must be non-empty")
        with self.lock:
            self._sweep_leases()
            self._advance_if_drained()
            if self.complete:
                raise CampaignComplete
            seen = self.seen.setdefault(annotator_id, set())
            cap = self.settings.annotator_hit_cap
            if cap is not None and self.annotator_iteration_counts.get(annotator_id, 0) >= cap:
                raise LeaseConflict(
                    f"annotator {annotator_id!r} reached the per-iteration cap of {cap}"
                )
            for slot in self.queue:
                if slot.leased_to is None and slot.hit.hit_id not in seen:
                    slot.leased_to = annotator_id
                    slot.lease_expires = self.clock() + self.settings.lease_timeout
                    seen.add(slot.hit.hit_id)
                    return slot.hit
            raise LeaseConflict(
                "no HIT available: the current iteration is awaiting other annotators"
            )

    def submit_judgment(
        self, hit_id: str, annotator_id: str, scores: Sequence[float]
    ) -> dict:
        with self.lock:
            self._sweep_leases()
            key = (hit_id, annotator_id)
            if key in self.acks:
                return self.acks[key]  # idempotent replay of the original ack

            slot = next((s for s in self.queue if s.hit.hit_id == hit_id), None)
            if slot is None:
                if hit_id in self.completed_hits:
                    raise LeaseConflict(f"HIT {hit_id!r} was completed by another annotator")
                raise KeyError(f"unknown HIT {hit_id!r}")
            if slot.leased_to is not None and slot.leased_to != annotator_id:
                raise LeaseConflict(f"HIT {hit_id!r} is leased to another annotator")

            hit = slot.hit
            if len(scores) != len(hit.item_ids):
                raise ValueError(
                    f"expected {len(hit.item_ids)} scores, got {len(scores)}"
                )
            for s in scores:
                if not (0.0 <= float(s) <= 100.0):
                    raise ValueError(f"score out of [0, 100]: {s}")

            last_seq = 0
            count = 0
            if self.cfg.method in (Method.DA, Method.EASL):
                for item_id, score in zip(hit.item_ids, scores):
                    record = ObservationRecord(
                        kind="scalar",
                        hit_id=hit_id,
                        annotator_id=annotator_id,
                        item_id=item_id,
                        score=float(score),
                        timestamp=time.time(),
                    )
                    last_seq = self.log.append(record)
                    self.model.apply_scalar(item_id, float(score) / 100.0)
                    count += 1
            else:
                normalized = [float(s) / 100.0 for s in scores]
                for outcome in scores_to_outcomes(hit.item_ids, normalized):
                    record = ObservationRecord(
                        kind="pairwise",
                        hit_id=hit_id,
                        annotator_id=annotator_id,
                        winner=outcome.winner_id,
                        loser=outcome.loser_id,
                        tie=outcome.kind == "tie",
                        timestamp=time.time(),
                    )
                    last_seq = self.log.append(record)
                    self.model.apply_pairwise(outcome)
                    count += 1

            hit.status = "completed"
            self.queue.remove(slot)
            self.completed_hits[hit_id] = hit
            self.annotator_completed[annotator_id] = (
                self.annotator_completed.get(annotator_id, 0) + 1
            )
            self.annotator_iteration_counts[annotator_id] = (
                self.annotator_iteration_counts.get(annotator_id, 0) + 1
            )
            ack = {
                "session_id": self.session_id,
                "hit_id": hit_id,
                "seq": last_seq,
                "observations": count,
                "iteration": hit.iteration,
            }
            self.acks[key] = ack
            return ack

    def scores(self) -> list[dict]:
        with self.lock:
            return [
                {
                    "item_id": r.item_id,
                    "score": r.score,
                    "variance": r.variance,
                    "count": r.count,
                }
                for r in self.model.scores_table()
            ]

    def progress(self) -> dict:
        with self.lock:
            self._sweep_leases()
            leased = sum(1 for s in self.queue if s.leased_to is not None)
            per_iteration = (
                len(self.items)
                if self.cfg.method == Method.DA
                else len(self.queue) + sum(
                    1 for h in self.completed_hits.values() if h.iteration == self.iteration
                )
            )
            return {
                "session_id": self.session_id,
                "method": self.cfg.method.value,
                "iteration": self.iteration,
                "iterations_total": self.settings.iterations,
                "complete": self.complete,
                "hits_completed": len(self.completed_hits),
                "hits_pending": len(self.queue) - leased,
                "hits_leased": leased,
                "hits_this_iteration": per_iteration,
                "annotators": dict(sorted(self.annotator_completed.items())),
            }


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------


class ItemIn(BaseModel):
    item_id: str
    payload: str
    oracle_value: float | None = None


class SessionIn(BaseModel):
    items: list[ItemIn]
    config: dict
    iterations: int = Field(default=10, ge=1)
    hits_per_iteration: int | None = Field(default=None, ge=1)
    seed: int = 0
    lease_timeout: float = Field(default=600.0, gt=0.0)
    annotator_hit_cap: int | None = Field(default=None, ge=1)
    allow_anchor_comparators: bool = False


class JudgmentIn(BaseModel):
    hit_id: str
    annotator_id: str
    scores: list[float]


def register_session(
    app: FastAPI,
    items: Sequence[ItemRecord],
    cfg: ModelConfig,
    settings: SessionSettings,
) -> Session:
    """Open a new session on a running app (also used by the CLI)."""
    if len({i.item_id for i in items}) != len(items):
        raise ValueError("duplicate item ids")
    session_id = uuid.uuid4().hex[:12]
    session = Session(
        session_id,
        items,
        cfg,
        settings,
        log_path=app.state.data_dir / f"session-{session_id}.log",
        clock=app.state.clock,
    )
    app.state.sessions[session_id] = session
    return session


def create_app(
    data_dir: str | Path | None = None,
    clock: Callable[[], float] = time.monotonic,
) -> FastAPI:
    """Build the service. Observation logs land under ``data_dir``
    (default: $EASL_DATA_DIR or ./easl-data)."""
    app = FastAPI(title="easl annotation service")
    # The browser client may be served from another origin (static file host).
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    base = Path(data_dir) if data_dir is not None else default_data_dir()
    base.mkdir(parents=True, exist_ok=True)
    app.state.sessions = sessions
    app.state.data_dir = base
    app.state.clock = clock

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return session

    @app.get("/")
    def health() -> dict:
        return {"status": "ok", "service": "easl", "sessions": len(sessions)}

    @app.post("/api/sessions")
    def create_session(body: SessionIn) -> dict:
        try:
            cfg = ModelConfig.from_dict(body.config)
            items = [ItemRecord(i.item_id, i.payload, i.oracle_value) for i in body.items]
            settings = SessionSettings(
                iterations=body.iterations,
                hits_per_iteration=body.hits_per_iteration,
                seed=body.seed,
                lease_timeout=body.lease_timeout,
                annotator_hit_cap=body.annotator_hit_cap,
                allow_anchor_comparators=body.allow_anchor_comparators,
            )
            session = register_session(app, items, cfg, settings)
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(422, str(exc)) from exc
        return {
            "session_id": session.session_id,
            "config": cfg.to_dict(),
            "iterations": settings.iterations,
            "log_path": str(session.log.path),
        }

    @app.get("/api/sessions/{session_id}/next-hit")
    def next_hit(session_id: str, annotator: str) -> dict:
        session = get_session(session_id)
        try:
            hit = session.next_hit(annotator)
        except CampaignComplete:
            return {"status": "complete", "session_id": session_id}
        except LeaseConflict as exc:
            raise HTTPException(409, str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {
            "status": "ok",
            "session_id": session_id,
            "hit": {
                "hit_id": hit.hit_id,
                "iteration": hit.iteration,
                "anchor_id": hit.anchor_id,
                "items": [
                    {"item_id": i, "payload": session.payloads[i]} for i in hit.item_ids
                ],
            },
        }

    @app.post("/api/sessions/{session_id}/judgments")
    def submit_judgment(session_id: str, body: JudgmentIn) -> dict:
        session = get_session(session_id)
        try:
            return session.submit_judgment(body.hit_id, body.annotator_id, body.scores)
        except KeyError as exc:
            raise HTTPException(404, str(exc)) from exc
        except LeaseConflict as exc:
            raise HTTPException(409, str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc

    @app.get("/api/sessions/{session_id}/scores")
    def get_scores(session_id: str) -> dict:
        session = get_session(session_id)
        return {"session_id": session_id, "scores": session.scores()}

    @app.get("/api/sessions/{session_id}/progress")
    def get_progress(session_id: str) -> dict:
        return get_session(session_id).progress()

    return app
