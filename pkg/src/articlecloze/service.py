"""Survey session engine: assignment, QC gating, persistence, export.

Each session serves a fixed number of pool items plus a few quality-control
items spliced in at seeded random positions, indistinguishable from pool
items in everything the client sees. Pool items are assigned least-covered
first (coverage counts recorded answers plus outstanding assignments in
active sessions, ignoring discarded sessions) with seeded tie-breaking, and
never twice to the same participant. One wrong quality-control answer
terminates the session; its data is excluded from export.

All state changes go through the append-only store before they are
acknowledged, so a crash-and-restart reconstructs exactly the acknowledged
history.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .agreement import AnnotationRecord
from .corpus import ArticleLabel
from .dataset import ClozeExample, render_example_text
from .store import AnnotationLogStore

#: Fixed choice order shown to annotators.
CHOICES = ("a/an", "the", "Zero (Ø)")
CHOICE_LABELS = (ArticleLabel.A, ArticleLabel.THE, ArticleLabel.ZERO)


class ServiceError(Exception):
    pass


class UnknownSessionError(ServiceError):
    pass


class DuplicateSessionError(ServiceError):
    pass


class InsufficientItemsError(ServiceError):
    pass


class SessionStateError(ServiceError):
    def __init__(self, session_id: str, state: "SessionState"):
        self.state = state
        super().__init__(f"session {session_id} is {state.value}, not active")


class SubmissionOrderError(ServiceError):
    """Replayed or out-of-order submission; the store is left unchanged."""


class InvalidChoiceError(ServiceError):
    pass


class SessionState(str, Enum):
    ACTIVE = "active"
    COMPLETED = "completed"
    QC_FAILED = "qc_failed"
    ABANDONED = "abandoned"


class SubmitOutcome(str, Enum):
    CONTINUE = "continue"
    COMPLETED = "completed"
    TERMINATED_QC = "terminated_qc"


@dataclass
class AssignedItem:
    example_id: str
    is_qc: bool


@dataclass
class Session:
    session_id: str
    participant_id: str
    items: list[AssignedItem]
    cursor: int = 0
    state: SessionState = SessionState.ACTIVE


@dataclass(frozen=True)
class ItemView:
    """What the client sees for one item: no gold label, no QC flag."""

    session_id: str
    item_token: str
    position: int  # 1-based
    total: int
    sentences: tuple[str, str, str]
    choices: tuple[str, ...] = CHOICES

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "item_token": self.item_token,
            "position": self.position,
            "total": self.total,
            "sentences": list(self.sentences),
            "choices": list(self.choices),
        }


def _coerce_choice(choice) -> ArticleLabel:
    if isinstance(choice, ArticleLabel):
        return choice
    try:
        return ArticleLabel(choice)
    except ValueError:
        raise InvalidChoiceError(
            f"choice must be one of {[l.value for l in ArticleLabel]}, got {choice!r}"
        ) from None


class AnnotationService:
    """Serves sessions over a pool of cloze examples with QC gating."""

    def __init__(
        self,
        pool: Sequence[ClozeExample],
        qc_items: Sequence[ClozeExample],
        store: AnnotationLogStore,
        *,
        n_items: int = 160,
        qc_count: int = 4,
        coverage_target: int = 5,
        seed: int = 0,
        keep_qc_failed_data: bool = False,
    ):
        self.pool = {e.id: e for e in pool}
        if len(self.pool) != len(pool):
            raise ValueError("duplicate example ids in pool")
        self.qc_items = {e.id: e for e in qc_items}
        overlap = self.pool.keys() & self.qc_items.keys()
        if overlap:
            raise ValueError(f"QC items must not come from the pool: {sorted(overlap)[:3]}")
        if qc_count > len(self.qc_items):
            raise ValueError(f"need {qc_count} QC items, curated set has {len(self.qc_items)}")
        self.store = store
        self.n_items = n_items
        self.qc_count = qc_count
        self.coverage_target = coverage_target
        self.seed = seed
        self.keep_qc_failed_data = keep_qc_failed_data
        self._lock = threading.RLock()
        self.sessions: dict[str, Session] = {}
        self._responses: dict[str, list[dict]] = {}
        self._session_counter = 0
        self._replay()

    # -- persistence ------------------------------------------------------

    def _replay(self) -> None:
        for event in self.store.events():
            kind = event["event"]
            if kind == "session_created":
                session = Session(
                    session_id=event["session_id"],
                    participant_id=event["participant_id"],
                    items=[AssignedItem(i["example_id"], i["is_qc"]) for i in event["items"]],
                )
                self.sessions[session.session_id] = session
                self._responses[session.session_id] = []
                self._session_counter += 1
            elif kind == "response":
                self._responses[event["session_id"]].append(event)
                self.sessions[event["session_id"]].cursor += 1
            elif kind == "state":
                self.sessions[event["session_id"]].state = SessionState(event["state"])

    def _set_state(self, session: Session, state: SessionState) -> None:
        self.store.append(
            {"event": "state", "session_id": session.session_id, "state": state.value}
        )
        session.state = state

    # -- assignment -------------------------------------------------------

    def _coverage(self) -> dict[str, int]:
        """Answered plus outstanding assignments per pool item.

        Sessions whose data is discarded (QC-failed, abandoned) contribute
        nothing: their items become assignable again.
        """
        counts = {example_id: 0 for example_id in self.pool}
        for session in self.sessions.values():
            if session.state in (SessionState.QC_FAILED, SessionState.ABANDONED):
                continue
            for idx, item in enumerate(session.items):
                if item.is_qc or item.example_id not in counts:
                    continue
                if idx < session.cursor or session.state is SessionState.ACTIVE:
                    counts[item.example_id] += 1
        return counts

    def coverage(self) -> dict[str, int]:
        """Completed-annotation count per pool item (exported data only)."""
        counts = {example_id: 0 for example_id in self.pool}
        for record in self.export_annotations():
            if not record.is_quality_control and record.example_id in counts:
                counts[record.example_id] += 1
        return counts

    def create_session(self, participant_id: str) -> Session:
        with self._lock:
            seen: set[str] = set()
            for session in self.sessions.values():
                if session.participant_id != participant_id:
                    continue
                if session.state is SessionState.ACTIVE:
                    raise DuplicateSessionError(
                        f"participant {participant_id!r} already has an active session"
                    )
                seen.update(i.example_id for i in session.items if not i.is_qc)
            eligible = [e for e in self.pool if e not in seen]
            if len(eligible) < self.n_items:
                raise InsufficientItemsError(
                    f"need {self.n_items} unseen pool items for {participant_id!r}, "
                    f"only {len(eligible)} available"
                )
            rng = random.Random(f"{self.seed}:session:{self._session_counter}")
            coverage = self._coverage()
            eligible.sort(key=lambda e: (coverage[e], rng.random(), e))
            chosen = eligible[: self.n_items]
            qc_chosen = rng.sample(sorted(self.qc_items), self.qc_count)
            total = self.n_items + self.qc_count
            qc_positions = set(rng.sample(range(total), self.qc_count))
            items: list[AssignedItem] = []
            pool_iter = iter(chosen)
            qc_iter = iter(qc_chosen)
            for position in range(total):
                if position in qc_positions:
                    items.append(AssignedItem(next(qc_iter), is_qc=True))
                else:
                    items.append(AssignedItem(next(pool_iter), is_qc=False))
            session = Session(
                session_id=f"sess{self._session_counter:05d}",
                participant_id=participant_id,
                items=items,
            )
            self.store.append(
                {
                    "event": "session_created",
                    "session_id": session.session_id,
                    "participant_id": participant_id,
                    "items": [
                        {"example_id": i.example_id, "is_qc": i.is_qc} for i in session.items
                    ],
                }
            )
            self.sessions[session.session_id] = session
            self._responses[session.session_id] = []
            self._session_counter += 1
            return session

    # -- survey flow ------------------------------------------------------

    def _get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"no such session: {session_id!r}")
        return session

    def _example(self, item: AssignedItem) -> ClozeExample:
        return self.qc_items[item.example_id] if item.is_qc else self.pool[item.example_id]

    def session_state(self, session_id: str) -> str:
        return self._get_session(session_id).state.value

    def next_item(self, session_id: str) -> Optional[ItemView]:
        """The item at the cursor, or None as the completion signal."""
        with self._lock:
            session = self._get_session(session_id)
            if session.state is SessionState.COMPLETED:
                return None
            if session.state is not SessionState.ACTIVE:
                raise SessionStateError(session_id, session.state)
            if session.cursor >= len(session.items):
                self._set_state(session, SessionState.COMPLETED)
                return None
            item = session.items[session.cursor]
            text = render_example_text(self._example(item), style="survey")
            sentences = tuple(text.split("\n"))
            return ItemView(
                session_id=session_id,
                item_token=f"{session_id}:{session.cursor}",
                position=session.cursor + 1,
                total=len(session.items),
                sentences=sentences,  # type: ignore[arg-type]
            )

    def _parse_token(self, session: Session, item_token: str) -> int:
        sid, sep, cursor_text = item_token.rpartition(":")
        if not sep or sid != session.session_id or not cursor_text.isdigit():
            raise SubmissionOrderError(f"malformed item token {item_token!r}")
        cursor = int(cursor_text)
        if cursor < session.cursor:
            raise SubmissionOrderError(
                f"item {cursor} already recorded (session at {session.cursor})"
            )
        if cursor > session.cursor:
            raise SubmissionOrderError(
                f"item {cursor} submitted out of order (session at {session.cursor})"
            )
        return cursor

    def submit_response(
        self,
        session_id: str,
        item_token: str,
        choice,
        elapsed_ms: Optional[int] = None,
    ) -> SubmitOutcome:
        with self._lock:
            session = self._get_session(session_id)
            if session.state is not SessionState.ACTIVE:
                raise SessionStateError(session_id, session.state)
            label = _coerce_choice(choice)
            cursor = self._parse_token(session, item_token)
            if cursor >= len(session.items):
                raise SubmissionOrderError("session has no pending item")
            item = session.items[cursor]
            event = {
                "event": "response",
                "session_id": session_id,
                "cursor": cursor,
                "example_id": item.example_id,
                "annotator_id": session.participant_id,
                "choice": label.value,
                "is_quality_control": item.is_qc,
                "elapsed_ms": elapsed_ms,
            }
            self.store.append(event)  # acknowledged once durable
            self._responses[session_id].append(event)
            session.cursor += 1
            if item.is_qc and label is not self._example(item).gold:
                self._set_state(session, SessionState.QC_FAILED)
                return SubmitOutcome.TERMINATED_QC
            if session.cursor == len(session.items):
                self._set_state(session, SessionState.COMPLETED)
                return SubmitOutcome.COMPLETED
            return SubmitOutcome.CONTINUE

    def abandon_session(self, session_id: str) -> None:
        with self._lock:
            session = self._get_session(session_id)
            if session.state is not SessionState.ACTIVE:
                raise SessionStateError(session_id, session.state)
            self._set_state(session, SessionState.ABANDONED)

    # -- export -----------------------------------------------------------

    def export_annotations(self) -> list[AnnotationRecord]:
        """Records from completed sessions, ordered by (example, annotator).

        QC-failed and abandoned sessions are excluded entirely unless the
        service was built with ``keep_qc_failed_data``.
        """
        keep_states = {SessionState.COMPLETED}
        if self.keep_qc_failed_data:
            keep_states.add(SessionState.QC_FAILED)
        records = []
        for session in self.sessions.values():
            if session.state not in keep_states:
                continue
            for event in self._responses[session.session_id]:
                records.append(
                    AnnotationRecord(
                        example_id=event["example_id"],
                        annotator_id=event["annotator_id"],
                        choice=ArticleLabel(event["choice"]),
                        is_quality_control=event["is_quality_control"],
                        session_id=event["session_id"],
                        elapsed_ms=event.get("elapsed_ms"),
                    )
                )
        records.sort(key=lambda r: (r.example_id, r.annotator_id, r.session_id))
        return records

    # -- simulation helpers (server-side; never exposed over the wire) -----

    def example_for_token(self, item_token: str) -> ClozeExample:
        sid, _, cursor_text = item_token.rpartition(":")
        session = self._get_session(sid)
        return self._example(session.items[int(cursor_text)])

    def is_quality_control_token(self, item_token: str) -> bool:
        sid, _, cursor_text = item_token.rpartition(":")
        session = self._get_session(sid)
        return session.items[int(cursor_text)].is_qc
