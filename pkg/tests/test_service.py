"""Annotation service: assignment, QC gating, durability, export policy."""

import json

import pytest

from articlecloze.agreement import aggregate
from articlecloze.corpus import ArticleLabel
from articlecloze.dataset import build_all_examples
from articlecloze.fixtures import simulate_participants, synthetic_corpus
from articlecloze.service import (
    AnnotationService,
    DuplicateSessionError,
    InsufficientItemsError,
    InvalidChoiceError,
    SessionStateError,
    SubmissionOrderError,
    SubmitOutcome,
    UnknownSessionError,
)
from articlecloze.store import AnnotationLogStore
from articlecloze.zerotag import default_config, tag_document


def make_examples(n, seed=0):
    docs = synthetic_corpus(n_sentences=5 * ((n + 2) // 3 + 2), seed=seed)
    tagged = [tag_document(d, default_config()) for d in docs]
    examples = build_all_examples(tagged)
    assert len(examples) >= n
    return examples[:n]


@pytest.fixture
def store(tmp_path):
    return AnnotationLogStore(tmp_path / "store.jsonl", fsync=False)


def make_service(store, pool_n=20, qc_n=6, **kwargs):
    pool = make_examples(pool_n, seed=1)
    qc_items = make_examples(pool_n + qc_n, seed=1)[pool_n:]
    defaults = dict(n_items=10, qc_count=2, coverage_target=3, seed=0)
    defaults.update(kwargs)
    return AnnotationService(pool, qc_items, store, **defaults)


class TestSessionCreation:
    def test_session_mixes_pool_and_qc(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        assert len(session.items) == 12
        assert sum(item.is_qc for item in session.items) == 2
        qc_positions = [i for i, item in enumerate(session.items) if item.is_qc]
        assert qc_positions == sorted(qc_positions)

    def test_duplicate_active_session_rejected(self, store):
        service = make_service(store)
        service.create_session("alice")
        with pytest.raises(DuplicateSessionError):
            service.create_session("alice")

    def test_insufficient_items(self, store):
        service = make_service(store, pool_n=5)
        with pytest.raises(InsufficientItemsError):
            service.create_session("alice")

    def test_no_item_twice_to_one_participant(self, store):
        service = make_service(store, pool_n=25)
        first = service.create_session("alice")
        for item in list(first.items):
            view = service.next_item(first.session_id)
            service.submit_response(
                first.session_id, view.item_token, service.example_for_token(view.item_token).gold
            )
        second = service.create_session("alice")
        first_pool = {i.example_id for i in first.items if not i.is_qc}
        second_pool = {i.example_id for i in second.items if not i.is_qc}
        assert first_pool & second_pool == set()

    def test_least_covered_first(self, store):
        service = make_service(store, pool_n=21, n_items=10)
        # alice covers 10 items; bob must receive the other 11 minus one.
        done = simulate_participants(service, 1)
        assert done == {"p000": "completed"}
        covered = {k for k, v in service.coverage().items() if v == 1}
        assert len(covered) == 10
        bob = service.create_session("bob")
        bob_items = {i.example_id for i in bob.items if not i.is_qc}
        # the 11 uncovered items sort first; 10 of them fill bob's session
        assert len(bob_items & covered) == 0

    def test_qc_never_from_pool(self, store):
        pool = make_examples(20, seed=1)
        with pytest.raises(ValueError, match="pool"):
            AnnotationService(pool, pool[:4], store, n_items=5, qc_count=2)


class TestSurveyFlow:
    def test_item_view_is_blinded(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = service.next_item(session.session_id)
        payload = view.to_json()
        assert set(payload) == {
            "session_id", "item_token", "position", "total", "sentences", "choices"
        }
        assert payload["choices"] == ["a/an", "the", "Zero (Ø)"]
        assert len(payload["sentences"]) == 3
        assert sum(s.count("BLANK") for s in payload["sentences"]) == 1
        text = json.dumps(payload)
        assert "gold" not in text and "is_qc" not in text

    def test_worked_example_rendering(self, store):
        # The canonical worked item: the middle sentence's mass-noun zero
        # slot renders as BLANK while context markers stay visible.
        from articlecloze.dataset import build_examples
        from articlecloze.zerotag import default_config, tag_document

        from conftest import PTA_PASSAGE, passage_document

        doc = tag_document(passage_document(PTA_PASSAGE), default_config())
        example = next(e for e in build_examples(doc) if e.gold is ArticleLabel.ZERO)
        qc_items = make_examples(6, seed=9)
        service = AnnotationService(
            [example], qc_items, store, n_items=1, qc_count=1, coverage_target=1
        )
        session = service.create_session("alice")
        texts = []
        for _ in session.items:
            view = service.next_item(session.session_id)
            texts.append("\n".join(view.sentences))
            service.submit_response(
                session.session_id, view.item_token, service.example_for_token(view.item_token).gold
            )
        rendered = "\n".join(texts)
        assert "That takes BLANK care of Sunday ." in rendered
        assert "in ø awe of the formidable women" in rendered

    def test_qc_items_render_like_pool_items(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        keys_seen = set()
        while True:
            view = service.next_item(session.session_id)
            if view is None:
                break
            keys_seen.add(tuple(sorted(view.to_json())))
            service.submit_response(
                session.session_id, view.item_token, service.example_for_token(view.item_token).gold
            )
        assert len(keys_seen) == 1  # identical shape for QC and pool items

    def test_completion_flow(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        outcomes = []
        for _ in range(len(session.items)):
            view = service.next_item(session.session_id)
            outcomes.append(
                service.submit_response(
                    session.session_id,
                    view.item_token,
                    service.example_for_token(view.item_token).gold,
                )
            )
        assert outcomes[-1] is SubmitOutcome.COMPLETED
        assert all(o is SubmitOutcome.CONTINUE for o in outcomes[:-1])
        assert service.session_state(session.session_id) == "completed"
        assert service.next_item(session.session_id) is None  # completion signal

    def test_replay_rejected_store_unchanged(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = service.next_item(session.session_id)
        gold = service.example_for_token(view.item_token).gold
        service.submit_response(session.session_id, view.item_token, gold)
        events_before = list(store.events())
        with pytest.raises(SubmissionOrderError, match="already recorded"):
            service.submit_response(session.session_id, view.item_token, gold)
        assert list(store.events()) == events_before

    def test_out_of_order_rejected(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        with pytest.raises(SubmissionOrderError, match="out of order"):
            service.submit_response(session.session_id, f"{session.session_id}:3", ArticleLabel.A)

    def test_invalid_choice(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = service.next_item(session.session_id)
        with pytest.raises(InvalidChoiceError):
            service.submit_response(session.session_id, view.item_token, "An")

    def test_unknown_session(self, store):
        service = make_service(store)
        with pytest.raises(UnknownSessionError):
            service.next_item("nope")


class TestQcGating:
    def run_until_qc(self, service, session):
        while True:
            view = service.next_item(session.session_id)
            if service.is_quality_control_token(view.item_token):
                return view
            service.submit_response(
                session.session_id, view.item_token, service.example_for_token(view.item_token).gold
            )

    def test_wrong_qc_answer_terminates(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = self.run_until_qc(service, session)
        gold = service.example_for_token(view.item_token).gold
        wrong = next(l for l in ArticleLabel if l is not gold)
        outcome = service.submit_response(session.session_id, view.item_token, wrong)
        assert outcome is SubmitOutcome.TERMINATED_QC
        assert service.session_state(session.session_id) == "qc_failed"
        with pytest.raises(SessionStateError, match="qc_failed"):
            service.next_item(session.session_id)

    def test_correct_qc_answer_continues(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = self.run_until_qc(service, session)
        gold = service.example_for_token(view.item_token).gold
        assert service.submit_response(session.session_id, view.item_token, gold) in (
            SubmitOutcome.CONTINUE,
            SubmitOutcome.COMPLETED,
        )

    def test_qc_failed_session_excluded_from_export(self, store):
        service = make_service(store)
        outcomes = simulate_participants(service, 2, fail_qc=["p001"])
        assert outcomes == {"p000": "completed", "p001": "qc_failed"}
        records = service.export_annotations()
        assert records, "completed session must export"
        assert {r.annotator_id for r in records} == {"p000"}

    def test_keep_qc_failed_flag(self, store):
        service = make_service(store, keep_qc_failed_data=True)
        simulate_participants(service, 1, fail_qc=["p000"])
        records = service.export_annotations()
        assert records
        assert {r.annotator_id for r in records} == {"p000"}


class TestExport:
    def test_completed_session_exports_all_records(self, store):
        service = make_service(store)
        simulate_participants(service, 1)
        records = service.export_annotations()
        assert len(records) == 12
        assert sum(r.is_quality_control for r in records) == 2
        ordering = [(r.example_id, r.annotator_id) for r in records]
        assert ordering == sorted(ordering)

    def test_active_and_abandoned_sessions_excluded(self, store):
        service = make_service(store)
        session = service.create_session("alice")
        view = service.next_item(session.session_id)
        service.submit_response(
            session.session_id, view.item_token, service.example_for_token(view.item_token).gold
        )
        assert service.export_annotations() == []
        service.abandon_session(session.session_id)
        assert service.export_annotations() == []
        assert service.session_state(session.session_id) == "abandoned"

    def test_empty_store_empty_export(self, store):
        service = make_service(store)
        assert service.export_annotations() == []

    def test_export_feeds_aggregate(self, store):
        # 5 participants x coverage target 5 over a small pool
        pool = make_examples(10, seed=2)
        qc_items = make_examples(16, seed=2)[10:]
        service = AnnotationService(
            pool, qc_items, store, n_items=10, qc_count=2, coverage_target=5, seed=3
        )
        simulate_participants(service, 5)
        records = service.export_annotations()
        result = aggregate(records, control_seed=1)
        assert len(result.summaries) == 10
        assert all(s.agreement_level == 4 for s in result.summaries)  # scripted gold answers


class TestDurability:
    def test_crash_and_restart_preserves_acknowledged_records(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = AnnotationLogStore(path, fsync=True)
        service = make_service(store)
        session = service.create_session("alice")
        submitted = []
        for _ in range(5):
            view = service.next_item(session.session_id)
            service.submit_response(
                session.session_id, view.item_token, service.example_for_token(view.item_token).gold
            )
            submitted.append(view.item_token)
        store.close()  # crash: process gone, file remains

        revived = AnnotationService(
            make_examples(20, seed=1),
            make_examples(26, seed=1)[20:],
            AnnotationLogStore(path, fsync=True),
            n_items=10,
            qc_count=2,
            coverage_target=3,
            seed=0,
        )
        revived_session = revived.sessions[session.session_id]
        assert revived_session.cursor == 5
        assert revived_session.state.value == "active"
        assert [i.example_id for i in revived_session.items] == [
            i.example_id for i in session.items
        ]
        # the survey resumes exactly where it stopped
        view = revived.next_item(session.session_id)
        assert view.position == 6

    def test_torn_tail_line_ignored(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = AnnotationLogStore(path, fsync=False)
        service = make_service(store)
        session = service.create_session("alice")
        view = service.next_item(session.session_id)
        gold = service.example_for_token(view.item_token).gold
        service.submit_response(session.session_id, view.item_token, gold)
        store.close()
        with open(path, "a", encoding="utf-8") as fh:
            fh.write('{"event": "response", "session_id": "sess000')  # torn write
        revived_store = AnnotationLogStore(path, fsync=False)
        events = list(revived_store.events())
        assert events[-1]["event"] == "response"
        assert events[-1]["choice"] == gold.value

    def test_compact_preserves_events(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = AnnotationLogStore(path, fsync=False)
        service = make_service(store)
        simulate_participants(service, 1)
        before = list(store.events())
        kept = store.compact()
        assert kept == len(before)
        assert list(store.events()) == before
        # the service still replays identically
        service2 = make_service(AnnotationLogStore(path, fsync=False))
        assert service2.export_annotations() == service.export_annotations()


class TestCoverageScheduler:
    def test_every_item_reaches_exact_target(self, tmp_path):
        # 15 participants x 8 items over a 24-item pool at target 5:
        # 15*8 = 120 = 24*5 annotations, so coverage must end exactly 5 each.
        pool = make_examples(24, seed=4)
        qc_items = make_examples(27, seed=4)[24:]
        store = AnnotationLogStore(tmp_path / "store.jsonl", fsync=False)
        service = AnnotationService(
            pool, qc_items, store, n_items=8, qc_count=1, coverage_target=5, seed=5
        )
        outcomes = simulate_participants(service, 15)
        assert set(outcomes.values()) == {"completed"}
        coverage = service.coverage()
        assert set(coverage.values()) == {5}

    def test_failed_sessions_release_items(self, store):
        service = make_service(store, pool_n=20, n_items=10)
        simulate_participants(service, 1, fail_qc=["p000"])
        # all of p000's items are assignable again: full session available
        session = service.create_session("fresh")
        assert len([i for i in session.items if not i.is_qc]) == 10
        coverage = service.coverage()
        assert set(coverage.values()) == {0}
