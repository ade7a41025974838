#!/usr/bin/env python3
"""Drive the annotation service through its HTTP wire API.

Starts the real server on a local port, then runs scripted participants
against it with plain HTTP requests: create-session, next-item,
submit-response, export. Participants only ever see blinded item payloads;
this script answers by looking the rendered text up in its own copy of the
pool, the way a (very diligent) human would.

Usage: python3 scripts/simulate_annotators.py <pool.jsonl> <qc.jsonl> <store>
                                              [n_participants] [n_items]
"""

import sys
import threading
import time

import httpx
import uvicorn

from articlecloze.dataset import read_examples, render_example_text
from articlecloze.service import AnnotationService
from articlecloze.store import AnnotationLogStore
from articlecloze.webapi import create_app

PORT = 8731


def main() -> int:
    if len(sys.argv) < 4:
        print(__doc__)
        return 2
    pool_path, qc_path, store_path = sys.argv[1:4]
    n_participants = int(sys.argv[4]) if len(sys.argv) > 4 else 5
    n_items = int(sys.argv[5]) if len(sys.argv) > 5 else 20

    pool = read_examples(pool_path)
    qc_items = read_examples(qc_path)
    service = AnnotationService(
        pool, qc_items, AnnotationLogStore(store_path), n_items=n_items, qc_count=2
    )
    server = uvicorn.Server(
        uvicorn.Config(create_app(service), host="127.0.0.1", port=PORT, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{PORT}"
    for _ in range(100):
        try:
            httpx.get(f"{base}/api/meta", timeout=1)
            break
        except httpx.TransportError:
            time.sleep(0.05)

    # gold answers, looked up by rendered text (the payload itself is blinded)
    answers = {render_example_text(e, "survey"): e.gold.value for e in pool + qc_items}

    with httpx.Client(base_url=base, timeout=10) as client:
        for p in range(n_participants):
            participant = f"wire-p{p:03d}"
            created = client.post("/api/sessions", json={"participant_id": participant})
            created.raise_for_status()
            session_id = created.json()["session_id"]
            answered = 0
            while True:
                got = client.get(f"/api/sessions/{session_id}/next").json()
                if got["status"] == "completed":
                    break
                item = got["item"]
                choice = answers["\n".join(item["sentences"])]
                res = client.post(
                    f"/api/sessions/{session_id}/responses",
                    json={"item_token": item["item_token"], "choice": choice},
                )
                res.raise_for_status()
                answered += 1
                if res.json()["outcome"] != "continue":
                    break
            print(f"{participant}: {answered} items, state={service.session_state(session_id)}")
        exported = client.get("/api/export")
        lines = [l for l in exported.text.splitlines() if l.strip()]
        print(f"export now holds {len(lines)} records")

    server.should_exit = True
    thread.join(timeout=5)
    service.store.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
