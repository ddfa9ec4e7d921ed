#!/usr/bin/env python3
"""Drive the live annotation service with scripted annotators.

Creates a session over HTTP, lets three simulated annotators pull HITs
and submit 0-100 slider scores until the campaign completes, then prints
the leaderboard and proves the observation log replays to the exact same
state the server holds.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from easl import AnnotatorModel, make_oracle, replay
from easl.service import create_app

data_dir = Path(tempfile.mkdtemp(prefix="easl-demo-"))
app = create_app(data_dir=data_dir)
client = TestClient(app)

oracle = make_oracle("uniform", 15, rng_seed=31)
items = [
    {"item_id": item_id, "payload": f"statement #{k}: {item_id}"}
    for k, item_id in enumerate(oracle.item_ids)
]

created = client.post(
    "/api/sessions",
    json={"items": items, "config": {"method": "easl", "n": 5}, "iterations": 4, "seed": 32},
).json()
sid = created["session_id"]
print(f"session {sid}, log at {created['log_path']}")

annotators = {name: AnnotatorModel(noise_scale=0.1, rng_seed=40 + k)
              for k, name in enumerate(["ana", "ben", "caro"])}

done = False
while not done:
    progress = False
    for name, annot in annotators.items():
        r = client.get(f"/api/sessions/{sid}/next-hit", params={"annotator": name})
        if r.status_code == 409:
            continue  # waiting on someone else's lease
        body = r.json()
        if body.get("status") == "complete":
            done = True
            break
        hit = body["hit"]
        ids = [i["item_id"] for i in hit["items"]]
        scores = [round(100 * annot.perceive(oracle.latent[i], isolated=False)) for i in ids]
        ack = client.post(
            f"/api/sessions/{sid}/judgments",
            json={"hit_id": hit["hit_id"], "annotator_id": name, "scores": scores},
        ).json()
        print(f"  {name} finished {hit['hit_id']} (iteration {hit['iteration']}, seq {ack['seq']})")
        progress = True
    if not progress and not done:
        break

print("\nleaderboard:")
for row in client.get(f"/api/sessions/{sid}/scores").json()["scores"][:8]:
    print(f"  {row['item_id']:<10} score={row['score']:6.3f} "
          f"variance={row['variance']:.4f} obs={row['count']}")

print("\nprogress:", client.get(f"/api/sessions/{sid}/progress").json())

session = app.state.sessions[sid]
print("\nreplaying the log reproduces the live state:",
      replay(session.log.path).equals(session.model))
