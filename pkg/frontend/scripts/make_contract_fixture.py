"""Regenerate the rule-engine contract fixture.

Submits randomized valid dimension combinations through the live service
route (HTTP test client against the real app) and records the category the
service derived for each. The TypeScript preview must reproduce these
exactly; rerun after any rule change:

    python3 scripts/make_contract_fixture.py
"""

import json
import random
from pathlib import Path

from fastapi.testclient import TestClient

from tweetsift.annotate.project import AnnotationProject
from tweetsift.annotate.rules import enumerate_valid_annotations
from tweetsift.annotate.service import create_app
from tweetsift.corpus import Tweet

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "derive_cases.json"


def main() -> None:
    rng = random.Random(20240817)
    lattice = enumerate_valid_annotations()
    # every lattice point once, plus random repeats past the 50 required
    combos = list(lattice) + [rng.choice(lattice) for _ in range(14)]
    rng.shuffle(combos)

    pool = [Tweet(id=f"f{i}", text=f"fixture posting {i}") for i in range(len(combos))]
    project = AnnotationProject(pool)
    client = TestClient(create_app(project))
    round_id = client.post("/api/v1/rounds", json={
        "strategy": "random", "targets": len(combos), "coders": ["fixture"], "seed": 1,
    }).json()["id"]

    cases = []
    for dims in combos:
        task = client.get(f"/api/v1/rounds/{round_id}/next",
                          params={"coder": "fixture"}).json()
        response = client.post(f"/api/v1/rounds/{round_id}/labels", json={
            "coder": "fixture", "tweet_id": task["tweet"]["id"],
            "dimensions": dims.to_dict(),
        })
        response.raise_for_status()
        cases.append({"dimensions": dims.to_dict(),
                      "category": response.json()["category"]})

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"cases": cases}, indent=2) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
