#!/usr/bin/env python3
# Copyright 2026 The vscreen Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the corpus-builder fixture.

forum_dump.ndjson: 200 posts by 20 forum users. Ten of them self-report a
diagnosis; the other ten write near misses (other diagnoses, "add" used as a
verb too far from the phrase, the condition named without a diagnosis
phrase). candidates_dump.ndjson: control candidates, some of whom are
ineligible through an excluded forum or term.
expected_positives.txt lists the diagnosed user ids.
"""

import json
import random
import sys
from pathlib import Path

FILLER = [
    "I spent the morning cleaning the kitchen.",
    "The weather was cold and grey all day.",
    "My sister called me about the weekend plans.",
    "We watched a long movie after dinner.",
    "The bus was late again this morning.",
    "I finally finished the book about the old city.",
    "Work was quiet so I left a bit early.",
    "The dog would not stop barking at the mailman.",
    "I made pasta with too much garlic.",
    "Our team lost the game by two points.",
    "The new phone has a much better camera.",
    "I keep forgetting to water the plants.",
]

DIAGNOSIS = [
    "I was diagnosed with ADHD when I was nine.",
    "Last spring I finally got a diagnosis of attention deficit disorder.",
    "My ADHD has been diagnosed twice now by two doctors.",
    "I have been diagnosed with adhd as an adult.",
    "After years of struggling I was diagnosed with ADD.",
    "The psychiatrist gave me a diagnosis of attention-deficit hyperactivity disorder.",
    "Turns out I have been diagnosed with hyperactivity since school.",
    "So yes, I was diagnosed with adhd at thirty two.",
    "It took forever but I was diagnosed with ADHD this year.",
    "I got my diagnosis of ADHD from a neurologist.",
]

NEAR_MISS = [
    "I was diagnosed with asthma as a child.",
    "My cousin got a diagnosis of diabetes last year.",
    "I have been diagnosed with a broken wrist, so typing is slow.",
    "I was diagnosed with the flu and had to stay home for the whole week. Remember to add lemon to the tea.",
    "Has anyone read the new study about adhd and sleep?",
    "Please add me to the group chat.",
    "Attention deficit is discussed a lot on this forum.",
    "The doctor said the diagnosis was just stress from exams.",
    "Could someone add the link to the sidebar?",
    "I was diagnosed with celiac disease in my twenties.",
]


def post(pid, author, ts, forum, body):
    return {"id": pid, "author": author, "created_utc": ts,
            "subreddit": forum, "body": body}


def body(rng, lead=None):
    sentences = rng.sample(FILLER, 3)
    if lead is not None:
        sentences.insert(rng.randrange(len(sentences) + 1), lead)
    return " ".join(sentences)


def main(out_dir):
    rng = random.Random(2024)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    forum_posts = []
    expected = []
    ts = 1_600_000_000
    for u in range(20):
        author = f"forum_user_{u:02d}"
        diagnosed = u % 2 == 0
        if diagnosed:
            expected.append(author)
        special = {2, 7} if diagnosed else {4}
        for k in range(10):
            ts += 3600
            lead = None
            if k in special:
                lead = DIAGNOSIS[u // 2] if diagnosed else NEAR_MISS[u // 2]
            forum_posts.append(post(f"f{u:02d}_{k}", author, ts, "adhd", body(rng, lead)))
    with open(out / "forum_dump.ndjson", "w") as f:
        for p in forum_posts:
            f.write(json.dumps(p) + "\n")

    candidates = []
    for u in range(30):
        author = f"candidate_{u:02d}"
        forum = "cooking" if u % 3 else "gardening"
        for k in range(4):
            ts += 1800
            text = body(rng)
            if u == 3 and k == 1:
                forum = "depression"
            if u == 5 and k == 2:
                text += " My adderall ran out yesterday."
            candidates.append(post(f"c{u:02d}_{k}", author, ts, forum, text))
    # Two forum users also appear as candidates and must never become controls.
    for k in range(3):
        ts += 60
        candidates.append(post(f"cx_{k}", "forum_user_00", ts, "cooking", body(rng)))
    with open(out / "candidates_dump.ndjson", "w") as f:
        for p in candidates:
            f.write(json.dumps(p) + "\n")
    (out / "expected_positives.txt").write_text("\n".join(expected) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/corpus")
