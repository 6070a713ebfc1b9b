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
"""Builds the demo n-gram tables (VSNGR1 format) from the register texts."""

import collections
import os
import re
import sys

REGISTERS = ["fiction", "weblog", "web", "news", "spoken"]


def sentences(text):
    text = text.lower().replace("’", "'")
    for chunk in re.split(r"[.!?]+", text):
        words = [w.strip("'") for w in re.sub(r"[^a-z0-9' ]", " ", chunk).split()]
        words = [w for w in words if w]
        if words:
            yield words


def main():
    text_dir = sys.argv[1] if len(sys.argv) > 1 else "core/assets/text"
    out_dir = sys.argv[2] if len(sys.argv) > 2 else "core/assets/ngrams"
    os.makedirs(out_dir, exist_ok=True)
    for register in REGISTERS:
        with open(os.path.join(text_dir, register + ".txt"), encoding="utf-8") as f:
            sents = list(sentences(f.read()))
        for order in (2, 3):
            counts = collections.Counter()
            for words in sents:
                for i in range(len(words) - order + 1):
                    counts[" ".join(words[i:i + order])] += 1
            path = os.path.join(out_dir, "%s_%d.ngr" % (register, order))
            with open(path, "w", encoding="utf-8") as f:
                f.write("VSNGR1 %s %d\n" % (register, order))
                for gram, count in sorted(counts.items()):
                    f.write("%s\t%d\n" % (gram, count))


if __name__ == "__main__":
    main()
