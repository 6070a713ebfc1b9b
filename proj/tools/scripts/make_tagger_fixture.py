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
"""Generates the tagged fixture corpus used to train the bundled POS tagger.

Sentences come from a small template grammar whose slots carry their tags,
so every token is tagged by construction. The ambiguous closed-class words
(that, to, like, have, do, after, her, so) appear in each of their readings.
Output: one "token<TAB>tag" per line, blank line between sentences.
"""

import random
import sys

NOUN_SG = "dog cat job teacher friend doctor book phone class game house car day week brain task meeting project medication homework run walk plan call list work morning store exam boss sister brother coffee".split()
NOUN_PL = "dogs cats books friends tasks meetings days pills games notes emails kids runs walks plans calls lists exams dishes bills".split()
PROPN = "john sarah monday reddit google london emma friday".split()
ADJ = "tired happy late hard new good bad long big small quiet busy angry anxious great important difficult easy boring weird".split()
ADV = "really always never just still often quickly finally actually usually today again very too also then now here".split()
NUM = "two three 10 2019 five four".split()
INTJ = "yeah oh lol wow".split()

# base, 3sg, past, past participle, gerund
VERBS = [
    ("run", "runs", "ran", "run", "running"),
    ("go", "goes", "went", "gone", "going"),
    ("leave", "leaves", "left", "left", "leaving"),
    ("forget", "forgets", "forgot", "forgotten", "forgetting"),
    ("focus", "focuses", "focused", "focused", "focusing"),
    ("work", "works", "worked", "worked", "working"),
    ("love", "loves", "loved", "loved", "loving"),
    ("need", "needs", "needed", "needed", "needing"),
    ("try", "tries", "tried", "tried", "trying"),
    ("start", "starts", "started", "started", "starting"),
    ("finish", "finishes", "finished", "finished", "finishing"),
    ("take", "takes", "took", "taken", "taking"),
    ("make", "makes", "made", "made", "making"),
    ("read", "reads", "read", "read", "reading"),
    ("play", "plays", "played", "played", "playing"),
    ("lose", "loses", "lost", "lost", "losing"),
    ("eat", "eats", "ate", "eaten", "eating"),
    ("miss", "misses", "missed", "missed", "missing"),
    ("call", "calls", "called", "called", "calling"),
    ("clean", "cleans", "cleaned", "cleaned", "cleaning"),
    ("watch", "watches", "watched", "watched", "watching"),
    ("write", "writes", "wrote", "written", "writing"),
    ("buy", "buys", "bought", "bought", "buying"),
    ("find", "finds", "found", "found", "finding"),
]
INTRANS = [
    ("rain", "rains", "rained", "rained", "raining"),
    ("sleep", "sleeps", "slept", "slept", "sleeping"),
    ("cry", "cries", "cried", "cried", "crying"),
    ("laugh", "laughs", "laughed", "laughed", "laughing"),
    ("wait", "waits", "waited", "waited", "waiting"),
    ("leave", "leaves", "left", "left", "leaving"),
    ("run", "runs", "ran", "run", "running"),
]
SAY = [("think", "thinks", "thought"), ("know", "knows", "knew"), ("say", "says", "said"),
       ("feel", "feels", "felt"), ("hope", "hopes", "hoped")]

SUBJ = [("i", False), ("you", False), ("we", False), ("they", False), ("he", True),
        ("she", True), ("it", True)]
OBJ = "me him us them you it".split()
DETS = "the a my your this some every".split()


class Gen:
    def __init__(self, rng):
        self.r = rng
        self.out = []

    def w(self, word, tag):
        self.out.append((word, tag))

    def pick(self, seq):
        return self.r.choice(seq)

    def subj(self):
        if self.r.random() < 0.15:
            self.w(self.pick(PROPN), "propn")
            return True
        if self.r.random() < 0.15:
            self.w("the", "det")
            if self.r.random() < 0.5:
                self.w(self.pick(NOUN_SG), "noun")
                return True
            self.w(self.pick(NOUN_PL), "noun")
            return False
        s, third = self.pick(SUBJ)
        self.w(s, "pron")
        return third

    def np(self):
        d = self.pick(DETS)
        self.w(d, "det")
        if self.r.random() < 0.3:
            self.w(self.pick(ADJ), "adj")
        if d in ("a", "every", "this"):
            self.w(self.pick(NOUN_SG), "noun")
        else:
            self.w(self.pick(NOUN_SG + NOUN_PL), "noun")

    def end(self, p="."):
        self.w(p, "punct")


def templates(g):
    r = g.r

    def t1():
        third = g.subj()
        v = g.pick(VERBS)
        g.w(v[1] if third else v[0], "verb")
        g.np()
        g.end()

    def t2():
        g.subj()
        v = g.pick(VERBS + INTRANS)
        g.w(v[2], "verb")
        g.w(g.pick(ADV), "adv")
        g.end()

    def t3():
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.np()
        g.w(g.pick(["in", "on", "at", "with", "from"]), "adp")
        g.np()
        g.end()

    def t4():
        third = g.subj()
        s = g.pick(SAY)
        g.w(s[1] if third else s[0], "verb")
        g.w("that", "sconj")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.w("because", "sconj")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.end()

    def t5():
        third = g.subj()
        g.w("has" if third else "have", "aux")
        if r.random() < 0.3:
            g.w(g.pick(["never", "just", "finally", "already"]), "adv")
        g.w(g.pick(VERBS)[3], "verb:part")
        g.np()
        g.end()

    def t6():
        s, third = g.pick(SUBJ)
        g.w(s, "pron")
        g.w("am" if s == "i" else ("is" if third else "are"), "aux")
        v = g.pick(VERBS)
        g.w(v[4], "verb:part")
        g.np()
        g.end()

    def t7():
        third = g.subj()
        if r.random() < 0.3:
            g.w("really", "adv")
        g.w(g.pick(["want", "need", "try", "have"]) + ("s" if third else ""), "verb")
        if g.out[-1][0] == "haves":
            g.out[-1] = ("has", "verb")
        if g.out[-1][0] == "trys":
            g.out[-1] = ("tries", "verb")
        g.w("to", "part")
        g.w(g.pick(VERBS)[0], "verb")
        g.np()
        g.end()

    def t8():
        third = g.subj()
        if r.random() < 0.5:
            g.w(g.pick(["went", "ran", "walked", "drove"]), "verb")
        else:
            g.w("goes" if third else "go", "verb")
        g.w("to", "adp")
        g.np()
        g.end()

    def t9():
        third = g.subj()
        g.w("likes" if third else "like", "verb")
        g.w(g.pick(NOUN_PL), "noun")
        g.end()

    def t10():
        g.w("it", "pron")
        g.w(g.pick(["looks", "sounds", "seems", "feels"]), "verb")
        g.w("like", "adp")
        if r.random() < 0.5:
            g.np()
        else:
            g.w(g.pick(["rain", "work", "fun", "school"]), "noun")
        g.end()

    def t11():
        third = g.subj()
        g.w("has" if third else "have", "verb")
        g.np()
        g.end()

    def t12():
        g.w(g.pick(["do", "did"]), "aux")
        g.w(g.pick(["you", "they", "we"]), "pron")
        g.w(g.pick(VERBS)[0], "verb")
        g.np()
        g.end("?")

    def t13():
        third = g.subj()
        g.w("does" if third else g.pick(["do", "did"]), "verb")
        g.np()
        g.w(g.pick(ADV), "adv")
        g.end()

    def t14():
        g.w(g.pick(["after", "before", "when"]), "sconj")
        g.subj()
        g.w(g.pick(INTRANS + VERBS)[2], "verb")
        g.w(",", "punct")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.w(g.pick(ADV), "adv")
        g.end()

    def t15():
        g.w(g.pick(["after", "before", "during"]), "adp")
        g.np()
        g.w(",", "punct")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.end()

    def t16():
        if r.random() < 0.5:
            g.subj()
            g.w(g.pick(["called", "saw", "missed", "helped", "told"]), "verb")
            g.w("her", "pron")
            g.w(g.pick(ADV), "adv")
        else:
            g.w("her", "det")
            g.w(g.pick(NOUN_SG), "noun")
            g.w(g.pick(VERBS + INTRANS)[2], "verb")
            g.w(g.pick(ADV), "adv")
        g.end()

    def t17():
        g.w(g.pick(VERBS)[4], "verb:part")
        if r.random() < 0.5:
            g.np()
        g.w(g.pick(["is", "was"]), "aux")
        if r.random() < 0.4:
            g.w(g.pick(["so", "really", "very", "too"]), "adv")
        g.w(g.pick(ADJ), "adj")
        g.end()

    def t18():
        g.subj()
        g.w(g.pick(["can't", "can", "will", "should", "could", "won't", "don't"]), "aux")
        g.w(g.pick(VERBS + INTRANS)[0], "verb")
        g.w(g.pick(ADV), "adv")
        g.end()

    def t19():
        g.w(g.pick(INTJ), "intj")
        g.w(",", "punct")
        s, third = g.pick(SUBJ)
        g.w(s, "pron")
        g.w("am" if s == "i" else ("is" if third else "are"), "aux")
        g.w("so", "adv")
        g.w(g.pick(ADJ), "adj")
        g.end(g.pick([".", "!"]))

    def t20():
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.w(g.pick(NUM), "num")
        g.w(g.pick(NOUN_PL), "noun")
        g.w("on", "adp")
        g.w(g.pick(PROPN), "propn")
        g.end()

    def t21():
        g.w(g.pick(PROPN), "propn")
        g.w(g.pick(["said", "thought", "knew", "felt"]), "verb")
        g.w("that", "sconj")
        s, third = g.pick(SUBJ)
        g.w(s, "pron")
        g.w("was" if (third or s == "i") else "were", "aux")
        g.w(g.pick(ADJ), "adj")
        g.end()

    def t22():
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.np()
        g.w(g.pick(["and", "but", "or"]), "conj")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.w(g.pick(ADV), "adv")
        g.end()

    def t23():
        g.subj()
        g.w(g.pick(["liked", "loved", "said", "needed", "hated"]), "verb")
        g.w("that", "pron")
        g.end(g.pick([".", "!"]))

    def t24():
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.np()
        g.w("that", "pron")
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.end()

    def t25():
        g.w("that", "det")
        g.w(g.pick(NOUN_SG), "noun")
        g.w(g.pick(["was", "is"]), "aux")
        g.w(g.pick(ADJ), "adj")
        g.end()

    def t26():
        g.subj()
        g.w(g.pick(["was", "got"]), "aux")
        g.w(g.pick(VERBS)[3], "verb:part")
        g.w("by", "adp")
        g.np()
        g.end()

    def t27():
        g.w("the", "det")
        g.w(g.pick(NOUN_SG), "noun")
        v = g.pick(["looked", "seemed", "felt", "was"])
        g.w(v, "aux" if v == "was" else "verb")
        g.w(g.pick(ADJ), "adj")
        g.end()

    def t28():
        third = g.subj()
        g.w("has" if third else "have", "aux")
        g.w("been", "aux")
        g.w(g.pick(VERBS + INTRANS)[4], "verb:part")
        g.w("for", "adp")
        g.w(g.pick(NUM), "num")
        g.w(g.pick(["days", "weeks", "hours", "years"]), "noun")
        g.end()

    def t29():
        g.w(g.pick(["is", "was"]), "aux")
        g.w("it", "pron")
        g.w(g.pick(ADJ), "adj")
        g.end("?")

    def t30():
        third = g.subj()
        g.w(g.pick(["never", "always", "often", "usually"]), "adv")
        v = g.pick(VERBS)
        g.w(v[1] if third else v[0], "verb")
        g.np()
        g.w(g.pick(["today", "again", "anymore", "now"]), "adv")
        g.end()

    def t31():
        g.subj()
        g.w(g.pick(VERBS)[2], "verb")
        g.np()
        g.w("so", "adv")
        g.subj()
        g.w(g.pick(INTRANS)[2], "verb")
        g.end()

    def t32():
        g.subj()
        g.w(g.pick(["went", "came", "got"]), "verb")
        g.w("home", "adv")
        g.w("and", "conj")
        g.w(g.pick(VERBS)[2], "verb")
        g.np()
        g.end()

    return [t1, t2, t3, t4, t5, t6, t7, t8, t9, t10, t11, t12, t13, t14, t15, t16, t17,
            t18, t19, t20, t21, t22, t23, t24, t25, t26, t27, t28, t29, t30, t31, t32]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "core/assets/tagger_fixture.tsv"
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    rng = random.Random(20240611)
    seen = set()
    sentences = []
    while len(sentences) < count:
        g = Gen(rng)
        fns = templates(g)
        # Cycle through templates so every construction is represented.
        fns[len(sentences) % len(fns)]()
        key = " ".join(w for w, _ in g.out)
        if key in seen:
            continue
        seen.add(key)
        sentences.append(g.out)
    with open(out, "w", encoding="utf-8") as f:
        for s in sentences:
            for w, t in s:
                f.write("%s\t%s\n" % (w, t))
            f.write("\n")


if __name__ == "__main__":
    main()
