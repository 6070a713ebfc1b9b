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
"""Writes the seed lexicon assets (VSLEX1 format) into core/assets/lexicons."""

import os
import sys

EMOTION = {
    # introspection
    "EMOecs": "ecstasy ecstatic euphoria euphoric elated elation thrilled overjoyed rapture blissful exhilarated",
    "EMOjoy": "joy happy glad joyful cheerful delighted happiness smile laugh enjoy fun wonderful great",
    "EMOcon": "content contentment satisfied satisfy comfortable fine okay pleased grateful thankful",
    "EMOmel": "melancholy gloomy blue wistful somber sombre nostalgic pensive downcast mope dreary",
    "EMOsad": "sad sadness unhappy cry tear sorrow lonely miserable depressed down upset hurt",
    "EMOgri": "grief grieve mourn heartbroken devastated loss bereaved despair anguish heartbreak sob",
    # temper
    "EMObli": "bliss blissfully heavenly paradise tranquil peaceful harmony",
    "EMOcal": "calm calmness relaxed relax chill steady composed quiet",
    "EMOser": "serene serenity still placid patient gentle mellow",
    "EMOann": "annoy annoyed annoying annoyance irritate irritated irritating bother bothered frustrate frustrated frustrating",
    "EMOang": "anger angry mad furious hate pissed resent resentment hostile irate outraged",
    "EMOrag": "rage raging fury wrath livid enraged seethe explode scream smash yell",
    # attitude
    "EMOdel": "delight delightful charming lovely adorable sweet wonderful",
    "EMOple": "pleasant nice pleasure enjoyable agreeable like nicely",
    "EMOacc": "accept acceptance tolerate respect trust appreciate welcome",
    "EMOdsl": "dislike unpleasant bad awful meh boring dull ugh",
    "EMOdsg": "disgust disgusted disgusting gross nasty sick revolting vile repulsive yuck",
    "EMOloa": "loathe loathing detest despise abhor hatred contempt scorn worthless pathetic",
    # sensitivity
    "EMOent": "enthusiasm enthusiastic excited exciting passionate eager energetic pumped",
    "EMOeag": "eagerness curious curiosity interested keen motivated hopeful",
    "EMOres": "responsive alert attentive aware ready awake",
    "EMOanx": "anxiety anxious nervous worry worried stress stressed overwhelm overwhelmed restless panic uneasy tense",
    "EMOfea": "fear afraid scared scary frighten frightened dread fearful threat",
    "EMOter": "terror terrified terrifying horror horrified horrible nightmare petrified",
}

POSITIVE = ["EMOecs", "EMOjoy", "EMOcon", "EMObli", "EMOcal", "EMOser", "EMOdel", "EMOple",
            "EMOacc", "EMOent", "EMOeag", "EMOres"]
NEGATIVE = ["EMOmel", "EMOsad", "EMOgri", "EMOann", "EMOang", "EMOrag", "EMOdsl", "EMOdsg",
            "EMOloa", "EMOanx", "EMOfea", "EMOter"]

TOPIC = {
    "TOPart": "art artist paint painting draw drawing museum gallery sculpture canvas sketch design creative poetry poem",
    "TOPbus": "business company market money job work boss office manager salary career client sale profit startup",
    "TOPedu": "school class teacher student exam homework study college university lecture grade course degree learn essay",
    "TOPent": "movie film show series tv episode netflix actor game gaming youtube stream video comedy anime",
    "TOPfas": "fashion clothes outfit dress shirt shoe jeans style wear jacket makeup hair brand",
    "TOPfoo": "food eat cook cooking dinner lunch breakfast pizza coffee recipe snack meal restaurant kitchen",
    "TOPhea": "health doctor medication medicine pill therapy therapist symptom sleep prescription dose appointment psychiatrist diagnosis clinic insomnia",
    "TOPmus": "music song band album guitar piano concert sing singer listen playlist lyric drum",
    "TOPpol": "politics government election vote president law policy party senator congress tax campaign",
    "TOPrel": "relationship girlfriend boyfriend partner wife husband friend family date dating marriage love breakup parent",
    "TOPsci": "science research experiment theory physics chemistry biology space planet data scientist study lab",
    "TOPspo": "sport football soccer basketball team match player coach gym run training score league",
    "TOPtec": "technology computer phone app software code coding program laptop internet update bug server keyboard",
    "TOPtra": "travel trip flight airport hotel vacation holiday beach city country tourist train journey",
}

GRAMMAR = {
    "PRNper1s": ("surface", "i me i'm i've i'd i'll"),
    "PRNper1p": ("surface", "we us we're we've we'd we'll"),
    "PRNper2": ("surface", "you you're you've you'd you'll"),
    "PRNper3s": ("surface", "he him she it he's she's it's"),
    "PRNper3p": ("surface", "they them they're they've they'd they'll"),
    "PRNref": ("surface", "myself yourself himself herself itself ourselves yourselves themselves oneself"),
    "PRNref1s": ("surface", "myself"),
    "PRNref1p": ("surface", "ourselves"),
    "PRNref2": ("surface", "yourself yourselves"),
    "PRNref3": ("surface", "himself herself itself themselves oneself"),
    "PRNposs": ("surface", "mine yours hers ours theirs"),
    "PRNdem": ("surface", "this that these those"),
    "PRNint": ("surface", "who whom whose what which"),
    "PRNind": ("surface", "someone anyone everyone nobody somebody anybody everybody something anything everything nothing none"),
    "DETart": ("surface", "the a an"),
    "DETdem": ("surface", "this that these those"),
    "DETposs": ("surface", "my our your his her its their"),
    "DETposs1s": ("surface", "my"),
    "DETposs1p": ("surface", "our"),
    "DETposs2": ("surface", "your"),
    "DETposs3": ("surface", "his her its their"),
    "DETquant": ("surface", "some any many much few several every each all no more most less least"),
    "PREP": ("surface", "about above across after against along among around at before behind below beneath beside between beyond by down during except for from in inside into like near of off on onto out outside over past since through throughout to toward towards under until up upon with within without"),
    "AUX": ("lemma", "be have do can could will would shall should may might must"),
    "AUXmod": ("surface", "can could will would shall should may might must can't couldn't won't wouldn't shouldn't mustn't"),
    "CONJcoo": ("surface", "and or but nor yet so"),
    "CONJsub": ("surface", "because although though while if unless whether since whereas once until when whenever where wherever after before"),
    "QUANT": ("surface", "all some many much few several every each both either neither enough lots plenty most"),
}

CONNECTIVES = {
    "CONadd": "also moreover furthermore additionally besides too plus",
    "CONcau": "because so therefore thus hence consequently since",
    "CONadv": "but however although though yet nevertheless nonetheless whereas instead",
    "CONtem": "then after before when while meanwhile finally first later until afterwards eventually",
}


def write(out_dir, code, mode, words):
    entries = sorted(set(w.strip().lower() for w in words if w.strip()))
    with open(os.path.join(out_dir, code + ".lex"), "w", encoding="utf-8") as f:
        f.write("VSLEX1 %s %s\n" % (code, mode))
        for w in entries:
            f.write(w + "\n")


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "core/assets/lexicons"
    os.makedirs(out_dir, exist_ok=True)
    for code, words in EMOTION.items():
        write(out_dir, code, "lemma", words.split())
    write(out_dir, "EMOpos", "lemma", " ".join(EMOTION[c] for c in POSITIVE).split())
    write(out_dir, "EMOneg", "lemma", " ".join(EMOTION[c] for c in NEGATIVE).split())
    for code, words in TOPIC.items():
        write(out_dir, code, "lemma", words.split())
    for code, (mode, words) in GRAMMAR.items():
        write(out_dir, code, mode, words.split())
    for code, words in CONNECTIVES.items():
        write(out_dir, code, "surface", words.split())
    write(out_dir, "CONall", "surface", " ".join(CONNECTIVES.values()).split())


if __name__ == "__main__":
    main()
