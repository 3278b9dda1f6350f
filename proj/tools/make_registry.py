#!/usr/bin/env python3
"""Builds the canonical fixture registry under data/registry/.

The per-leaf counts (overlapping instruments, instrument questions, Rosetta
questions) follow the first-generation Rosetta fusion table. Question bodies
are placeholders except for the routine-change sample items, which are
reproduced verbatim together with their answer scales.

Usage: tools/make_registry.py [OUT_DIR]
"""

import math
import os
import random
import re
import sys

SEED = 20191104

# (base path, leaf, overlapping instruments, instrument questions, rosetta questions)
FUSION_TABLE = [
    ("Cognitive/Behavioral/Emotional", "Adaptability", 6, 32, 4),
    ("Cognitive/Behavioral/Emotional", "Anger Control", 6, 48, 5),
    ("Cognitive/Behavioral/Emotional", "Anxiety", 7, 126, 17),
    ("Cognitive/Behavioral/Emotional", "Depression", 4, 38, 5),
    ("Cognitive/Behavioral/Emotional", "Mood", 4, 16, 3),
    ("Cognitive/Behavioral/Emotional", "Obsessive Compulsive", 4, 15, 4),
    ("Cognitive/Behavioral/Emotional", "Paranoia", 3, 6, 1),
    ("Cognitive/Behavioral/Emotional", "Emotional", 5, 35, 8),
    ("Cognitive/Behavioral/Sensory", "Disturbed", 2, 4, 1),
    ("Cognitive/Behavioral/Sensory", "Intrigued", 3, 6, 1),
    ("Cognitive/Behavioral/Sensory", "Sensory", 3, 16, 3),
    ("Cognitive/Behavioral/Social", "Aggression", 6, 57, 3),
    ("Cognitive/Behavioral/Social", "Atypicality", 3, 32, 6),
    ("Cognitive/Behavioral/Social", "Awareness", 8, 52, 11),
    ("Cognitive/Behavioral/Social", "Comforting", 3, 5, 1),
    ("Cognitive/Behavioral/Social", "Conduct", 4, 100, 14),
    ("Cognitive/Behavioral/Social", "Ego", 1, 2, 1),
    ("Cognitive/Behavioral/Social", "Eye Contact", 5, 11, 1),
    ("Cognitive/Behavioral/Social", "Group Play", 4, 10, 2),
    ("Cognitive/Behavioral/Social", "Imitation", 2, 3, 1),
    ("Cognitive/Behavioral/Social", "Joint Attention", 3, 22, 3),
    ("Cognitive/Behavioral/Social", "Leadership", 1, 7, 1),
    ("Cognitive/Behavioral/Social", "Maturity", 1, 3, 1),
    ("Cognitive/Behavioral/Social", "Reciprocal Interactions", 2, 22, 2),
    ("Cognitive/Behavioral/Social", "Relationships", 4, 32, 4),
    ("Cognitive/Behavioral/Social", "Shared Interests", 4, 16, 4),
    ("Cognitive/Behavioral/Social", "Smile", 2, 2, 1),
    ("Cognitive/Behavioral/Social", "Staring", 3, 7, 1),
    ("Cognitive/Behavioral/Social", "Withdrawal", 5, 51, 4),
    ("Cognitive/Behavioral/Social", "Social", 7, 32, 8),
    ("Cognitive/Executive Functioning", "Attention", 6, 62, 7),
    ("Cognitive/Executive Functioning", "Confusion", 2, 2, 1),
    ("Cognitive/Executive Functioning", "Coping", 1, 9, 1),
    ("Cognitive/Executive Functioning", "Fluency", 2, 6, 3),
    ("Cognitive/Executive Functioning", "General", 1, 9, 7),
    ("Cognitive/Executive Functioning", "Hyperactivity", 7, 34, 4),
    ("Cognitive/Executive Functioning", "Imagination", 3, 11, 1),
    ("Cognitive/Executive Functioning", "Impulsivity", 5, 20, 3),
    ("Cognitive/Executive Functioning", "Inhibitory Control", 3, 7, 2),
    ("Cognitive/Executive Functioning", "Memory", 5, 14, 3),
    ("Cognitive/Executive Functioning", "Patience", 4, 7, 1),
    ("Cognitive/Executive Functioning", "Perseveration", 5, 18, 1),
    ("Cognitive/Executive Functioning", "Planning", 4, 24, 4),
    ("Cognitive/Executive Functioning", "Reasoning", 3, 18, 4),
    ("Cognitive/Executive Functioning", "Executive Functioning", 5, 18, 6),
    ("Cognitive/Language and Communication", "Expressive", 4, 77, 12),
    ("Cognitive/Language and Communication", "Nonverbal", 2, 10, 2),
    ("Cognitive/Language and Communication", "Receptive", 6, 17, 5),
    ("Cognitive/Language and Communication", "Speech", 4, 12, 3),
    ("Motor", "Fine", 2, 8, 1),
    ("Motor", "Gross", 4, 11, 4),
    ("Somatic", "Dermatologic", 1, 2, 1),
    ("Somatic", "Fatigue", 3, 8, 1),
    ("Somatic", "Gastrointestinal", 2, 18, 2),
    ("Somatic", "General", 2, 15, 1),
    ("Somatic", "Illness", 1, 10, 1),
    ("Somatic", "Neurologic", 2, 10, 2),
    ("Somatic", "Sleep", 1, 7, 2),
    ("Somatic", "Vision", 1, 2, 1),
    ("Somatic", "Weight", 1, 1, 1),
    ("Somatic", "Somatic", 1, 2, 1),
]

ADIR_ROUTINE = [
    "No difficulties with changes to routine",
    "Unusually negative reaction to minor changes",
    "Definite, unusual reactions to minor changes, causing distress",
    "Definite, unusual resistance to minor changes, with impairment of family activities",
]

SCALES = {
    "ADI-R": ("quality", ["No abnormality", "Possible abnormality", "Definite abnormality",
                          "Severe abnormality with impairment"]),
    "ADOS-2": ("quality", ["No evidence", "Mild or occasional", "Definite", "Marked and pervasive"]),
    "BASC-3": ("frequency", ["Never", "Sometimes", "Often", "Almost Always"]),
    "BRIEF2": ("frequency", ["Never", "Sometimes", "Often"]),
    "CBCL": ("frequency", ["Not True", "Somewhat True", "Very True"]),
    "Conners 3": ("frequency", ["Not true at all", "Just a little true", "Pretty much true",
                                "Very much true"]),
    "SRS-2": ("frequency", ["Not True", "Sometimes True", "Often True", "Almost Always True"]),
    "VADRS": ("frequency", ["Never", "Occasionally", "Often", "Very Often"]),
}

# instrument -> [(version, age_min_months, age_max_months, reporter, target item count)]
VERSIONS = {
    "ADI-R": [("Standard", 24, 720, "clinician", 93)],
    "ADOS-2": [("Toddler", 12, 30, "clinician", 33), ("Module 1", 31, 720, "clinician", 33),
               ("Module 2", 31, 720, "clinician", 33), ("Module 3", 48, 720, "clinician", 33),
               ("Module 4", 192, 720, "clinician", 33)],
    "BASC-3": [("Preschool", 24, 71, "parent", 139), ("Child", 72, 143, "parent", 175),
               ("Adolescent", 144, 263, "parent", 173)],
    "BRIEF2": [("Parent", 60, 227, "parent", 63)],
    "CBCL": [("1.5-5", 18, 71, "parent", 100), ("6-18", 72, 227, "parent", 113)],
    "Conners 3": [("Parent", 72, 227, "parent", 110)],
    "SRS-2": [("Preschool", 30, 54, "parent", 65), ("School-Age", 48, 227, "parent", 65)],
    "VADRS": [("Parent Initial", 72, 155, "parent", 55), ("Parent Follow-up", 72, 155, "parent", 43)],
}

INSTRUMENTS = list(VERSIONS.keys())

# Rough topical affinity of each instrument to each base category.
AFFINITY = {
    "Cognitive/Behavioral/Emotional": {"BASC-3": 5, "CBCL": 5, "BRIEF2": 3, "Conners 3": 3, "VADRS": 3,
                                       "SRS-2": 2, "ADI-R": 2, "ADOS-2": 1},
    "Cognitive/Behavioral/Sensory": {"ADI-R": 5, "ADOS-2": 4, "SRS-2": 4, "BASC-3": 2, "CBCL": 1},
    "Cognitive/Behavioral/Social": {"SRS-2": 5, "ADI-R": 5, "ADOS-2": 4, "BASC-3": 3, "CBCL": 3,
                                    "Conners 3": 2, "VADRS": 2, "BRIEF2": 1},
    "Cognitive/Executive Functioning": {"Conners 3": 5, "BRIEF2": 5, "VADRS": 4, "BASC-3": 3, "CBCL": 2,
                                        "ADOS-2": 2, "ADI-R": 1, "SRS-2": 1},
    "Cognitive/Language and Communication": {"ADI-R": 5, "ADOS-2": 5, "SRS-2": 3, "BASC-3": 3,
                                             "Conners 3": 2, "CBCL": 1},
    "Motor": {"ADI-R": 4, "BASC-3": 3, "ADOS-2": 2, "CBCL": 2},
    "Somatic": {"CBCL": 5, "BASC-3": 4, "VADRS": 1, "ADI-R": 1},
}

ROSETTA_LABELS = {
    2: ["No", "Yes"],
    3: ["Rarely or never", "Sometimes", "Often"],
    4: ["Rarely or never", "Sometimes", "Often", "Almost always or severe"],
}

ROUTINE_CHANGE_BODY = (
    "Does [NAME] become unusually upset with or have difficulty accepting small changes? "
    "For example, a change in [his/her] bedtime routine, weekly scheduled activities, or "
    "furniture arrangement in the house.")
ROUTINE_CHANGE_CODES = [
    "Rarely or never",
    "Sometimes, but with little interference in family life",
    "Often, and with some interference with family life",
]

# Sample items mapped to the routine-change question: (instrument, version, id, body, reversed)
ROUTINE_ITEMS = [
    ("ADI-R", "Standard", "74",
     "Is bothered by minor changes in routine, schedule or how personal things are arranged", False),
    ("ADI-R", "Standard", "75", "Gets upset by changes around the house", False),
    ("BASC-3", "Preschool", "88", "Adjusts well to new surroundings", True),
    ("BASC-3", "Child", "47", "Adjusts well to changes in plans", True),
    ("BASC-3", "Adolescent", "156", "Adjusts well to change in teacher", True),
    ("BRIEF2", "Parent", "11", "Has trouble adjusting to new situations", False),
    ("CBCL", "1.5-5", "21", "Disturbed by changes in routine", False),
    ("SRS-2", "School-Age", "24", "Difficulty with changes to routine", False),
    ("SRS-2", "Preschool", "24", "Difficulty with changes to routine", False),
]
# Placeholder items completing the 21 sources of the routine-change question.
ROUTINE_EXTRA = [("ADI-R", "Standard", 2), ("BASC-3", "Preschool", 2), ("BASC-3", "Child", 2),
                 ("BASC-3", "Adolescent", 2), ("BRIEF2", "Parent", 3), ("CBCL", "6-18", 1)]
ADAPTABILITY_INSTRUMENTS = ["ADI-R", "BASC-3", "BRIEF2", "CBCL", "SRS-2", "Conners 3"]


def slug(text):
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def leaf_slugs():
    names = [leaf for _, leaf, *_ in FUSION_TABLE]
    out = {}
    for base, leaf, *_ in FUSION_TABLE:
        if names.count(leaf) > 1:
            out[(base, leaf)] = slug(base.split("/")[-1]) + "-" + slug(leaf)
        else:
            out[(base, leaf)] = slug(leaf)
    return out


def answer_map(choices, codes):
    return [math.ceil(i * codes / choices) for i in range(1, choices + 1)]


class Builder:
    def __init__(self):
        self.rng = random.Random(SEED)
        # (instrument, version) -> list of question dicts
        self.questions = {(i, v[0]): [] for i in INSTRUMENTS for v in VERSIONS[i]}
        self.reserved = {}
        for inst, ver, qid, _, _ in ROUTINE_ITEMS:
            self.reserved.setdefault((inst, ver), set()).add(int(qid))
        self.next_id = {k: 1 for k in self.questions}
        self.rosetta = []  # dicts: id, leaf_path, body, codes
        self.links = []    # (inst, ver, qid, rosetta_id, map)

    def fresh_id(self, key):
        n = self.next_id[key]
        while n in self.reserved.get(key, set()):
            n += 1
        self.next_id[key] = n + 1
        return str(n)

    def load(self, key):
        target = dict((v[0], v[4]) for v in VERSIONS[key[0]])[key[1]]
        return len(self.questions[key]) / target

    def pick_version(self, inst):
        vers = [(inst, v[0]) for v in VERSIONS[inst]]
        return min(vers, key=lambda k: (self.load(k), self.rng.random()))

    def add_question(self, key, leaf_path, body=None, qid=None, scale=None):
        qid = qid or self.fresh_id(key)
        kind, labels = scale or SCALES[key[0]]
        if body is None:
            body = "%s behavior item %s (placeholder wording)" % (leaf_path.split("/")[-1], qid)
        q = {"id": qid, "leaf": leaf_path, "body": body, "kind": kind, "choices": list(labels)}
        self.questions[key].append(q)
        return q

    def choose_instruments(self, base, leaf, count):
        if leaf == "Adaptability" and base.endswith("Emotional"):
            return list(ADAPTABILITY_INSTRUMENTS)
        aff = AFFINITY[base]
        ranked = sorted(INSTRUMENTS, key=lambda i: (-aff.get(i, 0), self.rng.random()))
        return ranked[:count]

    def build_leaf(self, base, leaf, n_inst, n_q, n_r, slugs):
        leaf_path = base + "/" + leaf
        ids = ["R-%s-%d" % (slugs[(base, leaf)], k + 1) for k in range(n_r)]
        instruments = self.choose_instruments(base, leaf, n_inst)
        sources = {rid: [] for rid in ids}  # rid -> list of question dicts with key

        start = 0
        remaining_q = n_q
        if leaf == "Adaptability" and base.endswith("Emotional"):
            rid = ids[0]
            for inst, ver, qid, body, rev in ROUTINE_ITEMS:
                kind, labels = SCALES[inst]
                if inst == "ADI-R" and qid == "74":
                    labels = ADIR_ROUTINE
                if rev:
                    labels = list(reversed(labels))
                q = self.add_question((inst, ver), leaf_path, body, qid, (kind, labels))
                sources[rid].append(((inst, ver), q))
            for inst, ver, count in ROUTINE_EXTRA:
                for _ in range(count):
                    q = self.add_question((inst, ver), leaf_path)
                    sources[rid].append(((inst, ver), q))
            assert len(sources[rid]) == 21
            remaining_q -= 21
            start = 1
            # Conners 3 and the remaining items spread over the other three questions.
            instruments_rest = instruments
        else:
            instruments_rest = instruments

        rest_ids = ids[start:]
        # Instrument set per Rosetta question: about three instruments each.
        pairs = []
        per_q = max(1, min(len(instruments_rest), 3))
        budget = remaining_q
        need_cover = list(instruments_rest)
        if start == 1:
            need_cover = ["Conners 3"]
        for k, rid in enumerate(rest_ids):
            left_q = len(rest_ids) - k - 1
            room = budget - left_q
            want = min(per_q, room)
            chosen = []
            while need_cover and len(chosen) < want:
                chosen.append(need_cover.pop(0))
            pool = [i for i in instruments_rest if i not in chosen]
            self.rng.shuffle(pool)
            while len(chosen) < want and pool:
                chosen.append(pool.pop())
            for inst in chosen:
                pairs.append((rid, inst))
            budget -= len(chosen)
        # Any instrument still uncovered gets attached to the last questions.
        k = len(rest_ids) - 1
        while need_cover:
            pairs.append((rest_ids[k % len(rest_ids)], need_cover.pop(0)))
            k -= 1
        assert len(pairs) <= remaining_q, (leaf, len(pairs), remaining_q)

        for rid, inst in pairs:
            key = self.pick_version(inst)
            sources[rid].append((key, self.add_question(key, leaf_path)))
        extra = remaining_q - len(pairs)
        for _ in range(extra):
            rid, inst = self.rng.choice(pairs)
            key = self.pick_version(inst)
            sources[rid].append((key, self.add_question(key, leaf_path)))

        # Rare binary item for a single-source somatic leaf.
        if leaf == "Weight":
            (key, q), = sources[ids[0]]
            q["kind"] = "binary"
            q["choices"] = ["No", "Yes"]

        for k, rid in enumerate(ids):
            codes = min(len(q["choices"]) for _, q in sources[rid])
            if k == 0 and start == 1:
                body, labels = ROUTINE_CHANGE_BODY, ROUTINE_CHANGE_CODES
            else:
                body = ("How often does [NAME] show %s concern %d? Consider [his/her] "
                        "behavior over the last six months." % (leaf.lower(), k + 1))
                labels = ROSETTA_LABELS[codes]
            assert len(labels) == codes, (rid, codes)
            self.rosetta.append({"id": rid, "leaf": leaf_path, "body": body, "codes": labels})
            for key, q in sources[rid]:
                self.links.append((key[0], key[1], q["id"], rid,
                                   answer_map(len(q["choices"]), codes)))

    def build(self):
        slugs = leaf_slugs()
        for base, leaf, i, q, r in FUSION_TABLE:
            self.build_leaf(base, leaf, i, q, r, slugs)


def write(out_dir, b):
    os.makedirs(os.path.join(out_dir, "instruments"), exist_ok=True)
    with open(os.path.join(out_dir, "ontology.txt"), "w") as f:
        f.write("# Clinical domain ontology; two spaces of indentation per level.\n")
        seen = set()
        for base, leaf, *_ in FUSION_TABLE:
            parts = base.split("/")
            for d in range(1, len(parts) + 1):
                p = tuple(parts[:d])
                if p not in seen:
                    seen.add(p)
                    f.write("  " * (d - 1) + parts[d - 1] + "\n")
            f.write("  " * len(parts) + leaf + "\n")

    with open(os.path.join(out_dir, "rosetta.tsv"), "w") as f:
        f.write("rosetta_id\tleaf_path\tbody_template\tcodes\n")
        for r in b.rosetta:
            codes = "|".join("%d=%s" % (n + 1, l) for n, l in enumerate(r["codes"]))
            f.write("%s\t%s\t%s\t%s\n" % (r["id"], r["leaf"], r["body"], codes))

    for inst in INSTRUMENTS:
        for ver, amin, amax, reporter, _ in VERSIONS[inst]:
            name = slug(inst) + "_" + slug(ver) + ".tsv"
            qs = sorted(b.questions[(inst, ver)], key=lambda q: int(q["id"]))
            with open(os.path.join(out_dir, "instruments", name), "w") as f:
                f.write("name\t%s\nversion\t%s\nage_min_months\t%d\nage_max_months\t%d\nreporter\t%s\n\n"
                        % (inst, ver, amin, amax, reporter))
                f.write("question_id\tleaf_path\tbody\tscale_kind\tchoices\n")
                for q in qs:
                    f.write("%s\t%s\t%s\t%s\t%s\n" % (q["id"], q["leaf"], q["body"], q["kind"],
                                                       "|".join(q["choices"])))

    with open(os.path.join(out_dir, "crosswalk.tsv"), "w") as f:
        f.write("instrument\tversion\tquestion_id\trosetta_id\tanswer_map\n")
        for inst, ver, qid, rid, amap in b.links:
            m = ",".join("%d:%d" % (i + 1, c) for i, c in enumerate(amap))
            f.write("%s\t%s\t%s\t%s\t%s\n" % (inst, ver, qid, rid, m))


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "data", "registry")
    b = Builder()
    b.build()
    write(out_dir, b)
    total_q = sum(len(v) for v in b.questions.values())
    print("instrument questions: %d, rosetta questions: %d, leaves: %d"
          % (total_q, len(b.rosetta), len(FUSION_TABLE)))
    for key in sorted(b.questions):
        print("  %-10s %-16s %d" % (key[0], key[1], len(b.questions[key])))


if __name__ == "__main__":
    main()
