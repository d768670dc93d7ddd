"""Switch-point label counts on the >=3-token code-switched subset.

python3 switchpoints.py CORPUS.bln OUT_DIR

Writes {field}_{direction}_{subset}.csv with label,count,proportion rows,
sorted by count descending then label. Directions are taken from the whole
analysis subset; "pooled" merges them.
"""
import os
import sys
from collections import Counter

from common import CONTENT, is_csw, lang_class, read_bln

EMOJI = [(0x1F300, 0x1F5FF), (0x1F600, 0x1F64F), (0x1F680, 0x1F6FF), (0x1F900, 0x1F9FF)]


def has_emoji(form):
    for ch in form:
        cp = ord(ch)
        if cp == 0xFE0F or any(lo <= cp <= hi for lo, hi in EMOJI):
            return True
    return False


def records(sent):
    out, held = [], None
    for r in sent["rows"]:
        lang = lang_class(r["lang"])
        if lang not in CONTENT:
            continue
        if held is not None and lang != held:
            out.append((f"{held}-{lang}", r["upos"], r["deprel"]))
        held = lang
    return out


sents = [s for s in read_bln(sys.argv[1])
         if is_csw([r["lang"] for r in s["rows"]]) and len(s["rows"]) >= 3]
subsets = {
    "all": sents,
    "emoji": [s for s in sents if any(has_emoji(r["form"]) for r in s["rows"])],
    "no_emoji": [s for s in sents if not any(has_emoji(r["form"]) for r in s["rows"])],
}
directions = sorted({d for s in sents for d, _, _ in records(s)})
os.makedirs(sys.argv[2], exist_ok=True)
for subset, group in subsets.items():
    recs = [r for s in group for r in records(s)]
    for fi, field in ((1, "upos"), (2, "deprel")):
        for d in ["pooled"] + directions:
            c = Counter(r[fi] for r in recs if (d == "pooled" or r[0] == d) and r[fi] is not None)
            total = sum(c.values())
            rows = sorted(c.items(), key=lambda kv: (-kv[1], kv[0]))
            with open(os.path.join(sys.argv[2], f"{field}_{d}_{subset}.csv"), "w") as f:
                f.write("label,count,proportion\n")
                for label, n in rows:
                    f.write(f"{label},{n},{n / total:.6f}\n")
