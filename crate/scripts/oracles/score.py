"""Per-token recount of gold vs pred: python3 score.py GOLD PRED GROUPS.json"""
import json
import sys

from common import read_bln

gold = {s["sent_id"]: s for s in read_bln(sys.argv[1])}
pred = {s["sent_id"]: s for s in read_bln(sys.argv[2])}
groups = [set(g["labels"]) for g in json.load(open(sys.argv[3]))]
assert gold.keys() == pred.keys()


def equivalent(a, b):
    if a == b:
        return True
    for g in groups:
        if a in g and b in g:
            return True
    return False


n = upos = att = ds = dr = ls = lr = 0
conf = {}
for sid in sorted(gold):
    g_rows, p_rows = gold[sid]["rows"], pred[sid]["rows"]
    assert [r["form"] for r in g_rows] == [r["form"] for r in p_rows], sid
    for g, p in zip(g_rows, p_rows):
        n += 1
        upos += g["upos"] == p["upos"]
        if g["head"] is None:
            continue
        att += 1
        strict = g["deprel"] == p["deprel"]
        relaxed = strict or (g["deprel"] is not None and p["deprel"] is not None
                             and equivalent(g["deprel"], p["deprel"]))
        head = g["head"] == p["head"]
        ds += strict
        dr += relaxed
        ls += head and strict
        lr += head and relaxed
        gl, pl = g["deprel"] or "_", p["deprel"] or "_"
        conf.setdefault(gl, {}).setdefault(pl, 0)
        conf[gl][pl] += 1


def frac(a, b):
    return a / b if b else 0.0


report = {
    "n_tokens": n,
    "upos_acc": frac(upos, n),
    "deprel_acc_strict": frac(ds, att),
    "deprel_acc_relaxed": frac(dr, att),
    "las_strict": frac(ls, att),
    "las_relaxed": frac(lr, att),
    "per_label_confusion": {k: dict(sorted(v.items())) for k, v in sorted(conf.items())},
}
print(json.dumps(report, indent=2, ensure_ascii=False))
