"""Minimal readers shared by the oracle scripts. Deliberately independent of
the Rust code: plain string splitting, no validation beyond what is needed."""

CONTENT = {"en", "es", "gn"}


def lang_class(tag):
    t = tag.lower()
    if t == "en":
        return "en"
    if t == "es" or t.startswith("es-"):
        return "es"
    if t == "gn" or t.startswith("gn-"):
        return "gn"
    return "neutral"


def read_raw(path):
    """Raw FORM TAG [GLOSS] files -> list of (sent_id, [(form, tag)])."""
    sents, toks, sid = [], [], None
    for line in open(path, encoding="utf-8"):
        s = line.strip()
        if not s:
            if toks:
                sents.append((sid, toks))
            toks, sid = [], None
            continue
        parts = s.split()
        if s.startswith("#") and (s == "#" or s[1].isspace() or len(parts) == 1):
            if toks:
                sents.append((sid, toks))
                toks, sid = [], None
            body = s[1:]
            if "=" in body:
                k, v = body.split("=", 1)
                if k.strip() == "sent_id":
                    sid = v.strip()
            continue
        toks.append((parts[0], parts[1]))
    if toks:
        sents.append((sid, toks))
    return sents


def read_bln(path):
    """Eight-column tables -> list of dicts with sent_id and rows."""
    out = []
    for block in open(path, encoding="utf-8").read().split("\n\n"):
        lines = [l for l in block.splitlines() if l.strip()]
        if not lines:
            continue
        sent = {"sent_id": None, "rows": []}
        for l in lines:
            if l.startswith("#"):
                k, _, v = l[1:].partition("=")
                if k.strip() == "sent_id":
                    sent["sent_id"] = v.strip()
                continue
            c = l.split("\t")
            sent["rows"].append({
                "id": int(c[0]), "form": c[1], "lang": c[2], "lemma": c[3],
                "upos": None if c[4] == "_" else c[4],
                "head": None if c[5] == "_" else int(c[5]),
                "deprel": None if c[7] == "_" else c[7],
            })
        out.append(sent)
    return out


def is_csw(langs):
    return len({lang_class(t) for t in langs} & CONTENT) >= 2
