"""Corpus counts for a raw fixture: python3 stats.py RAW > golden.json"""
import json
import sys

from common import is_csw, read_raw

sents = read_raw(sys.argv[1])
csw = [t for _, t in sents if is_csw([tag for _, tag in t])]
print(json.dumps({
    "sentences": len(sents),
    "tokens": sum(len(t) for _, t in sents),
    "csw": len(csw),
    "analysis": sum(1 for t in csw if len(t) >= 3),
}, separators=(",", ":")))
