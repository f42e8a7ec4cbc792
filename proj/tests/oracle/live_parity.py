#!/usr/bin/env python3
"""Compares `mtprep evaluate` with a locally installed sacrebleu on random
corpora. Exits 77 (skipped) when sacrebleu is not importable.

usage: live_parity.py <mtprep binary>
"""

import random
import subprocess
import sys
import tempfile
from pathlib import Path

try:
    from sacrebleu.metrics import BLEU, CHRF, TER
except ImportError:
    print("sacrebleu not installed; skipping")
    sys.exit(77)

WORDS = ("Kijiva ir pilsēta galvaspilsēta Київ столиця Харків 3.5 1,000 a-b (x) "
         "don't U.S.A. e-mail: &amp; - -- 12-3 «q» lielākās , . ! ? ; Ļviva ŽĀ").split()
TOL = {"chrf": 1e-6, "bleu": 1e-6, "ter": 1e-6}


def main():
    binary = sys.argv[1]
    worst = {m: 0.0 for m in TOL}
    with tempfile.TemporaryDirectory() as tmp:
        hp, rp = Path(tmp, "h"), Path(tmp, "r")
        for trial in range(25):
            rnd = random.Random(trial)
            refs = [" ".join(rnd.choice(WORDS) for _ in range(rnd.randint(1, 60)))
                    for _ in range(rnd.randint(1, 10))]
            hyps = []
            for r in refs:
                t = r.split()
                if rnd.random() < 0.3:
                    rnd.shuffle(t)
                t = [w if rnd.random() < 0.7 else rnd.choice(WORDS) for w in t]
                hyps.append(" ".join(t))
            hp.write_text("\n".join(hyps) + "\n", encoding="utf-8")
            rp.write_text("\n".join(refs) + "\n", encoding="utf-8")
            expected = {
                "chrf": CHRF().corpus_score(hyps, [refs]).score,
                "bleu": BLEU().corpus_score(hyps, [refs]).score,
                "ter": TER().corpus_score(hyps, [refs]).score,
            }
            for m, want in expected.items():
                out = subprocess.check_output(
                    [binary, "evaluate", "--metric", m, "--hyp", str(hp), "--ref", str(rp),
                     "--full-precision"], text=True)
                got = float(out.split("\t")[0])
                worst[m] = max(worst[m], abs(got - want))
    print("max abs diff:", worst)
    bad = [m for m in TOL if worst[m] > TOL[m]]
    if bad:
        print("parity failure:", bad)
        sys.exit(1)


if __name__ == "__main__":
    main()
