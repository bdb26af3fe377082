# Copyright 2026 The Regionkit Authors. All Rights Reserved.
#
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
"""Independent oracle for the text-metric golden fixture.

Writes tests/data/text_golden.json. METEOR alignment is found by exhaustive
search (maximum matches, then fewest chunks), so the fixture also checks that
the library aligner is optimal on these pairs.
"""

import itertools
import json
import math
import sys
from collections import Counter
from fractions import Fraction

PAIRS = [
    # (candidate, reference, language)
    ("the cat sat", "the cat sat down", "en"),
    ("the cat", "the cat sat", "en"),
    ("heart is normal", "heart is normal", "en"),
    ("a b", "b a", "en"),
    ("the heart size is normal", "heart size is within normal limits", "en"),
    ("left lung opacity", "opacity in the left lung base", "en"),
    ("mild cardiomegaly with small effusion", "small left effusion and mild cardiomegaly", "en"),
    ("the the the cat", "the cat the mat", "en"),
    ("completely unrelated words", "nothing shared here", "en"),
    ("双肺纹理清晰", "双肺纹理增多", "zh"),
]


def tokenize(text, lang):
    if lang == "zh":
        return [ch for ch in text if not ch.isspace()]
    return text.lower().split()


def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(c, r, max_n):
    if not c:
        return 0.0
    logs = 0.0
    for n in range(1, max_n + 1):
        cn, rn = ngrams(c, n), ngrams(r, n)
        matched = sum(min(v, rn[g]) for g, v in cn.items())
        total = sum(cn.values())
        if n == 1:
            if matched == 0:
                return 0.0
            p = Fraction(matched, total)
        else:
            p = Fraction(matched + 1, total + 1)
        logs += math.log(p)
    bp = math.exp(1 - len(r) / len(c)) if len(c) < len(r) else 1.0
    return 100.0 * bp * math.exp(logs / max_n)


def lcs(a, b):
    t = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            t[i][j] = t[i - 1][j - 1] + 1 if a[i - 1] == b[j - 1] else max(t[i - 1][j], t[i][j - 1])
    return t[len(a)][len(b)]


def rouge_l(c, r):
    if not c or not r:
        return 0.0
    l = lcs(c, r)
    if l == 0:
        return 0.0
    p, rr = l / len(c), l / len(r)
    return 100.0 * 2 * p * rr / (p + rr)


def best_alignment(c, r):
    """(matches, chunks) over every one-to-one exact alignment."""
    best = (0, 0)
    options = [[j for j in range(len(r)) if r[j] == tok] + [None] for tok in c]
    for choice in itertools.product(*options):
        used = [j for j in choice if j is not None]
        if len(used) != len(set(used)):
            continue
        m = len(used)
        chunks = 0
        prev = None
        for j in choice:
            if j is None:
                prev = None
                continue
            if prev is None or j != prev + 1:
                chunks += 1
            prev = j
        if m > best[0] or (m == best[0] and m > 0 and chunks < best[1]):
            best = (m, chunks)
    return best


def meteor(c, r):
    if not c or not r:
        return 0.0
    m, chunks = best_alignment(c, r)
    if m == 0:
        return 0.0
    p, rr = m / len(c), m / len(r)
    f = p * rr / (0.9 * p + 0.1 * rr)
    pen = 0.5 * (chunks / m) ** 3
    return 100.0 * f * (1 - pen)


def main(path):
    out = []
    for cand, ref, lang in PAIRS:
        c, r = tokenize(cand, lang), tokenize(ref, lang)
        out.append({
            "candidate": cand,
            "reference": ref,
            "language": lang,
            "bleu1": bleu(c, r, 1),
            "bleu4": bleu(c, r, 4),
            "rouge_l": rouge_l(c, r),
            "meteor": meteor(c, r),
        })
    with open(path, "w", encoding="utf-8") as f:
        json.dump(out, f, ensure_ascii=False, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/text_golden.json")
