#!/usr/bin/env python3
"""Build assets/words.txt: the most frequent dictionary words in local English text.

Candidate words are the intersection of the GCIDE and Webster-2 lowercase
alphabetic lists shipped with the `english-words` package; ranking counts
occurrences across the text files found under the given corpus roots.
"""
import argparse
import collections
import os
import pickle
import re

TOKEN = re.compile(r"[A-Za-z]+")


def load(path):
    with open(path, "rb") as f:
        return pickle.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", required=True, help="english_words/data directory")
    ap.add_argument("--corpus", nargs="+", required=True)
    ap.add_argument("--size", type=int, default=10000)
    ap.add_argument("-o", "--out", required=True)
    args = ap.parse_args()

    vocab = load(os.path.join(args.data, "gcide_alpha_lower.pickle")) & load(
        os.path.join(args.data, "web2_alpha_lower.pickle"))
    vocab = {w for w in vocab if 3 <= len(w) <= 12}

    counts = collections.Counter()
    for root in args.corpus:
        for dirpath, _, files in os.walk(root):
            for name in files:
                if not name.endswith((".py", ".txt", "copyright", ".rst", ".md")) and "LICENSE" not in name:
                    continue
                try:
                    with open(os.path.join(dirpath, name), encoding="utf-8", errors="ignore") as f:
                        text = f.read()
                except OSError:
                    continue
                for tok in TOKEN.findall(text):
                    # camelCase / ALLCAPS identifiers are not prose
                    if tok.islower() or (tok[0].isupper() and tok[1:].islower()):
                        w = tok.lower()
                        if w in vocab:
                            counts[w] += 1

    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: args.size]
    words = sorted(w for w, _ in ranked)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(words) + "\n")
    print(f"{len(words)} words written to {args.out}")


if __name__ == "__main__":
    main()
