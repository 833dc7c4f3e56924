#!/usr/bin/env python3
"""Regenerate resources/lexicon.tsv from the Brill lexicon and a word
frequency list (both shipped in the TextBlob wheel under textblob/en/).

usage: build_lexicon.py EN_LEXICON EN_SPELLING OUT [--open N]
                        [--domain DIR --domain-words M]

With --domain, the M most frequent Brill words found in source comments
under DIR are added to the open class, so that programming vocabulary
("update", "parse", "init") is not lost to a literary frequency list.

Output is one `word<TAB>TAG` entry per line. The first entry of a word
is its majority tag; a following `VB` entry marks an open-class word that
also has verb uses (the tagger's imperative rule keys on it).
"""
import argparse
import collections
import os
import re

CLOSED = {"CC", "DT", "EX", "IN", "MD", "PDT", "PRP", "PRP$", "RP", "TO",
          "WDT", "WP", "WP$", "WRB"}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lexicon")
    ap.add_argument("spelling")
    ap.add_argument("out")
    ap.add_argument("--open", type=int, default=5000)
    ap.add_argument("--domain")
    ap.add_argument("--domain-words", type=int, default=1000)
    args = ap.parse_args()

    tags = {}
    for line in open(args.lexicon, encoding="utf-8"):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        if word != word.lower() or not word.isascii():
            continue
        tags.setdefault(word, tag)

    freq = collections.Counter()
    for line in open(args.spelling, encoding="utf-8"):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) == 2 and parts[1].isdigit():
            freq[parts[0].lower()] += int(parts[1])

    def verb_capable(w):
        if tags.get(w, "").startswith("VB"):
            return True
        forms = [w + "s", w + "es", w + "ed", w + "d", w + "ing"]
        if w.endswith("e"):
            forms.append(w[:-1] + "ing")
        if w.endswith("y"):
            forms += [w[:-1] + "ies", w[:-1] + "ied"]
        return any(tags.get(f) in ("VBZ", "VBD", "VBN", "VBG") for f in forms)

    domain = collections.Counter()
    if args.domain:
        comment = re.compile(r"(?://|#|/\*|^\s*\*)(.*)")
        for root, _, files in os.walk(args.domain):
            for name in files:
                try:
                    text = open(os.path.join(root, name), encoding="utf-8", errors="ignore").read()
                except OSError:
                    continue
                for line in text.splitlines():
                    m = comment.search(line)
                    if m:
                        domain.update(w.lower() for w in re.findall(r"[A-Za-z]+", m.group(1)))

    closed = sorted(w for w, t in tags.items() if t in CLOSED and w.isalpha())
    ranked = sorted((w for w, t in tags.items()
                     if t not in CLOSED and w.isalpha() and freq[w] > 0),
                    key=lambda w: (-freq[w], w))[:args.open]
    chosen = set(ranked)
    extra = sorted((w for w, t in tags.items()
                    if t not in CLOSED and w.isalpha() and domain[w] > 0 and w not in chosen),
                   key=lambda w: (-domain[w], w))[:args.domain_words]
    ranked += extra

    with open(args.out, "w", encoding="utf-8") as out:
        for w in closed:
            out.write(f"{w}\t{tags[w]}\n")
        for w in sorted(ranked):
            out.write(f"{w}\t{tags[w]}\n")
            if not tags[w].startswith("VB") and tags[w] in ("NN", "JJ", "NNS") \
                    and verb_capable(w):
                out.write(f"{w}\tVB\n")


if __name__ == "__main__":
    main()
