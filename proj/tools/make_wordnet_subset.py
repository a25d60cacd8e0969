#!/usr/bin/env python3
"""Cut a small WordNet 3.x subset that keeps the antonym, similar-to and
attribute graph intact.

Every synset carrying a '!', '&' or '=' pointer is kept together with the
targets of those pointers. All other pointer types are dropped and glosses
are shortened, so the output stays a valid Princeton-format database that
the lexnet loader accepts. Offsets are preserved as synset identifiers.

usage: make_wordnet_subset.py SRC_DIR DST_DIR
"""
import os
import sys

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
KEEP = {"!", "&", "="}


def file_pos(p):
    return "a" if p == "s" else p


def parse(line):
    head, _, gloss = line.partition("|")
    parts = head.split()
    off, lex, ss = parts[0], parts[1], parts[2]
    wc = int(parts[3], 16)
    words = parts[4:4 + 2 * wc]
    i = 4 + 2 * wc
    pc = int(parts[i])
    i += 1
    ptrs = [tuple(parts[i + 4 * k:i + 4 * k + 4]) for k in range(pc)]
    rest = parts[i + 4 * pc:]
    return off, lex, ss, words, ptrs, rest, gloss.strip()


def main(src, dst):
    synsets = {}
    for p, name in POS_FILES.items():
        with open(os.path.join(src, "data." + name), encoding="latin-1") as f:
            for line in f:
                if line.startswith("  "):
                    continue
                rec = parse(line.rstrip("\n"))
                synsets[(rec[0], p)] = rec

    keep = set()
    for key, rec in synsets.items():
        if any(ptr[0] in KEEP for ptr in rec[4]):
            keep.add(key)
            for ptr in rec[4]:
                if ptr[0] in KEEP:
                    keep.add((ptr[1], file_pos(ptr[2])))

    os.makedirs(dst, exist_ok=True)
    lemmas = {p: {} for p in POS_FILES}
    for p, name in POS_FILES.items():
        out = []
        for key in sorted(k for k in keep if k[1] == p):
            off, lex, ss, words, ptrs, rest, gloss = synsets[key]
            kept = [ptr for ptr in ptrs
                    if ptr[0] in KEEP and (ptr[1], file_pos(ptr[2])) in keep]
            gloss = gloss.split(";")[0][:60]
            fields = [off, lex, ss, "%02x" % (len(words) // 2)] + words
            fields.append("%03d" % len(kept))
            for ptr in kept:
                fields.extend(ptr)
            fields.extend(rest)
            out.append(" ".join(fields) + " | " + gloss + "  \n")
            for w in words[0::2]:
                lemma = w.lower()
                if "(" in lemma:
                    lemma = lemma[:lemma.index("(")]
                lemmas[p].setdefault(lemma, []).append(off)
        with open(os.path.join(dst, "data." + name), "w", encoding="latin-1") as f:
            f.write("  1 WordNet 3.0 subset; see LICENSE for terms.\n")
            f.writelines(out)
        with open(os.path.join(dst, "index." + name), "w", encoding="latin-1") as f:
            f.write("  1 WordNet 3.0 subset; see LICENSE for terms.\n")
            for lemma in sorted(lemmas[p]):
                offs = sorted(set(lemmas[p][lemma]))
                f.write("%s %s %d 0 %d 0 %s  \n" % (
                    lemma, p, len(offs), len(offs), " ".join(offs)))
    with open(os.path.join(src, "LICENSE"), encoding="latin-1") as f:
        lic = f.read()
    with open(os.path.join(dst, "LICENSE"), "w", encoding="latin-1") as f:
        f.write(lic)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
