"""Writes the 12-synset WNdb-format fixture in this directory's wndb/.

Offsets are real byte offsets, as in the distributed database files.
"""
import os

HEADER = "  1 This is a small test fixture in the WordNet 3.0 database layout.\n"

# key: (pos, lemmas, hypernym keys, antonyms [(my_word_no, key, their_word_no)], gloss)
SYNSETS = {
    "entity": ("n", ["entity"], [], [], "that which is perceived or known to exist"),
    "animal": ("n", ["animal", "beast"], ["entity"], [], "a living organism that moves voluntarily"),
    "vertebrate": ("n", ["vertebrate"], ["animal"], [], "an animal having a backbone"),
    "whale": ("n", ["whale"], ["vertebrate"], [], 'a large marine mammal; "the whale surfaced near the boat"'),
    "bank_river": ("n", ["bank"], ["entity"], [], 'sloping land beside a body of water; "they fished from the bank of the river"'),
    "bank_money": ("n", ["bank", "depository"], ["institution"], [], "a financial institution that accepts deposits"),
    "institution": ("n", ["institution"], ["entity"], [], "an organization founded for a purpose"),
    "economy": ("n", ["economy", "economic_system"], ["entity"], [], "the system of production and distribution"),
    "change": ("v", ["change"], [], [], "cause to be different"),
    "grow": ("v", ["grow", "develop"], ["change"], [], "increase in size by natural process"),
    "big": ("a", ["big", "large"], [], [(1, "small", 1)], "above average in size"),
    "small": ("a", ["small", "little"], [], [(1, "big", 1)], "limited in size"),
}
FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
EXC = {"noun": ["whales whale"], "verb": ["grew grow", "grown grow"], "adj": ["bigger big", "smaller small"], "adv": []}


def line_for(key, offsets):
    pos, lemmas, hyps, ants, gloss = SYNSETS[key]
    words = " ".join(f"{w} 0" for w in lemmas)
    ptrs = [f"@ {offsets[h]:08d} {SYNSETS[h][0]} 0000" for h in hyps]
    ptrs += [f"! {offsets[k]:08d} {SYNSETS[k][0]} {a:02x}{b:02x}" for a, k, b in ants]
    body = f"{offsets[key]:08d} 03 {pos} {len(lemmas):02x} {words} {len(ptrs):03d}"
    if ptrs:
        body += " " + " ".join(ptrs)
    return body + f" | {gloss}  \n"


def main():
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "wndb")
    os.makedirs(out, exist_ok=True)
    offsets = {key: 0 for key in SYNSETS}
    # Offsets depend on line lengths, which depend on offsets only through
    # fixed-width fields, so two passes settle them.
    for _ in range(2):
        for pos in FILES:
            cur = len(HEADER)
            for key in SYNSETS:
                if SYNSETS[key][0] != pos:
                    continue
                offsets[key] = cur
                cur += len(line_for(key, offsets).encode())
    for pos, name in FILES.items():
        with open(os.path.join(out, f"data.{name}"), "w") as f:
            f.write(HEADER)
            for key in SYNSETS:
                if SYNSETS[key][0] == pos:
                    f.write(line_for(key, offsets))
        senses = {}
        for key in SYNSETS:
            p, lemmas, *_ = SYNSETS[key]
            if p != pos:
                continue
            for w in lemmas:
                senses.setdefault(w, []).append(offsets[key])
        with open(os.path.join(out, f"index.{name}"), "w") as f:
            f.write(HEADER)
            for w in sorted(senses):
                ids = " ".join(f"{o:08d}" for o in senses[w])
                f.write(f"{w} {pos} {len(senses[w])} 1 @ {len(senses[w])} 0 {ids}  \n")
        with open(os.path.join(out, f"{name}.exc"), "w") as f:
            for row in EXC[name]:
                f.write(row + "\n")


if __name__ == "__main__":
    main()
