#!/usr/bin/env python3
"""Random-language experiment: swap-invariance versus determinism.

Samples finite down-closed languages, builds the Myhill-Nerode automaton
of each, and tallies agreement between the language-side swap-invariance
check and the automaton-side determinism check, plus the round-trip
verification.  Disagreement on any sample is a bug.
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hdalib.hda import is_deterministic
from hdalib.language import is_swap_invariant, language
from hdalib.myhill_nerode import build_mn, verify_mn
from hdalib.ipomset import canonicalize, glue, identity, starter, terminator


def random_ipomset(rng, labels, max_events=4, max_interface=2):
    """A random ipomset assembled from a random step sequence."""
    init = tuple(rng.choice(labels) for _ in range(rng.randint(0, max_interface)))
    p = identity(init)
    total = len(init)
    for _ in range(rng.randint(0, 4)):
        cur = p.target_loset()
        if cur and rng.random() < 0.5:
            pos = rng.sample(range(len(cur)), rng.randint(1, len(cur)))
            p = glue(p, terminator(cur, pos))
        elif total < max_events:
            k = rng.randint(1, min(2, max_events - total))
            pos = rng.sample(range(len(cur) + k), k)
            lab = list(cur)
            for q in sorted(pos):
                lab.insert(q, rng.choice(labels))
            p = glue(p, starter(tuple(lab), pos))
            total += k
    if p.target and rng.random() < 0.6:
        cur = p.target_loset()
        p = glue(p, terminator(cur, rng.sample(range(len(cur)), rng.randint(1, len(cur)))))
    return p


def random_word(rng, labels, max_len=4):
    n = rng.randint(1, max_len)
    s = [rng.choice(labels) for _ in range(n)]
    return canonicalize(s, prec=[(i, j) for i in range(n) for j in range(n) if i < j])


def random_language(rng, labels="abcd", max_members=80):
    while True:
        gens = []
        for _ in range(rng.randint(1, 3)):
            r = rng.random()
            if r < 0.3:
                gens.append(random_word(rng, labels))
            elif r < 0.55:
                a, b = rng.choice(labels), rng.choice(labels)
                gens.append(canonicalize([a, b], evord=[(0, 1)]))
            else:
                gens.append(random_ipomset(rng, labels))
        lang = language(gens)
        if len(lang) <= max_members:
            return lang


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20260808)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    t0 = time.time()
    agree = invariant = verified = 0
    for i in range(args.samples):
        lang = random_language(rng)
        sw = bool(is_swap_invariant(lang))
        mn = build_mn(lang)
        det = bool(is_deterministic(mn.hda).deterministic)
        ok = verify_mn(lang, mn).ok
        agree += sw == det
        invariant += sw
        verified += ok
        if sw != det or not ok:
            print(f"sample {i}: swap-invariant={sw} deterministic={det} verified={ok}")
            for m in sorted(lang.members, key=lambda m: m.sort_key()):
                print(f"  member {m!r}")
    dt = time.time() - t0
    print(
        f"{args.samples} languages: {agree} agree on determinism "
        f"({invariant} swap-invariant), {verified} verified, {dt:.1f}s"
    )
    return 0 if agree == args.samples == verified else 1


if __name__ == "__main__":
    sys.exit(main())
