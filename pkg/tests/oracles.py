"""Independent brute-force oracles the fast implementations are checked
against.  Everything here prefers exhaustive enumeration over cleverness."""

from __future__ import annotations

import itertools

from hdalib.errors import AxiomViolation, InterfaceMismatch
from hdalib.hda import Hda
from hdalib.ipomset import Ipomset, canonicalize, glue


def _bijections(p: Ipomset, q: Ipomset):
    """All label- and flag-respecting bijections p -> q."""
    if p.n != q.n:
        return
    groups: dict = {}
    for j in range(q.n):
        key = (q.labels[j], j in q.source, j in q.target)
        groups.setdefault(key, []).append(j)
    keys = [(p.labels[i], i in p.source, i in p.target) for i in range(p.n)]
    if sorted(keys) != sorted(
        (q.labels[j], j in q.source, j in q.target) for j in range(q.n)
    ):
        return
    slots = {k: list(v) for k, v in groups.items()}
    perms = {k: list(itertools.permutations(v)) for k, v in slots.items()}
    names = list(perms)
    for combo in itertools.product(*(perms[k] for k in names)):
        assignment = dict(zip(names, combo))
        counters = {k: 0 for k in names}
        image = []
        for key in keys:
            image.append(assignment[key][counters[key]])
            counters[key] += 1
        yield tuple(image)


def oracle_isomorphic(p: Ipomset, q: Ipomset) -> bool:
    for f in _bijections(p, q):
        good = True
        for x in range(p.n):
            for y in range(p.n):
                if x == y:
                    continue
                if p.prec[x][y] != q.prec[f[x]][f[y]]:
                    good = False
                    break
                if p.is_concurrent(x, y) and p.evord[x][y] != q.evord[f[x]][f[y]]:
                    good = False
                    break
            if not good:
                break
        if good:
            return True
    return False


def oracle_subsumes(p: Ipomset, q: Ipomset) -> bool:
    """p refines q: some bijection reflects precedence and preserves the
    event order of p-concurrent pairs."""
    for f in _bijections(p, q):
        good = True
        for x in range(p.n):
            for y in range(p.n):
                if x == y:
                    continue
                if q.prec[f[x]][f[y]] and not p.prec[x][y]:
                    good = False
                    break
                if p.is_concurrent(x, y) and p.evord[x][y] and not q.evord[f[x]][f[y]]:
                    good = False
                    break
            if not good:
                break
        if good:
            return True
    return False


def oracle_refinements(p: Ipomset) -> frozenset[Ipomset]:
    """Every orientation of the event pairs, carrying p's event order on
    the pairs it leaves concurrent, filtered by brute-force subsumption."""
    n = p.n
    pairs = list(itertools.combinations(range(n), 2))
    essential = [
        (i, j) for i in range(n) for j in range(n) if p.evord[i][j] and p.is_concurrent(i, j)
    ]
    out = set()
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        prec = []
        for (i, j), c in zip(pairs, choice):
            if c == 1:
                prec.append((i, j))
            elif c == 2:
                prec.append((j, i))
        try:
            cand = canonicalize(p.labels, p.source, p.target, prec, essential)
        except AxiomViolation:
            continue
        if cand not in out and oracle_subsumes(cand, p):
            out.add(cand)
    return frozenset(out)


def oracle_divisions(m: Ipomset) -> frozenset[tuple[Ipomset, Ipomset]]:
    """Every three-way split, no pre-filtering: keep the pairs whose glue
    reproduces m."""
    n = m.n
    out = set()
    for assign in itertools.product((0, 1, 2), repeat=n):
        left = [i for i in range(n) if assign[i] <= 1]
        mid = [i for i in range(n) if assign[i] == 1]
        right = [i for i in range(n) if assign[i] >= 1]
        try:
            p = _restrict(m, left, m.source, mid)
            q = _restrict(m, right, mid, m.target)
            if glue(p, q) == m:
                out.add((p, q))
        except (AxiomViolation, InterfaceMismatch):
            continue
    return frozenset(out)


def _restrict(m, events, source, target):
    keep = sorted(events)
    idx = {e: k for k, e in enumerate(keep)}
    return canonicalize(
        [m.labels[e] for e in keep],
        [idx[e] for e in source if e in idx],
        [idx[e] for e in target if e in idx],
        [(idx[a], idx[b]) for a in keep for b in keep if m.prec[a][b]],
        [(idx[a], idx[b]) for a in keep for b in keep if m.evord[a][b]],
    )


def oracle_reachability(x: Hda) -> tuple[frozenset[str], frozenset[str]]:
    """Accessible and coaccessible cell sets by plain fixpoint iteration
    over singleton face steps."""
    forward = set(x.start)
    changed = True
    while changed:
        changed = False
        for c in x.cells.values():
            for pos in range(c.dim):
                if c.lower[pos] in forward and c.name not in forward:
                    forward.add(c.name)
                    changed = True
                if c.name in forward and c.upper[pos] not in forward:
                    forward.add(c.upper[pos])
                    changed = True
    backward = set(x.accept)
    changed = True
    while changed:
        changed = False
        for c in x.cells.values():
            for pos in range(c.dim):
                if c.upper[pos] in backward and c.name not in backward:
                    backward.add(c.name)
                    changed = True
                if c.name in backward and c.lower[pos] not in backward:
                    backward.add(c.lower[pos])
                    changed = True
    return frozenset(forward), frozenset(backward)
