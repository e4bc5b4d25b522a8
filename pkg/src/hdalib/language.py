"""Finite subsumption-closed languages and their quotient structure.

Quotients are computed once per language by enumerating all divisions of
all members; the resulting left/right index answers every prefix and
suffix query, which keeps the Myhill-Nerode construction cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import NotDownClosed
from .ipomset import (
    Ipomset,
    down_close,
    enumerate_divisions,
    fin,
    refinements,
    remove_targets,
    rfin_events,
    sorted_ipomsets,
    subsumes,
)

Quotient = frozenset[Ipomset]
EMPTY_QUOTIENT: Quotient = frozenset()


@dataclass(frozen=True)
class LanguageSet:
    """A finite language: a down-closed set of canonical ipomsets."""

    members: frozenset[Ipomset]
    alphabet: frozenset[str]
    generators: frozenset[Ipomset] = field(default=frozenset(), compare=False)

    def __contains__(self, p: Ipomset) -> bool:
        return p in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[Ipomset]:
        return sorted_ipomsets(self.members)


def language(
    members: Iterable[Ipomset],
    closed: bool = False,
    alphabet: Optional[Iterable[str]] = None,
) -> LanguageSet:
    """Build a language from generators.

    With ``closed=False`` the downward subsumption closure is taken; with
    ``closed=True`` the input is validated to already be down-closed and
    :class:`NotDownClosed` is raised on a missing refinement.
    """
    gens = frozenset(members)
    if closed:
        mem = gens
        full = down_close(gens)
        missing = full - mem
        if missing:
            witness = sorted_ipomsets(missing)[0]
            raise NotDownClosed(f"missing refinement {witness!r}")
    else:
        mem = down_close(gens)
    sigma = frozenset(
        itertools.chain.from_iterable(p.labels for p in mem)
        if alphabet is None
        else alphabet
    )
    return LanguageSet(members=mem, alphabet=sigma, generators=gens)


# ---------------------------------------------------------------------------
# the division index


@dataclass(frozen=True)
class _DivisionIndex:
    by_left: dict
    by_right: dict


@lru_cache(maxsize=None)
def _index(lang: LanguageSet) -> _DivisionIndex:
    by_left: dict[Ipomset, set[Ipomset]] = {}
    by_right: dict[Ipomset, set[Ipomset]] = {}
    for m in lang.members:
        for p, q in enumerate_divisions(m):
            by_left.setdefault(p, set()).add(q)
            by_right.setdefault(q, set()).add(p)
    return _DivisionIndex(
        by_left={k: frozenset(v) for k, v in by_left.items()},
        by_right={k: frozenset(v) for k, v in by_right.items()},
    )


def prefix_quotient(lang: LanguageSet, p: Ipomset) -> Quotient:
    """P\\L = {Q | P*Q ∈ L}."""
    return _index(lang).by_left.get(p, EMPTY_QUOTIENT)


def suffix_quotient(lang: LanguageSet, p: Ipomset) -> Quotient:
    """L/P = {Q | Q*P ∈ L}."""
    return _index(lang).by_right.get(p, EMPTY_QUOTIENT)


def prefixes(lang: LanguageSet) -> frozenset[Ipomset]:
    """All P with nonempty prefix quotient (left parts of divisions)."""
    return frozenset(_index(lang).by_left)


def suffixes(lang: LanguageSet) -> frozenset[Ipomset]:
    return frozenset(_index(lang).by_right)


# ---------------------------------------------------------------------------
# quotient families


@dataclass(frozen=True)
class QuotientFamily:
    """The distinct quotient values of a language, each with a witness.

    The empty quotient is always present; its representative is ``None``
    because no prefix produces it.
    """

    entries: tuple[tuple[Optional[Ipomset], Quotient], ...]

    def values(self) -> frozenset[Quotient]:
        return frozenset(v for _, v in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _family(reps: Iterable[Ipomset], get) -> QuotientFamily:
    chosen: dict[Quotient, Optional[Ipomset]] = {}
    for p in sorted_ipomsets(reps):
        val = get(p)
        chosen.setdefault(val, p)
    chosen.setdefault(EMPTY_QUOTIENT, None)
    entries = tuple(
        (rep, val)
        for val, rep in sorted(
            chosen.items(),
            key=lambda kv: (kv[1] is None, kv[1].sort_key() if kv[1] else ()),
        )
    )
    return QuotientFamily(entries=entries)


def suffix_quotient_family(lang: LanguageSet) -> QuotientFamily:
    """suff(L): all distinct values of P\\L."""
    return _family(prefixes(lang), lambda p: prefix_quotient(lang, p))


def prefix_quotient_family(lang: LanguageSet) -> QuotientFamily:
    """pref(L): all distinct values of L/P (kept for symmetry)."""
    return _family(suffixes(lang), lambda p: suffix_quotient(lang, p))


# ---------------------------------------------------------------------------
# equivalences


def weak_equiv(p: Ipomset, q: Ipomset, lang: LanguageSet) -> bool:
    """Equal target signatures and equal prefix quotients."""
    return fin(p) == fin(q) and prefix_quotient(lang, p) == prefix_quotient(lang, q)


def _removal_family(lang: LanguageSet, p: Ipomset):
    """Quotients of P−A for every A of removable target-loset positions."""
    tgt = p.target_events()
    rpos = [i for i, e in enumerate(tgt) if e not in p.source]
    fam = {}
    for k in range(len(rpos) + 1):
        for combo in itertools.combinations(rpos, k):
            removed = remove_targets(p, {tgt[i] for i in combo})
            fam[frozenset(combo)] = prefix_quotient(lang, removed)
    return fam


def strong_equiv(p: Ipomset, q: Ipomset, lang: LanguageSet) -> bool:
    """Weak equivalence plus equal quotients after every target removal."""
    if fin(p) != fin(q):
        return False
    return _removal_family(lang, p) == _removal_family(lang, q)


def class_key(lang: LanguageSet, p: Ipomset):
    """Hashable key whose equality is strong equivalence."""
    fam = _removal_family(lang, p)
    return (
        fin(p),
        tuple(
            (tuple(sorted(a)), tuple(sorted_ipomsets(v)))
            for a, v in sorted(fam.items(), key=lambda kv: tuple(sorted(kv[0])))
        ),
    )


# ---------------------------------------------------------------------------
# swap invariance


@dataclass(frozen=True)
class SwapInvarianceResult:
    invariant: bool
    violations: tuple[tuple[Ipomset, Ipomset], ...]  # (refined, subsuming)

    def __bool__(self) -> bool:
        return self.invariant


def is_swap_invariant(lang: LanguageSet) -> SwapInvarianceResult:
    """Check that P ⊑ Q forces P\\L = Q\\L whenever Q\\L is nonempty.

    Quantifying over prefixes only is complete: quotient monotonicity
    forces any refined P of a prefix Q to be a prefix itself, and pairs
    with empty right quotient satisfy the condition trivially.
    """
    pres = sorted_ipomsets(prefixes(lang))
    bad = []
    for p, q in itertools.permutations(pres, 2):
        if subsumes(p, q) and prefix_quotient(lang, p) != prefix_quotient(lang, q):
            bad.append((p, q))
    bad.sort(key=lambda t: (t[0].sort_key(), t[1].sort_key()))
    return SwapInvarianceResult(invariant=not bad, violations=tuple(bad))
