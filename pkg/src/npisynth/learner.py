"""Passive ICE learning of per-hole conjunctions over finite predicate sets.

Valuations are total truth assignments to one hole's predicate universe;
implications may connect valuations of different holes.  The learner is
Houdini: start from the strongest conjunction consistent with the
positives, promote implication targets to positives until fixpoint, then
check the negatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class PredicateId:
    hole: str
    index: int


@dataclass(frozen=True, order=True)
class Valuation:
    hole: str
    bits: tuple[bool, ...]

    def value(self, index: int) -> bool:
        return self.bits[index]

    def true_atoms(self) -> frozenset[int]:
        return frozenset(i for i, b in enumerate(self.bits) if b)


@dataclass(frozen=True, order=True)
class Conjunction:
    """A conjunction of a hole's predicates; the empty atom set is *true*."""

    hole: str
    atoms: frozenset[int]


@dataclass(frozen=True)
class ICESample:
    positives: frozenset[Valuation]
    negatives: frozenset[Valuation]
    implications: frozenset[tuple[Valuation, Valuation]]

    @staticmethod
    def empty() -> "ICESample":
        return ICESample(frozenset(), frozenset(), frozenset())

    def merged(self, other: "ICESample") -> "ICESample":
        return ICESample(
            self.positives | other.positives,
            self.negatives | other.negatives,
            self.implications | other.implications,
        )


class HoleMismatch(Exception):
    pass


class NoConsistentConjunction(Exception):
    """No conjunction over the universes is consistent with the sample."""

    def __init__(self, negative: Valuation):
        super().__init__(f"negative example at hole {negative.hole} satisfies the fixpoint")
        self.negative = negative


def satisfies(v: Valuation, c: Conjunction) -> bool:
    if v.hole != c.hole:
        raise HoleMismatch(f"valuation at {v.hole} vs conjunction at {c.hole}")
    return all(v.bits[i] for i in c.atoms)


def _check_universe(v: Valuation, universes: Mapping[str, int]) -> None:
    if v.hole not in universes:
        raise KeyError(f"valuation over undeclared hole {v.hole}")
    if len(v.bits) != universes[v.hole]:
        raise ValueError(
            f"valuation over hole {v.hole} has {len(v.bits)} bits, universe has {universes[v.hole]}"
        )


def houdini_passive(
    sample: ICESample, universes: Mapping[str, int]
) -> dict[str, Conjunction]:
    """The strongest per-hole conjunction map consistent with the sample.

    Raises NoConsistentConjunction when a negative example satisfies the
    implication-closed fixpoint (then no consistent map exists at all).
    """
    for v in sample.positives | sample.negatives:
        _check_universe(v, universes)
    for a, b in sample.implications:
        _check_universe(a, universes)
        _check_universe(b, universes)

    conj = {h: frozenset(range(n)) for h, n in universes.items()}

    def absorb(v: Valuation) -> bool:
        before = conj[v.hole]
        after = before & v.true_atoms()
        if after != before:
            conj[v.hole] = after
            return True
        return False

    for v in sorted(sample.positives):
        absorb(v)

    # Implication propagation: sorted order for reproducible traces; the
    # fixpoint itself is order-independent.
    implications = sorted(sample.implications)
    changed = True
    while changed:
        changed = False
        for src, tgt in implications:
            if all(src.bits[i] for i in conj[src.hole]) and absorb(tgt):
                changed = True

    for v in sorted(sample.negatives):
        if all(v.bits[i] for i in conj[v.hole]):
            raise NoConsistentConjunction(v)

    return {h: Conjunction(h, atoms) for h, atoms in conj.items()}


def consistent_with(candidate: Mapping[str, Conjunction], sample: ICESample) -> bool:
    """Direct check that a candidate map is consistent with an ICE sample."""
    for v in sample.positives:
        if not satisfies(v, candidate[v.hole]):
            return False
    for v in sample.negatives:
        if satisfies(v, candidate[v.hole]):
            return False
    for src, tgt in sample.implications:
        if satisfies(src, candidate[src.hole]) and not satisfies(tgt, candidate[tgt.hole]):
            return False
    return True
