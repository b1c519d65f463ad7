"""Non-provability constraints, their boolean-theory semantics, and the
reduction to ICE samples.

A sample collects weakening disjunctions W, strengthening conjunctions S,
and inductivity pairs I.  Consistency of a candidate conjunction map is
decided set-theoretically: for atom conjunctions and atom disjunctions,
``conj => disj`` is valid iff they share an atom, and ``conj1 => conj2``
iff conj2's atoms are a subset of conj1's.

The ``c``/``d`` translation maps constraints to valuations so that an
ICE learner can consume them; ``to_ice`` is equi-consistency preserving
(checked exhaustively by the test-suite oracles here).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .learner import Conjunction, HoleMismatch, ICESample, Valuation, satisfies


@dataclass(frozen=True, order=True)
class DisjunctionConstraint:
    """chi = atom_1 or ... or atom_k over one hole; empty means *false*."""

    hole: str
    atoms: frozenset[int]


@dataclass(frozen=True, order=True)
class ConjunctionConstraint:
    """eta = atom_1 and ... and atom_k over one hole; empty means *true*."""

    hole: str
    atoms: frozenset[int]


@dataclass(frozen=True, order=True)
class InductivityConstraint:
    lhs: ConjunctionConstraint
    rhs: DisjunctionConstraint


@dataclass(frozen=True)
class CDNPISample:
    W: frozenset[DisjunctionConstraint]
    S: frozenset[ConjunctionConstraint]
    I: frozenset[InductivityConstraint]

    @staticmethod
    def empty() -> "CDNPISample":
        return CDNPISample(frozenset(), frozenset(), frozenset())

    def add(self, constraint) -> "CDNPISample":
        if isinstance(constraint, DisjunctionConstraint):
            return CDNPISample(self.W | {constraint}, self.S, self.I)
        if isinstance(constraint, ConjunctionConstraint):
            return CDNPISample(self.W, self.S | {constraint}, self.I)
        if isinstance(constraint, InductivityConstraint):
            return CDNPISample(self.W, self.S, self.I | {constraint})
        raise TypeError(f"not a constraint: {constraint!r}")

    def holes(self) -> set[str]:
        out = {w.hole for w in self.W} | {s.hole for s in self.S}
        for ind in self.I:
            out |= {ind.lhs.hole, ind.rhs.hole}
        return out


def entails_conj_disj(gamma: Conjunction, chi: DisjunctionConstraint) -> bool:
    """Validity of gamma => chi: holds iff the atom sets intersect."""
    if gamma.hole != chi.hole:
        raise HoleMismatch(f"{gamma.hole} vs {chi.hole}")
    return bool(gamma.atoms & chi.atoms)


def entails_conj_conj(eta: ConjunctionConstraint, gamma: Conjunction) -> bool:
    """Validity of eta => gamma: holds iff gamma's atoms are among eta's."""
    if eta.hole != gamma.hole:
        raise HoleMismatch(f"{eta.hole} vs {gamma.hole}")
    return gamma.atoms <= eta.atoms


def is_consistent(candidate: Mapping[str, Conjunction], sample: CDNPISample) -> bool:
    """A candidate map survives every constraint of the sample."""
    for hole in sample.holes():
        if hole not in candidate:
            raise KeyError(f"candidate misses hole {hole}")
    for chi in sample.W:
        if entails_conj_disj(candidate[chi.hole], chi):
            return False
    for eta in sample.S:
        if entails_conj_conj(eta, candidate[eta.hole]):
            return False
    for ind in sample.I:
        if entails_conj_conj(ind.lhs, candidate[ind.lhs.hole]) and entails_conj_disj(
            candidate[ind.rhs.hole], ind.rhs
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# The c / d translation
# ---------------------------------------------------------------------------

def c_of(eta: ConjunctionConstraint, universes: Mapping[str, int]) -> Valuation:
    """v(p) = true iff p is an atom of eta."""
    n = universes[eta.hole]
    return Valuation(eta.hole, tuple(i in eta.atoms for i in range(n)))


def d_of(chi: DisjunctionConstraint, universes: Mapping[str, int]) -> Valuation:
    """v(p) = false iff p is an atom of chi."""
    n = universes[chi.hole]
    return Valuation(chi.hole, tuple(i not in chi.atoms for i in range(n)))


def to_ice(sample: CDNPISample, universes: Mapping[str, int]) -> ICESample:
    positives = frozenset(d_of(chi, universes) for chi in sample.W)
    negatives = frozenset(c_of(eta, universes) for eta in sample.S)
    implications = frozenset(
        (c_of(ind.lhs, universes), d_of(ind.rhs, universes)) for ind in sample.I
    )
    return ICESample(positives, negatives, implications)


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def all_candidates(universes: Mapping[str, int]) -> Iterable[dict[str, Conjunction]]:
    """Every per-hole conjunction map, in a deterministic order."""
    holes = sorted(universes)
    spaces = [
        [
            Conjunction(h, frozenset(i for i in range(universes[h]) if mask >> i & 1))
            for mask in range(1 << universes[h])
        ]
        for h in holes
    ]
    for combo in itertools.product(*spaces):
        yield dict(zip(holes, combo))


def brute_force_consistent(
    sample: CDNPISample, universes: Mapping[str, int]
) -> list[dict[str, Conjunction]]:
    """Exhaustively enumerate the candidate maps consistent with a sample."""
    total = sum(universes.values())
    if total > 20:
        raise ValueError(f"universe too large for enumeration: {total} > 20")
    return [cand for cand in all_candidates(universes) if is_consistent(cand, sample)]


def brute_force_max_conjunction(
    sample: ICESample, universes: Mapping[str, int]
) -> dict[str, Conjunction] | None:
    """Atom-set-maximal ICE-consistent map by enumeration, or None.

    Enumerates every map, keeps the consistent ones, and returns the one
    that pointwise contains all others.  Its existence (uniqueness of the
    maximum) is itself verified here rather than assumed.
    """
    from .learner import consistent_with

    total = sum(universes.values())
    if total > 20:
        raise ValueError(f"universe too large for enumeration: {total} > 20")
    consistent = [c for c in all_candidates(universes) if consistent_with(c, sample)]
    if not consistent:
        return None
    union = {
        h: Conjunction(h, frozenset().union(*(c[h].atoms for c in consistent)))
        for h in universes
    }
    if union not in consistent:
        raise AssertionError("consistent conjunctions have no unique maximum")
    return union


# ---------------------------------------------------------------------------
# Serialization: one constraint per line
# ---------------------------------------------------------------------------
#
#   W hole p3|p7
#   S hole p1&p2
#   I holeA p1&p2 -> holeB p3|p4
#
# Empty bodies print as `false` (disjunction) and `true` (conjunction).

def _atoms_to_str(atoms: frozenset[int], sep: str, empty: str) -> str:
    if not atoms:
        return empty
    return sep.join(f"p{i + 1}" for i in sorted(atoms))


def _atoms_from_str(text: str, empty: str) -> frozenset[int]:
    text = text.strip()
    if text == empty:
        return frozenset()
    parts = text.replace("|", " ").replace("&", " ").split()
    return frozenset(int(p[1:]) - 1 for p in parts)


def constraint_to_line(constraint) -> str:
    if isinstance(constraint, DisjunctionConstraint):
        return f"W {constraint.hole} {_atoms_to_str(constraint.atoms, '|', 'false')}"
    if isinstance(constraint, ConjunctionConstraint):
        return f"S {constraint.hole} {_atoms_to_str(constraint.atoms, '&', 'true')}"
    if isinstance(constraint, InductivityConstraint):
        lhs = f"{constraint.lhs.hole} {_atoms_to_str(constraint.lhs.atoms, '&', 'true')}"
        rhs = f"{constraint.rhs.hole} {_atoms_to_str(constraint.rhs.atoms, '|', 'false')}"
        return f"I {lhs} -> {rhs}"
    raise TypeError(f"not a constraint: {constraint!r}")


def constraint_from_line(line: str):
    parts = line.strip().split()
    if not parts:
        raise ValueError("empty constraint line")
    if parts[0] == "W" and len(parts) == 3:
        return DisjunctionConstraint(parts[1], _atoms_from_str(parts[2], "false"))
    if parts[0] == "S" and len(parts) == 3:
        return ConjunctionConstraint(parts[1], _atoms_from_str(parts[2], "true"))
    if parts[0] == "I" and len(parts) == 6 and parts[3] == "->":
        lhs = ConjunctionConstraint(parts[1], _atoms_from_str(parts[2], "true"))
        rhs = DisjunctionConstraint(parts[4], _atoms_from_str(parts[5], "false"))
        return InductivityConstraint(lhs, rhs)
    raise ValueError(f"malformed constraint line: {line!r}")


def sample_to_text(constraints: Iterable) -> str:
    return "\n".join(constraint_to_line(c) for c in constraints) + "\n"


def sample_from_text(text: str) -> CDNPISample:
    sample = CDNPISample.empty()
    for line in text.splitlines():
        if line.strip():
            sample = sample.add(constraint_from_line(line))
    return sample
