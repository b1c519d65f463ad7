"""Invariant synthesis from non-provability information.

A teacher built on an incomplete quantifier-instantiation verifier emits
conjunction/disjunction constraints whenever a conjectured invariant fails
to prove; a Houdini-style learner consumes them through a reduction to ICE
samples and proposes the next conjecture.
"""

__version__ = "0.1.0"
