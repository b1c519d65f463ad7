"""Reduction of quantified proof obligations to quantifier-free formulas.

To prove a VC, its negation is normalized, existentials are skolemized,
and the remaining universals are replaced by finite conjunctions of
ground instances drawn from a term pool.  Unsatisfiability of the result
implies validity of the VC; satisfiability yields a model carrying
non-provability information.

Skolem naming rule: a skolem symbol is named after the bound variable it
eliminates.  Internal binder names (they contain ``!``: canonical
predicate binders ``q!...`` and havoc binders ``hv!...``) are globally
unique by construction and keep their name verbatim, which makes the
skolem constants of a predicate occurrence reproducible from the
predicate body alone.  User-written binders get an ``sk!`` prefix and a
per-call uniquifier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .logic import (
    ARRAY,
    BOOL,
    INT,
    Add,
    And,
    Apply,
    BoolAtom,
    BoolLit,
    BoolLitTerm,
    Cmp,
    Exists,
    Forall,
    Formula,
    FuncDecl,
    IntLit,
    Not,
    Or,
    Select,
    Sort,
    Sub,
    Term,
    Var,
    formula_terms,
    free_vars,
    subst,
)

TRUE = BoolLit(True)


# ---------------------------------------------------------------------------
# Ground term pools
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroundTermPool:
    by_sort: Mapping[Sort, tuple[Term, ...]]
    depth: int

    def terms(self, sort: Sort) -> tuple[Term, ...]:
        return self.by_sort.get(sort, ())

    def all_terms(self) -> set[Term]:
        out: set[Term] = set()
        for ts in self.by_sort.values():
            out.update(ts)
        return out

    def size(self) -> int:
        return sum(len(ts) for ts in self.by_sort.values())


def _term_key(t: Term) -> str:
    from .printer import term_to_str

    return term_to_str(t)


def collect_terms(f: Formula, depth: int) -> GroundTermPool:
    """Pool for instantiation: free constants of f, its integer literals,
    and 0, closed ``depth`` steps under the applications appearing in f
    (function symbols, array selects, and literal-offset arithmetic)."""
    base: dict[Sort, set[Term]] = {INT: set(), BOOL: set(), ARRAY: set()}

    def add(t: Term) -> None:
        base.setdefault(t.sort, set()).add(t)

    for v in sorted(free_vars(f), key=lambda v: v.name):
        add(v)
    for t in formula_terms(f):
        if isinstance(t, IntLit):
            add(t)
    add(IntLit(0))
    base[BOOL].update({BoolLitTerm(True), BoolLitTerm(False)})

    # application shapes present in f
    funcs: set[FuncDecl] = set()
    offsets: set[tuple[str, int]] = set()
    uses_select = False
    for t in formula_terms(f):
        if isinstance(t, Apply) and t.func.arg_sorts:
            funcs.add(t.func)
        elif isinstance(t, Select):
            uses_select = True
        elif isinstance(t, Add):
            if isinstance(t.right, IntLit):
                offsets.add(("+", t.right.value))
            if isinstance(t.left, IntLit):
                offsets.add(("+", t.left.value))
        elif isinstance(t, Sub):
            if isinstance(t.right, IntLit):
                offsets.add(("-", t.right.value))

    pools = {s: set(ts) for s, ts in base.items()}
    for _ in range(depth):
        new: set[Term] = set()
        args_source = {s: sorted(ts, key=_term_key) for s, ts in pools.items()}
        for fd in sorted(funcs, key=lambda d: d.name):
            for combo in itertools.product(*(args_source.get(s, []) for s in fd.arg_sorts)):
                new.add(Apply(fd, tuple(combo)))
        if uses_select:
            for arr in args_source.get(ARRAY, []):
                for idx in args_source.get(INT, []):
                    new.add(Select(arr, idx))
        for op, c in sorted(offsets):
            for t in args_source.get(INT, []):
                new.add(Add(t, IntLit(c)) if op == "+" else Sub(t, IntLit(c)))
        for t in new:
            pools.setdefault(t.sort, set()).add(t)

    by_sort = {s: tuple(sorted(ts, key=_term_key)) for s, ts in pools.items() if ts}
    return GroundTermPool(by_sort, depth)


# ---------------------------------------------------------------------------
# Skolemization
# ---------------------------------------------------------------------------

@dataclass
class SkolemizeResult:
    formula: Formula
    constants: list[Var]
    functions: list[FuncDecl]


def skolemize(f: Formula) -> SkolemizeResult:
    """Replace existentials of an NNF formula by fresh constants/functions
    over the universals in scope.  Only universals remain afterwards."""
    used = {v.name for v in free_vars(f)}
    constants: list[Var] = []
    functions: list[FuncDecl] = []

    def name_for(bound: str) -> str:
        if "!" in bound:
            return bound
        base = f"sk!{bound}"
        name = base
        n = 0
        while name in used:
            n += 1
            name = f"{base}!{n}"
        return name

    def go(g: Formula, scope: tuple[Var, ...]) -> Formula:
        if isinstance(g, (BoolLit, Cmp, BoolAtom, Not)):
            return g
        if isinstance(g, And):
            return And(tuple(go(a, scope) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a, scope) for a in g.args))
        if isinstance(g, Forall):
            return Forall(g.vars, go(g.body, scope + g.vars))
        if isinstance(g, Exists):
            mapping: dict[str, Term] = {}
            for v in g.vars:
                name = name_for(v.name)
                used.add(name)
                if scope:
                    fd = FuncDecl(name, tuple(s.sort for s in scope), v.sort)
                    functions.append(fd)
                    mapping[v.name] = Apply(fd, tuple(scope))
                else:
                    const = Var(name, v.sort)
                    constants.append(const)
                    mapping[v.name] = const
            return go(subst(g.body, mapping), scope)
        raise ValueError(f"skolemize expects NNF, found {g!r}")

    return SkolemizeResult(go(f, ()), constants, functions)


# ---------------------------------------------------------------------------
# Instantiation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceRecord:
    source: Forall  # as encountered, body already instantiated below
    substitution: tuple[tuple[str, Term], ...]
    instance: Formula


def instantiate(f: Formula, pool: GroundTermPool) -> tuple[Formula, list[InstanceRecord]]:
    """Replace every universal by the conjunction of its pool instances,
    innermost first.  A sort with an empty pool yields the vacuous
    conjunction ``true``."""
    log: list[InstanceRecord] = []

    def go(g: Formula) -> Formula:
        if isinstance(g, (BoolLit, Cmp, BoolAtom, Not)):
            return g
        if isinstance(g, And):
            return And(tuple(go(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a) for a in g.args))
        if isinstance(g, Exists):
            raise ValueError("existential survived skolemization")
        if isinstance(g, Forall):
            body = go(g.body)
            source = Forall(g.vars, body)
            choices = [pool.terms(v.sort) for v in g.vars]
            if any(not c for c in choices):
                return TRUE
            conjuncts = []
            for combo in itertools.product(*choices):
                mapping = {v.name: t for v, t in zip(g.vars, combo)}
                inst = subst(body, mapping)
                log.append(InstanceRecord(source, tuple(sorted(mapping.items())), inst))
                conjuncts.append(inst)
            if len(conjuncts) == 1:
                return conjuncts[0]
            return And(tuple(conjuncts))
        raise TypeError(f"unknown formula {g!r}")

    return go(f), log


# ---------------------------------------------------------------------------
# The full reduction
# ---------------------------------------------------------------------------

@dataclass
class ApproxResult:
    qf: Formula  # quantifier-free reduction of the negated VC
    skolem_constants: list[Var]
    skolem_functions: list[FuncDecl]
    instance_log: list[InstanceRecord]
    pool: GroundTermPool


def approx(vc_formula: Formula, depth: int, pool: GroundTermPool | None = None) -> ApproxResult:
    """Negate, normalize, skolemize, instantiate.

    ``qf`` unsatisfiable implies the original formula is valid.  A caller
    may pass a pre-computed pool (the teacher shares one pool per triple
    so that non-provability is monotone across candidates); by default
    the pool is collected from the skolemized negation itself.
    """
    from .logic import nnf

    negated = nnf(Not(vc_formula))
    sk = skolemize(negated)
    if pool is None:
        pool = collect_terms(sk.formula, depth)
    qf, log = instantiate(sk.formula, pool)
    return ApproxResult(qf, sk.constants, sk.functions, log, pool)
