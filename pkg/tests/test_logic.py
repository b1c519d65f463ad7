import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npisynth.logic import (
    BOOL,
    INT,
    And,
    BoolAtom,
    BoolLit,
    Cmp,
    Exists,
    Forall,
    HoleRef,
    Iff,
    Implies,
    IntLit,
    Not,
    Or,
    Predicate,
    SortError,
    Sub,
    Var,
    conj,
    free_vars,
    nnf,
    rename_bound,
    subst,
    substitute_holes,
)
from npisynth.parser import NplError, parse_formula_text, parse_program
from npisynth.printer import formula_to_str, program_to_str


# ---------------------------------------------------------------------------
# nnf
# ---------------------------------------------------------------------------

P, Q, R, S4 = (BoolAtom(Var(n, BOOL)) for n in "pqrs")


def truth_table(f, atoms=("p", "q", "r", "s")):
    rows = []
    for bits in itertools.product([False, True], repeat=len(atoms)):
        env = dict(zip(atoms, bits))

        def ev(g):
            if isinstance(g, BoolLit):
                return g.value
            if isinstance(g, BoolAtom):
                return env[g.term.name]
            if isinstance(g, Not):
                return not ev(g.arg)
            if isinstance(g, And):
                return all(ev(a) for a in g.args)
            if isinstance(g, Or):
                return any(ev(a) for a in g.args)
            if isinstance(g, Implies):
                return (not ev(g.left)) or ev(g.right)
            if isinstance(g, Iff):
                return ev(g.left) == ev(g.right)
            raise TypeError(g)

        rows.append(ev(f))
    return rows


def is_nnf(f):
    if isinstance(f, (BoolLit, Cmp, BoolAtom)):
        return True
    if isinstance(f, Not):
        return isinstance(f.arg, (BoolAtom, Cmp))
    if isinstance(f, (And, Or)):
        return all(is_nnf(a) for a in f.args)
    if isinstance(f, (Forall, Exists)):
        return is_nnf(f.body)
    return False  # Implies / Iff must be gone


@st.composite
def ground_formulas(draw, depth=3):
    if depth == 0:
        return draw(st.sampled_from([P, Q, R, S4, BoolLit(True), BoolLit(False)]))
    kind = draw(st.sampled_from(["atom", "not", "and", "or", "implies", "iff"]))
    if kind == "atom":
        return draw(ground_formulas(depth=0))
    if kind == "not":
        return Not(draw(ground_formulas(depth=depth - 1)))
    sub1 = draw(ground_formulas(depth=depth - 1))
    sub2 = draw(ground_formulas(depth=depth - 1))
    if kind == "and":
        return And((sub1, sub2))
    if kind == "or":
        return Or((sub1, sub2))
    if kind == "implies":
        return Implies(sub1, sub2)
    return Iff(sub1, sub2)


class TestNnf:
    def test_de_morgan(self):
        assert nnf(Not(And((P, Q)))) == Or((Not(P), Not(Q)))

    def test_negated_forall(self):
        x = Var("x", INT)
        f = Not(Forall((x,), Cmp("<", x, IntLit(0))))
        assert nnf(f) == Exists((x,), Cmp(">=", x, IntLit(0)))

    def test_atom_identity(self):
        assert nnf(P) == P

    def test_rejects_holes(self):
        with pytest.raises(ValueError):
            nnf(HoleRef("L"))

    @given(ground_formulas())
    @settings(max_examples=500, deadline=None)
    def test_preserves_truth_tables(self, f):
        g = nnf(f)
        assert is_nnf(g)
        assert truth_table(f) == truth_table(g)


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

class TestSubst:
    def test_capture_avoided(self):
        x, y = Var("x", INT), Var("y", INT)
        # (forall y :: y > x)[x := y] must not capture the free y
        f = Forall((y,), Cmp(">", y, x))
        g = subst(f, {"x": y})
        assert isinstance(g, Forall)
        bound = g.vars[0]
        assert bound.name != "y"
        assert g.body == Cmp(">", bound, y)

    def test_rename_bound_canonical(self):
        x, y = Var("x", INT), Var("y", INT)
        f = Forall((x,), Exists((y,), Cmp("<", x, y)))
        g = rename_bound(f, "q!L!0")
        assert isinstance(g, Forall)
        assert g.vars[0].name == "q!L!0!0"
        assert g.body.vars[0].name == "q!L!0!1"


# ---------------------------------------------------------------------------
# substitute_holes
# ---------------------------------------------------------------------------

def preds_for(hole, bodies):
    return [Predicate(hole, i, b) for i, b in enumerate(bodies)]


class TestSubstituteHoles:
    UNIV = {"L": preds_for("L", [Cmp(">", Var("x", INT), IntLit(0)), P])}

    def test_single_atom(self):
        got = substitute_holes(HoleRef("L"), {"L": frozenset({0})}, self.UNIV)
        assert got == Cmp(">", Var("x", INT), IntLit(0))

    def test_empty_candidate_is_true(self):
        got = substitute_holes(HoleRef("L"), {"L": frozenset()}, self.UNIV)
        assert got == BoolLit(True)

    def test_structural(self):
        f = And((HoleRef("L"), Cmp(">", Var("x", INT), IntLit(0))))
        got = substitute_holes(f, {"L": frozenset({0, 1})}, self.UNIV)
        assert got == And(
            (And((Cmp(">", Var("x", INT), IntLit(0)), P)), Cmp(">", Var("x", INT), IntLit(0)))
        )

    def test_unbound_hole(self):
        with pytest.raises(KeyError):
            substitute_holes(HoleRef("X"), {"L": frozenset()}, self.UNIV)

    def test_homomorphism_over_connectives(self):
        cand = {"L": frozenset({1})}
        for wrap in [
            lambda f: Not(f),
            lambda f: And((f, P)),
            lambda f: Or((f, P)),
            lambda f: Implies(f, P),
            lambda f: Iff(P, f),
        ]:
            inner = substitute_holes(HoleRef("L"), cand, self.UNIV)
            assert substitute_holes(wrap(HoleRef("L")), cand, self.UNIV) == wrap(inner)


# ---------------------------------------------------------------------------
# parser errors and round trips
# ---------------------------------------------------------------------------

TRIVIAL = """
procedure t()
{
  assert true;
}
"""


class TestParser:
    def test_trivial_program(self):
        p = parse_program(TRIVIAL)
        assert p.name == "t"
        assert len(p.body) == 1

    def test_sort_error_on_array_addition(self):
        src = "var x: Int; var a: [Int]Int;\nprocedure t() { x := x + a; }"
        with pytest.raises(NplError) as exc:
            parse_program(src)
        assert exc.value.line == 2

    def test_duplicate_hole(self):
        src = """
procedure t() {
  while (true) invariant ?H; { }
  while (true) invariant ?H; { }
}
"""
        with pytest.raises(NplError, match="duplicate hole"):
            parse_program(src)

    def test_syntax_error_positioned(self):
        with pytest.raises(NplError) as exc:
            parse_program("var x Int;")
        assert exc.value.line == 1 and exc.value.col > 1

    def test_pragmas(self):
        src = """
// depth: 2
// flags: neg-close
var i: Int;
// oracle: L: i >= 0 ; i <= 9
procedure t() {
  while (i < 9) invariant ?L; { i := i + 1; }
}
"""
        p = parse_program(src)
        assert p.depth == 2
        assert "neg-close" in p.flags
        assert [str(f) for f in p.oracle["L"]] == ["i >= 0", "i <= 9"]

    def test_formula_text_against_program(self):
        p = parse_program("var i: Int;\nprocedure t() { assert true; }")
        f = parse_formula_text("forall x:Int :: x <= i ==> x - 1 < i", p)
        assert isinstance(f, Forall)
        with pytest.raises(NplError):
            parse_formula_text("j > 0", p)


ROUND_TRIP_SOURCES = [
    TRIVIAL,
    """
type Elem;
var i: Int; var N: Int; var a: [Int]Int; var p: Bool;
function f(Int, Int): Int;
function marked(Int): Bool;
axiom N > 0;
axiom (forall x:Int :: marked(x) ==> (exists y:Int :: f(x, y) == 0));
procedure demo()
  requires i == 0;
  ensures i == N;
{
  while (i < N) invariant ?L; {
    a[i] := ite(a[i] > 0, a[i], 0 - a[i]);
    i := i + 1;
  }
  invariant ?R;
  assume (forall x:Int :: marked(x));
}
""",
    """
var x: Int; var y: Int; var p: Bool;
procedure ops()
  requires p <==> x != y;
{
  if (x < y || p && x == 0) { x := 2 * y - 1; } else { havoc y; }
  assert !(x > y) ==> x <= y;
}
""",
]


class TestRoundTrip:
    @pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
    def test_parse_print_parse(self, src):
        p1 = parse_program(src)
        text = program_to_str(p1)
        p2 = parse_program(text)
        assert p1.body == p2.body
        assert p1.axioms == p2.axioms
        assert p1.requires == p2.requires
        assert p1.ensures == p2.ensures
        assert p1.vars == p2.vars
        assert program_to_str(p2) == text

    def test_formula_print_parse(self):
        p = parse_program("var i: Int; var a: [Int]Int;\nprocedure t() { assert true; }")
        for text in [
            "i - 1 <= 0",
            "a[i := 0][i] == 0",
            "(forall x:Int :: 0 <= x && x < i ==> a[x] != i)",
            "i < 0 || (exists y:Int :: a[y] == i) && i > 0",
        ]:
            f = parse_formula_text(text, p)
            assert parse_formula_text(formula_to_str(f), p) == f
