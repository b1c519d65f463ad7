import pytest

from npisynth.logic import (
    ARRAY,
    INT,
    And,
    BoolLit,
    Cmp,
    Forall,
    HoleRef,
    Implies,
    IntLit,
    Not,
    Predicate,
    Store,
    Var,
    conj,
)
from npisynth.parser import parse_formula_text, parse_program
from npisynth.program import Assert, Assign, Assume, Cut, Havoc, If, While
from npisynth.vcgen import (
    INV_TO_INV,
    INV_TO_POST,
    PLAIN,
    PRE_TO_INV,
    HoareTriple,
    NamedHavoc,
    VcgenError,
    cut_loops,
    post_paths,
    vc_of,
    wp_stmt,
    wp_stmts,
)

i, N, x = Var("i", INT), Var("N", INT), Var("x", INT)


SINGLE_LOOP = parse_program(
    """
var i: Int; var N: Int;
procedure count()
  requires i == 0 && N > 0;
  ensures i == N;
{
  while (i < N) invariant ?L; {
    i := i + 1;
  }
}
"""
)

FIG2_SHAPE = parse_program(
    """
var i: Int; var N: Int; var A: [Int]Int; var B: [Int]Int;
procedure inverse()
  ensures true;
{
  i := 0;
  while (i < N) invariant ?L; {
    B[A[i]] := i;
    i := i + 1;
  }
  invariant ?R;
}
"""
)

LOOP_FREE = parse_program(
    """
var x: Int;
procedure straight()
  requires x > 0;
  ensures x > 1;
{
  x := x + 1;
}
"""
)


class TestCutLoops:
    def test_single_loop_three_triples(self):
        triples = cut_loops(SINGLE_LOOP)
        assert [t.kind for t in triples] == [PRE_TO_INV, INV_TO_INV, INV_TO_POST]
        entry, preserve, exit_ = triples
        assert entry.post == HoleRef("L") and entry.body == ()
        assert preserve.pre_hole == "L" and preserve.post_hole == "L"
        assert exit_.pre_hole == "L" and exit_.post_hole is None

    def test_figure2_shape_four_triples(self):
        triples = cut_loops(FIG2_SHAPE)
        assert len(triples) == 4
        kinds = [t.kind for t in triples]
        assert kinds == [PRE_TO_INV, INV_TO_INV, INV_TO_INV, INV_TO_POST]
        exit_to_cut = triples[2]
        assert exit_to_cut.pre_hole == "L" and exit_to_cut.post_hole == "R"
        assert exit_to_cut.body == ()

    def test_loop_free_single_plain(self):
        triples = cut_loops(LOOP_FREE)
        assert len(triples) == 1
        assert triples[0].kind == PLAIN

    def test_statement_coverage(self):
        # every non-structural statement of the program appears in exactly
        # one triple body
        def leaves(stmts):
            for s in stmts:
                if isinstance(s, While):
                    yield from leaves(s.body)
                elif isinstance(s, If):
                    yield ("if", s.cond)
                    yield from leaves(s.then)
                    yield from leaves(s.els)
                elif isinstance(s, Cut):
                    continue
                else:
                    yield s

        for program in [SINGLE_LOOP, FIG2_SHAPE, LOOP_FREE]:
            prog_leaves = list(leaves(program.body))
            triple_leaves = []
            for t in cut_loops(program):
                for s in t.body:
                    if isinstance(s, NamedHavoc):
                        triple_leaves.append(Havoc(s.name))
                    elif isinstance(s, If):
                        triple_leaves.extend(leaves((s,)))
                    else:
                        triple_leaves.append(s)
            assert triple_leaves == prog_leaves

    def test_axioms_fold_into_every_pre(self):
        p = parse_program(
            """
var i: Int; var N: Int;
axiom N > 0;
procedure t() { while (i < N) invariant ?L; { i := i + 1; } }
"""
        )
        for t in cut_loops(p):
            assert "N > 0" in str(t.pre)

    def test_loop_inside_if_rejected(self):
        p = parse_program(
            """
var i: Int;
procedure t() {
  if (i > 0) { while (i > 0) invariant ?L; { i := i - 1; } }
}
"""
        )
        with pytest.raises(VcgenError):
            cut_loops(p)

    def test_nested_loops(self):
        p = parse_program(
            """
var i: Int; var j: Int; var N: Int;
procedure t() {
  while (i < N) invariant ?Outer; {
    j := 0;
    while (j < i) invariant ?Inner; { j := j + 1; }
  }
}
"""
        )
        triples = cut_loops(p)
        kinds = {(t.kind, t.pre_hole, t.post_hole) for t in triples}
        assert (INV_TO_INV, "Inner", "Outer") in kinds  # inner exit restores outer
        assert (INV_TO_INV, "Outer", "Inner") in kinds  # outer body reaches inner head


class TestWp:
    def test_assign_substitutes(self):
        got = wp_stmt(Assign("x", Add_(x, 1)), Cmp(">", x, IntLit(0)))
        assert got == Cmp(">", Add_(x, 1), IntLit(0))

    def test_assume_implies(self):
        c = Cmp(">", x, IntLit(0))
        post = Cmp(">", x, IntLit(1))
        assert wp_stmt(Assume(c), post) == Implies(c, post)

    def test_assert_conjoins(self):
        c = Cmp(">", x, IntLit(0))
        post = Cmp(">", x, IntLit(1))
        assert wp_stmt(Assert(c), post) == And((c, post))

    def test_havoc_quantifies(self):
        got = wp_stmt(NamedHavoc("x", "hv!x!0", INT), Cmp(">=", x, IntLit(0)))
        fresh = Var("hv!x!0", INT)
        assert got == Forall((fresh,), Cmp(">=", fresh, IntLit(0)))

    def test_array_assign_stores(self):
        a = Var("a", ARRAY)
        post = Cmp("==", SelectOf(a, IntLit(0)), IntLit(5))
        got = wp_stmt(ArrayAssign_("a", IntLit(0), IntLit(5)), post)
        assert got == Cmp("==", SelectOf(Store(a, IntLit(0), IntLit(5)), IntLit(0)), IntLit(5))

    def test_if_splits_on_guard(self):
        c = Cmp(">", x, IntLit(0))
        post = Cmp(">=", x, IntLit(0))
        s = If(c, (Assign("x", IntLit(1)),), (Assign("x", IntLit(0)),))
        got = wp_stmt(s, post)
        assert got == And(
            (
                Implies(c, Cmp(">=", IntLit(1), IntLit(0))),
                Implies(Not(c), Cmp(">=", IntLit(0), IntLit(0))),
            )
        )

    def test_sequencing(self):
        post = Cmp(">", x, IntLit(0))
        s1 = Assign("x", Add_(x, 1))
        s2 = Assign("x", Mul_(2, x))
        assert wp_stmts((s1, s2), post) == wp_stmt(s1, wp_stmt(s2, post))


class TestVcOf:
    def test_plain_skip(self):
        t = HoareTriple(0, Cmp(">", x, IntLit(0)), (), Cmp(">", x, IntLit(0)), PLAIN, None, None)
        vc = vc_of(t, {}, {}, {"x": INT})
        assert vc.formula == Implies(Cmp(">", x, IntLit(0)), Cmp(">", x, IntLit(0)))

    def test_empty_candidate_gives_true_post(self):
        t = HoareTriple(0, Cmp(">", x, IntLit(0)), (), HoleRef("L"), PRE_TO_INV, None, "L")
        vc = vc_of(t, {"L": frozenset()}, {"L": []}, {"x": INT})
        assert vc.formula == Implies(Cmp(">", x, IntLit(0)), BoolLit(True))

    def test_counter_loop_preservation(self):
        # {i>=0 and i<N} i := i+1 {i>=0}  -->  i>=0 and i<N ==> i+1>=0
        preds = {"L": [Predicate("L", 0, Cmp(">=", i, IntLit(0)))]}
        t = HoareTriple(
            0,
            conj([HoleRef("L"), Cmp("<", i, N)]),
            (Assign("i", Add_(i, 1)),),
            HoleRef("L"),
            INV_TO_INV,
            "L",
            "L",
        )
        vc = vc_of(t, {"L": frozenset({0})}, preds, {"i": INT, "N": INT})
        assert vc.formula == Implies(
            And((Cmp(">=", i, IntLit(0)), Cmp("<", i, N))),
            Cmp(">=", Add_(i, 1), IntLit(0)),
        )


class TestPostPaths:
    def test_straight_line_store(self):
        body = (Assign("x", Add_(x, 1)), Assign("y", x))
        paths = post_paths(body, {"x": INT, "y": INT})
        assert len(paths) == 1
        assert paths[0].store["x"] == Add_(x, 1)
        assert paths[0].store["y"] == Add_(x, 1)

    def test_havoc_becomes_constant(self):
        body = (NamedHavoc("x", "hv!x!0", INT),)
        [p] = post_paths(body, {"x": INT})
        assert p.store["x"] == Var("hv!x!0", INT)

    def test_if_forks_paths(self):
        c = Cmp(">", x, IntLit(0))
        body = (If(c, (Assign("x", IntLit(1)),), (Assign("x", IntLit(2)),)), Assign("y", x))
        paths = post_paths(body, {"x": INT, "y": INT})
        assert len(paths) == 2
        assert paths[0].conds == (c,)
        assert paths[0].store["y"] == IntLit(1)
        assert paths[1].conds == (Not(c),)
        assert paths[1].store["y"] == IntLit(2)

    def test_array_assign_chains_stores(self):
        a = Var("a", ARRAY)
        body = (ArrayAssign_("a", IntLit(0), IntLit(1)), ArrayAssign_("a", IntLit(2), IntLit(3)))
        [p] = post_paths(body, {"a": ARRAY})
        assert p.store["a"] == Store(Store(a, IntLit(0), IntLit(1)), IntLit(2), IntLit(3))


# small helpers ------------------------------------------------------------

from npisynth.logic import Add as _Add, Mul as _Mul, Select as SelectOf
from npisynth.program import ArrayAssign as ArrayAssign_


def Add_(t, c):
    return _Add(t, IntLit(c)) if isinstance(c, int) else _Add(t, c)


def Mul_(c, t):
    return _Mul(c, t)
