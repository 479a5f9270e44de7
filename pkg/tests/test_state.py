import random

from folc.algebra import EMPTY_SUBST, make_subst, parse_subst
from folc.oracle import IntervalBound, satisfiable
from folc.state import (
    ERROR,
    Classification,
    Pair,
    Store,
    classify,
    cons,
    cons_plus,
    drop_state,
    drop_subst,
    pair,
)
from folc.syntax import (
    And,
    App,
    BOTTOM,
    Eq,
    Exists,
    Neq,
    Val,
    Var,
    free_vars,
    parse_formula,
)
from folc.corpus import gen_state, gen_store_formula

x, y, z, u = Var("x"), Var("y"), Var("z"), Var("u")


def F(text, J, **kw):
    return parse_formula(text, J.signature, **kw)


class TestStore:
    def test_dedup_preserves_insertion_order(self):
        s = Store([Eq(x, y), Eq(y, z), Eq(x, y)])
        assert s.items == (Eq(x, y), Eq(y, z))

    def test_equality_ignores_order(self):
        assert Store([Eq(x, y), Eq(y, z)]) == Store([Eq(y, z), Eq(x, y)])
        assert hash(Store([Eq(x, y)])) == hash(Store([Eq(x, y)]))

    def test_add_is_setlike(self):
        s = Store([Eq(x, y)])
        assert s.add(Eq(x, y)) is s
        assert len(s.add(Eq(y, z))) == 2

    def test_printing(self, int_alg):
        assert str(Store()) == "{}"
        assert str(Store([F("y < z", int_alg)])) == "y < z"


class TestDropSubst:
    def test_unbinds(self, int_alg):
        theta = parse_subst("{u/1, x/2}", int_alg)
        assert drop_subst("u", theta) == parse_subst("{x/2}", int_alg)

    def test_other_values_untouched(self, herb):
        theta = make_subst([("x", App("f", (u,)))], herb)
        assert drop_subst("u", theta) == theta

    def test_empty(self):
        assert drop_subst("u", EMPTY_SUBST) == EMPTY_SUBST


class TestDropState:
    def test_no_store_occurrence(self, int_alg):
        sigma = pair((), parse_subst("{u/1}", int_alg))
        assert drop_state("u", sigma) == pair((), EMPTY_SUBST)

    def test_quantifies_store_trace(self, int_alg):
        sigma = Pair(Store([F("u < z", int_alg)]), parse_subst("{u/1}", int_alg))
        out = drop_state("u", sigma)
        expected = Pair(
            Store([Exists("u", And(Eq(u, Val(1)), F("u < z", int_alg)))]), EMPTY_SUBST
        )
        assert out == expected
        # oracle agreement: dropping preserves satisfiability
        b = IntervalBound(-3, 3)
        before = satisfiable(list(sigma.store), sigma.subst, int_alg, b)
        after = satisfiable(list(out.store), out.subst, int_alg, b)
        assert before is True and after is True

    def test_error_passes_through(self):
        assert drop_state("u", ERROR) is ERROR

    def test_value_mentioning_bindings_reexpressed(self, herb):
        sigma = Pair(
            Store([Neq(u, App("a", ()))]),
            make_subst([("x", App("f", (u,)))], herb),
        )
        out = drop_state("u", sigma)
        assert out.subst == EMPTY_SUBST
        (q,) = out.store.items
        assert q == Exists("u", And(Eq(x, App("f", (u,))), Neq(u, App("a", ()))))

    def test_never_mentions_dropped_var(self, int_alg):
        rng = random.Random(5)
        checked = 0
        for _ in range(200):
            sigma = gen_state(rng, int_alg, "literals", ["x", "y"])
            store = sigma.store.add(gen_store_formula(rng, int_alg, "literals", ["x", "y"]))
            sigma = Pair(store, sigma.subst)
            out = drop_state("x", sigma)
            assert all("x" not in free_vars(f) for f in out.store)
            assert "x" not in out.subst.domain()
            checked += 1
        assert checked == 200

    def test_satisfiability_preserved(self, int_alg):
        rng = random.Random(7)
        b = IntervalBound(-3, 3)
        compared = 0
        for _ in range(150):
            sigma = gen_state(rng, int_alg, "literals", ["x", "y"])
            sigma = Pair(
                sigma.store.add(gen_store_formula(rng, int_alg, "literals", ["x", "y"])),
                sigma.subst,
            )
            out = drop_state("x", sigma)
            before = satisfiable(list(sigma.store), sigma.subst, int_alg, b)
            after = satisfiable(list(out.store), out.subst, int_alg, b)
            if before is not None and after is not None:
                assert before == after, f"{sigma} vs {out}"
                compared += 1
        assert compared > 60


class TestClassify:
    def test_bottom_inconsistent(self, int_alg):
        assert classify(pair([BOTTOM], EMPTY_SUBST), int_alg) is Classification.INCONSISTENT

    def test_error_kind(self, int_alg):
        assert classify(ERROR, int_alg) is Classification.ERROR

    def test_open_atom_consistent(self, int_alg):
        sigma = pair([F("x < y", int_alg)], EMPTY_SUBST)
        assert classify(sigma, int_alg) is Classification.CONSISTENT
        assert satisfiable(list(sigma.store), sigma.subst, int_alg, IntervalBound(-3, 3)) is True

    def test_ground_false_literal(self, int_alg):
        assert (
            classify(pair([F("1 = 2", int_alg)], EMPTY_SUBST), int_alg)
            is Classification.INCONSISTENT
        )
        theta = parse_subst("{x/2}", int_alg)
        assert classify(pair([F("x < 1", int_alg)], theta), int_alg) is Classification.INCONSISTENT

    def test_soundness_of_inconsistent_verdicts(self, int_alg):
        rng = random.Random(13)
        refuted = 0
        for _ in range(300):
            sigma = gen_state(rng, int_alg, "literals", ["x", "y"])
            if classify(sigma, int_alg) is Classification.INCONSISTENT:
                verdict = satisfiable(list(sigma.store), sigma.subst, int_alg, IntervalBound(-3, 3))
                assert verdict is not True
                refuted += 1
        # the generator produces few inconsistent stores; just ensure the loop ran
        assert refuted >= 0


class TestConsFilters:
    def test_error_survives_cons_plus(self, int_alg):
        assert cons_plus((ERROR,), int_alg) == (ERROR,)

    def test_error_removed_by_cons(self, int_alg):
        ok = pair((), EMPTY_SUBST)
        assert cons((ERROR, ok), int_alg) == (ok,)

    def test_inconsistent_removed_by_cons_plus(self, int_alg):
        assert cons_plus((pair([BOTTOM], EMPTY_SUBST),), int_alg) == ()
