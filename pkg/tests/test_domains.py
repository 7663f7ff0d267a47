import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descend.domains import (
    BOTTOM,
    INF,
    TOP,
    DomainError,
    Interval,
    IntervalDomain,
    Parity,
    ParityDomain,
    PowersetDomain,
    itv_add,
    itv_narrow,
    itv_widen,
    make_domain,
    par_add,
    pset_glb,
    pset_leq,
    pset_lub,
    pset_normalize,
    pset_transfer,
)
from descend.domains import interval as itv
from descend.domains import parity as par
from descend.frontend.ast import BinOp, Compare, Neg, Num, Var
from descend.frontend.cfg import AssignT, AssumeT, HavocT
from descend.lattice import check_narrowing_axioms, check_widening_axioms
from descend.oracle import holds

I = Interval.of
ITV = IntervalDomain()
EVEN, ODD = Parity.EVEN, Parity.ODD


def x_(op, n):
    return Compare(op, Var("x"), Num(n))


# -- parity ----------------------------------------------------------------


def _gamma_par(p, universe):
    return {n for n in universe if ParityDomain().contains(p, n)}


def test_parity_examples():
    assert par_add(EVEN, EVEN) is EVEN
    assert par_add(Parity.BOT, ODD) is Parity.BOT
    assert par_add(EVEN, ODD) is ODD
    assert par.lub(EVEN, ODD) is Parity.TOP
    assert par.glb(EVEN, ODD) is Parity.BOT
    assert not par.leq(EVEN, ODD) and not par.leq(ODD, EVEN)


@pytest.mark.parametrize("op, concrete", [(par.add, lambda a, b: a + b), (par.mul, lambda a, b: a * b)])
def test_parity_tables_are_exact_against_brute_force(op, concrete):
    universe = range(-9, 10)
    for a, b in itertools.product(Parity, repeat=2):
        out = {concrete(m, n) for m in _gamma_par(a, universe) for n in _gamma_par(b, universe)}
        # the smallest parity holding every result
        best = Parity.BOT
        for n in out:
            best = par.lub(best, Parity.of(n))
        assert op(a, b) is best, (a, b)


def test_parity_environment_assignment():
    d = make_domain("par", ("x",))
    e = d.assign(d.top(), "x", Num(0))
    assert d.render(e) == "even"
    e = d.assign(e, "x", BinOp("+", Var("x"), Num(3)))
    assert d.render(e) == "odd"
    assert d.assume(e, x_("<", 5)) == e


# -- intervals -------------------------------------------------------------


def test_interval_operations_match_closed_forms():
    assert itv_widen(I(0, 0), I(0, 2)) == I(0, INF)
    assert itv_widen(BOTTOM, I(1, 2)) == I(1, 2)
    assert itv_widen(I(1, 2), BOTTOM) == I(1, 2)
    assert itv_widen(I(0, 10), I(0, 5)) == I(0, 10)
    assert itv_widen(I(0, 10), I(-1, 5)) == I(-INF, 10)
    assert itv_narrow(I(0, INF), I(0, 99)) == I(0, 99)
    assert itv_narrow(BOTTOM, I(5, 7)) == BOTTOM
    assert itv_narrow(I(5, 7), BOTTOM) == BOTTOM
    assert itv_narrow(TOP, I(3, 4)) == I(3, 4)
    assert itv_narrow(I(0, 10), I(3, 4)) == I(0, 10)
    assert itv_add(I(0, 49), I(2, 2)) == I(2, 51)
    assert itv_add(I(50, 99), I(10, 10)) == I(60, 109)
    assert itv_add(BOTTOM, I(1, 1)) == BOTTOM
    assert itv_add(I(0, INF), I(-INF, 3)) == TOP


def test_interval_rendering():
    assert [ITV.render(v) for v in (BOTTOM, TOP, I(0, INF), I(-3, 4))] == ["bot", "[-inf,+inf]", "[0,+inf]", "[-3,4]"]


def test_intervals_use_arbitrary_precision():
    big = 10**30
    assert itv_add(I(big, big), I(big, big)) == I(2 * big, 2 * big)


def _gamma_itv(a, bound=50):
    return [n for n in range(-bound, bound + 1) if n in a]


SMALL = [BOTTOM, TOP, I(0, 0), I(-3, 4), I(-50, -10), I(7, 50), I(0, INF), I(-INF, -2), I(-1, 1)]


@pytest.mark.parametrize("op, concrete", [
    (itv.add, lambda a, b: a + b),
    (itv.sub, lambda a, b: a - b),
    (itv.mul, lambda a, b: a * b),
])
def test_interval_arithmetic_is_sound_exhaustively(op, concrete):
    for a, b in itertools.product(SMALL, repeat=2):
        r = op(a, b)
        for m in _gamma_itv(a):
            for n in _gamma_itv(b):
                assert concrete(m, n) in r, (a, b, m, n)


def test_interval_addition_is_exact():
    for a, b in itertools.product(SMALL, repeat=2):
        if a.is_bottom or b.is_bottom:
            continue
        sums = {m + n for m in _gamma_itv(a, 100) for n in _gamma_itv(b, 100)}
        r = itv.add(a, b)
        if r.lo != -INF:
            assert r.lo in sums
        if r.hi != INF:
            assert r.hi in sums


# -- boxes -----------------------------------------------------------------


@pytest.fixture
def box():
    return make_domain("box", ("F", "K", "P"))


def test_box_assignment_examples(box):
    one = make_domain("box", ("x",))
    e = one.assign(one.make([I(0, 0)]), "x", BinOp("+", Var("x"), Num(2)))
    assert e == one.make([I(2, 2)])
    assert one.assign(one.bottom(), "x", Num(1)) == one.bottom()
    env = box.make({"P": I(0, 0), "F": I(1, 1), "K": I(2, 2)})
    out = box.assign(env, "K", BinOp("+", Var("K"), Num(1)))
    assert out == box.make({"P": I(0, 0), "F": I(1, 1), "K": I(3, 3)})


def test_box_smashes_bottom(box):
    assert box.make({"P": BOTTOM}) == box.bottom()
    a = box.make({"K": I(0, 1)})
    b = box.make({"K": I(5, 6)})
    assert box.glb(a, b) == box.bottom()


def test_box_rendering(box):
    env = box.make({"P": I(0, INF), "F": I(1, 1), "K": I(2, 6)})
    assert box.render(env) == "F in [1,1], K in [2,6], P in [0,+inf]"
    assert box.render(box.bottom()) == "bot"


@pytest.mark.parametrize("start, cond, expected", [
    (I(0, INF), x_("<", 100), I(0, 99)),
    (I(0, 49), x_("<", 50), I(0, 49)),
    (I(0, INF), x_(">=", 100), I(100, INF)),
    (I(0, 10), x_("==", 4), I(4, 4)),
    (I(0, 10), x_("!=", 0), I(1, 10)),
    (I(0, 10), x_("!=", 10), I(0, 9)),
    (I(0, 10), x_("!=", 5), I(0, 10)),
    (I(0, 10), x_(">", 10), BOTTOM),
    (I(0, 10), Compare("<", Num(3), Var("x")), I(4, 10)),
    (I(0, 10), Compare("<", BinOp("+", Var("x"), Num(5)), Num(8)), I(0, 2)),
    (I(0, 10), Compare("<=", Neg(Var("x")), Num(-4)), I(4, 10)),
])
def test_box_assume_examples(start, cond, expected):
    d = make_domain("box", ("x",))
    out = d.assume(d.make([start]), cond)
    assert out == d.make([expected])


def test_box_assume_refines_both_sides():
    d = make_domain("box", ("x", "y"))
    env = d.make({"x": I(0, 10), "y": I(5, 20)})
    out = d.assume(env, Compare("<", Var("y"), Var("x")))
    assert out == d.make({"x": I(6, 10), "y": I(5, 9)})


ATOMS = [Var("x"), Var("y"), Num(-2), Num(0), Num(3)]


def _exprs():
    yield from ATOMS
    for a, b in itertools.product(ATOMS, repeat=2):
        for op in "+-*":
            yield BinOp(op, a, b)
    yield Neg(Var("x"))


def test_box_assume_never_gains_and_never_loses_states():
    d = make_domain("box", ("x", "y"))
    rng = random.Random(5)
    exprs = list(_exprs())
    for _ in range(400):
        env = d.make([I(*sorted((rng.randint(-6, 6), rng.randint(-6, 6)))) for _ in range(2)])
        cond = Compare(rng.choice(["<", "<=", ">", ">=", "==", "!="]), rng.choice(exprs), rng.choice(exprs))
        out = d.assume(env, cond)
        assert d.leq(out, env)
        for x, y in itertools.product(_gamma_itv(env["x"]), _gamma_itv(env["y"])):
            if holds(cond, {"x": x, "y": y}):
                assert d.covers(out, (x, y), 50), (env, cond, x, y)


def test_box_havoc_forgets_one_variable(box):
    env = box.make({"P": I(0, 0), "F": I(1, 1), "K": I(2, 2)})
    out = box.transfer(HavocT("K"), env)
    assert out == box.make({"P": I(0, 0), "F": I(1, 1), "K": TOP})


def test_box_covers():
    d = make_domain("box", ("x", "y"))
    env = d.make({"x": I(0, 5), "y": TOP})
    assert d.covers(env, (3, None), 128)
    assert not d.covers(env, (None, 0), 128)
    assert not d.covers(env, (6, 0), 128)
    assert not d.covers(d.bottom(), (0, 0), 128)


@pytest.mark.parametrize("domain_id", ["par", "itv", "box"])
def test_axioms_on_random_pairs(domain_id):
    rng = random.Random(6)
    variables = ("x",) if domain_id == "itv" else ("x", "y")
    d = make_domain(domain_id, variables)
    pairs = [(d.sample(rng), d.sample(rng)) for _ in range(1000)]
    assert check_widening_axioms(d, pairs) == []
    assert check_narrowing_axioms(d, pairs) == []


def test_unknown_or_misfit_domains_are_rejected():
    with pytest.raises(DomainError, match="unknown domain"):
        make_domain("oct", ("x",))
    with pytest.raises(DomainError, match="exactly one variable"):
        make_domain("itv", ("x", "y"))


# -- powersets -------------------------------------------------------------


def test_pset_examples():
    assert pset_normalize({BOTTOM, I(0, 0), I(0, 2)}) == {I(0, 2)}
    assert pset_normalize({I(0, 0), I(2, 49)}) == {I(0, 0), I(2, 49)}
    assert pset_normalize([I(1, 3), I(1, 3)]) == {I(1, 3)}
    assert pset_lub(frozenset([I(0, 0)]), frozenset([I(2, 49)])) == {I(0, 0), I(2, 49)}
    s = frozenset([I(4, 7)])
    assert pset_lub(frozenset(), s) == s
    assert pset_lub(frozenset([I(0, 5)]), frozenset([I(2, 3)])) == {I(0, 5)}
    assert pset_leq(frozenset([I(0, 0), I(2, 49)]), frozenset([I(0, 49)]))
    assert not pset_leq(frozenset([I(0, 49)]), frozenset([I(0, 0), I(2, 49)]))
    assert pset_glb(frozenset([I(0, 10)]), frozenset([I(5, 20)])) == {I(5, 10)}


def test_pset_transfer_is_per_disjunct():
    bset = make_domain("bset", ("F", "K", "P"))
    box = bset.base
    s = bset.singleton(box.make({"K": I(2, INF)}))
    out = pset_transfer(s, AssumeT(Compare("<", Var("K"), Num(7))), bset)
    assert out == {box.make({"K": I(2, 6)})}
    two = frozenset([box.make({"K": I(0, 0)}), box.make({"K": I(5, 9)})])
    out = pset_transfer(two, AssignT("K", BinOp("+", Var("K"), Num(1))), bset)
    assert bset.render(out) == "{F in [-inf,+inf], K in [1,1], P in [-inf,+inf]; F in [-inf,+inf], K in [6,10], P in [-inf,+inf]}"
    assert pset_transfer(two, AssumeT(Compare(">", Var("K"), Num(20))), bset) == frozenset()


def test_pset_rendering_orders_elements_numerically():
    iset = make_domain("iset", ("x",))
    s = iset.normalize(iset.base.make([v]) for v in (I(70, 109), I(4, 51), I(0, 0), I(60, 61), I(2, 2)))
    assert iset.render(s) == "{[0,0]; [2,2]; [4,51]; [60,61]; [70,109]}"
    assert iset.render(iset.bottom()) == "{}"


def test_pset_max_disjuncts_collapses_to_hull():
    iset = make_domain("iset", ("x",), max_disjuncts=2)
    s = iset.normalize(iset.base.make([v]) for v in (I(0, 0), I(2, 2), I(4, 5)))
    assert iset.render(s) == "{[0,5]}"


small_intervals = st.builds(
    lambda a, b: I(min(a, b), max(a, b)), st.integers(-6, 6), st.integers(-6, 6)
) | st.just(BOTTOM)
small_sets = st.lists(small_intervals, max_size=4).map(pset_normalize)


@settings(max_examples=300, deadline=None)
@given(st.lists(small_intervals, max_size=5))
def test_normalize_is_idempotent_and_order_preserving(raw):
    s = pset_normalize(raw)
    assert pset_normalize(s) == s
    assert pset_leq(s, frozenset(raw)) and pset_leq(frozenset(a for a in raw if not a.is_bottom), s)
    for a in s:
        assert not a.is_bottom
        assert not any(b != a and itv.leq(a, b) for b in s)


@settings(max_examples=300, deadline=None)
@given(small_sets, small_sets, small_sets)
def test_pset_lub_is_least(s1, s2, u):
    j = pset_lub(s1, s2)
    assert pset_leq(s1, j) and pset_leq(s2, j)
    if pset_leq(s1, u) and pset_leq(s2, u):
        assert pset_leq(j, u)


@settings(max_examples=300, deadline=None)
@given(small_sets, small_sets)
def test_pset_glb_is_exact_on_points(s1, s2):
    def points(s):
        return {n for a in s for n in range(-6, 7) if n in a}

    assert points(pset_glb(s1, s2)) == points(s1) & points(s2)


@given(small_intervals, small_intervals)
def test_singleton_powerset_behaves_like_base(a, b):
    assert pset_leq(pset_normalize([a]), pset_normalize([b])) == itv.leq(a, b)


def test_powerset_has_no_widening():
    iset = PowersetDomain(ITV)
    assert not iset.has_widening and not iset.has_narrowing
    with pytest.raises(NotImplementedError):
        iset.widen(frozenset(), frozenset())


@pytest.mark.parametrize("domain_id", ["iset", "bset"])
def test_powerset_narrowing_axiom_on_random_pairs(domain_id):
    rng = random.Random(8)
    d = make_domain(domain_id, ("x",) if domain_id == "iset" else ("x", "y"))
    pairs = [(d.sample(rng), d.sample(rng)) for _ in range(1000)]
    assert check_narrowing_axioms(d, pairs) == []


def test_powerset_covers_matches_brute_force():
    bset = make_domain("bset", ("x", "y"))
    rng = random.Random(9)
    bound = 4
    for _ in range(300):
        s = bset.normalize(
            bset.base.make([I(*sorted((rng.randint(-5, 5), rng.randint(-5, 5)))) for _ in range(2)])
            for _ in range(rng.randint(0, 4))
        )
        inside = {(x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)
                  if any(x in a["x"] and y in a["y"] for a in s)}
        full = range(-bound, bound + 1)
        for x in full:
            assert bset.covers(s, (x, None), bound) == all((x, y) in inside for y in full)
            for y in full:
                assert bset.covers(s, (x, y), bound) == ((x, y) in inside)
        assert bset.covers(s, (None, None), bound) == (len(inside) == len(full) ** 2)
