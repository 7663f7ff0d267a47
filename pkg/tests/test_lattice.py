import itertools
import random

import pytest

from descend.domains import make_domain
from descend.domains.interval import BOTTOM, INF, Interval, IntervalDomain
from descend.domains.parity import ParityDomain
from descend.lattice import (
    GlbNarrowing,
    NativeNarrowing,
    check_narrowing_axioms,
    check_widening_axioms,
    narrowing_for,
    stabilizes,
)

ITV = IntervalDomain()
I = Interval.of


def test_interval_widening_example_has_no_violation():
    assert check_widening_axioms(ITV, [(I(0, 0), I(0, 2))]) == []
    assert ITV.widen(I(0, 0), I(0, 2)) == I(0, INF)


@pytest.mark.parametrize("domain_id", ["par", "itv", "box", "iset", "bset"])
def test_bottom_pair_has_no_violation(domain_id):
    variables = ("x",) if domain_id in ("itv", "iset") else ("x", "y")
    d = make_domain(domain_id, variables)
    pairs = [(d.bottom(), d.bottom())]
    assert check_narrowing_axioms(d, pairs) == []
    if d.has_widening:
        assert check_widening_axioms(d, pairs) == []


def test_random_interval_pairs_satisfy_widening():
    rng = random.Random(1)
    pairs = [(ITV.sample(rng), ITV.sample(rng)) for _ in range(1000)]
    assert check_widening_axioms(ITV, pairs) == []


def test_narrowing_example_lies_between():
    a, b = I(0, INF), I(0, 99)
    assert check_narrowing_axioms(ITV, [(a, b)]) == []
    assert ITV.narrow(a, b) == I(0, 99)


def test_narrowing_of_equal_arguments_is_identity():
    a = I(-3, 7)
    assert check_narrowing_axioms(ITV, [(a, a)]) == []
    assert ITV.narrow(a, a) == a


def test_random_box_pairs_satisfy_narrowing():
    rng = random.Random(2)
    box = make_domain("box", ("x", "y", "z"))
    pairs = [(box.sample(rng), box.sample(rng)) for _ in range(1000)]
    assert check_narrowing_axioms(box, pairs) == []


def test_checkers_report_a_broken_operator():
    class Shrinking(IntervalDomain):
        def widen(self, a, b):
            return a

    violations = check_widening_axioms(Shrinking(), [(I(0, 0), I(0, 2))])
    assert [v.reason for v in violations] == ["second argument not below widening"]


def test_widening_stabilizes_an_increasing_interval_chain():
    chain = (I(0, n) for n in itertools.count())
    assert stabilizes(ITV, "widen", chain, max_steps=2)


def test_constant_chain_stabilizes_in_one_step():
    assert stabilizes(ITV, "widen", [I(1, 2)] * 2, max_steps=1)
    assert stabilizes(ITV, "narrow", [I(1, 2)] * 2, max_steps=1)


def test_glb_narrowing_stops_an_infinite_descending_powerset_chain():
    iset = make_domain("iset", ("x",))

    def chain():
        return (frozenset([iset.base.make([I(0, 1000 - n)])]) for n in itertools.count())

    assert stabilizes(iset, "narrow", chain(), max_steps=4, narrowing=GlbNarrowing(iset, 3))
    assert not stabilizes(iset, "narrow", chain(), max_steps=64, narrowing=GlbNarrowing(iset, 100))


def test_lub_alone_does_not_stabilize_an_unbounded_chain():
    par_like_lub = IntervalDomain()
    par_like_lub.widen = par_like_lub.lub
    assert not stabilizes(par_like_lub, "widen", (I(0, n) for n in itertools.count()))


def test_glb_narrowing_freezes_after_threshold():
    nar = GlbNarrowing(ITV, 2)
    x = I(0, 100)
    assert nar.narrow(x, I(0, 90), key=1) == I(0, 90)
    assert nar.narrow(I(0, 90), I(0, 80), key=1) == I(0, 80)
    assert nar.narrow(I(0, 80), I(0, 70), key=1) == I(0, 80)
    # budgets are per key
    assert nar.narrow(x, I(0, 5), key=2) == I(0, 5)
    nar.reset()
    assert nar.narrow(I(0, 80), I(0, 70), key=1) == I(0, 70)


def test_glb_narrowing_never_decreases_more_than_k_times():
    rng = random.Random(3)
    for k in range(5):
        nar = GlbNarrowing(ITV, k)
        x, strict = I(-1000, 1000), 0
        for _ in range(20):
            b = I(x.lo + rng.randint(0, 5), x.hi - rng.randint(0, 5))
            nxt = nar.narrow(x, b)
            strict += not ITV.equal(nxt, x)
            x = nxt
        assert strict <= k


def test_glb_narrowing_rejects_negative_threshold():
    with pytest.raises(ValueError):
        GlbNarrowing(ITV, -1)


def test_narrowing_selection():
    assert isinstance(narrowing_for(ITV, 3), NativeNarrowing)
    assert isinstance(narrowing_for(ITV, 3, force_glb=True), GlbNarrowing)
    assert isinstance(narrowing_for(make_domain("bset", ("x",)), 3), GlbNarrowing)
    assert isinstance(narrowing_for(ParityDomain(), 3), GlbNarrowing)


def _domains():
    yield make_domain("par", ("x", "y"))
    yield ITV
    yield make_domain("box", ("x", "y"))
    yield make_domain("iset", ("x",))
    yield make_domain("bset", ("x", "y"))


@pytest.mark.parametrize("d", list(_domains()), ids=lambda d: d.name)
def test_lattice_laws_on_samples(d):
    rng = random.Random(4)
    vals = [d.sample(rng) for _ in range(40)] + [d.bottom(), d.top()]
    for a in vals:
        assert d.leq(a, a)
        assert d.leq(d.bottom(), a) and d.leq(a, d.top())
        assert d.equal(d.lub(a, d.bottom()), a)
        assert d.equal(d.glb(a, d.top()), a)
    for a, b in itertools.product(vals[:20], repeat=2):
        j, m = d.lub(a, b), d.glb(a, b)
        assert d.leq(a, j) and d.leq(b, j)
        assert d.leq(m, a) and d.leq(m, b)
        assert d.equal(j, d.lub(b, a)) and d.equal(m, d.glb(b, a))
        if d.leq(a, b) and d.leq(b, a):
            assert d.equal(a, b)
    for a, b, c in itertools.islice(itertools.product(vals[:12], repeat=3), 800):
        assert d.equal(d.lub(d.lub(a, b), c), d.lub(a, d.lub(b, c)))
        assert d.equal(d.glb(d.glb(a, b), c), d.glb(a, d.glb(b, c)))
        if d.leq(a, b) and d.leq(b, c):
            assert d.leq(a, c)


def test_bottom_interval_is_unique():
    assert Interval.of(5, 4) == BOTTOM
    assert ITV.is_bottom(BOTTOM) and not ITV.is_bottom(I(0, 0))
