import random
from fractions import Fraction as F

import pytest

from connsum.errors import (
    DivergentInput,
    NotTransportable,
    NotTransportableStep,
)
from connsum.model import (
    EMPTY_PAIR,
    Pair,
    ZExpr,
    is_convergent,
    swap_components,
    zterm,
)
from connsum.duality import dagger
from connsum.numeric import eval_mpl_auto, eval_zterm
from connsum.serialize import zterm_from_json
from connsum.transport import (
    is_transportable,
    reduce_duality,
    reduce_to_mpl,
    reduce_to_z1,
    transport_step,
    transportable_pick,
)
from connsum.scalars import ONE, sc

ONES1 = Pair.ones((1,))


def zt(comps, bar=None, coef=1):
    return zterm(comps, bar, coef)


def test_step_example_5_3_chain():
    # the non-trivial middle of the zeta(2) transport chain
    start = zt([Pair.ones((2,)), EMPTY_PAIR])
    out = transport_step(start)
    assert out == ZExpr.of([zt([ONES1, ONES1])])
    nxt = transport_step(zt([ONES1, ONES1]))
    assert nxt == ZExpr.of([zt([EMPTY_PAIR, Pair.ones((2,))])])


def test_reduce_example_5_3():
    t = zt([ONES1, ONES1], Pair.ones((1, 1)))
    expected = ZExpr.of([
        zt([Pair.ones((2,))], Pair.ones((1, 1))),
        zt([Pair.ones((3,))], Pair.ones((1,))),
    ])
    assert reduce_to_z1(t) == expected


def test_reduce_example_5_4():
    t = zt([ONES1, ONES1], Pair.ones((2, 1)))
    m1 = sc(-1)
    expected = ZExpr.of([
        zt([Pair.ones((2,))], Pair.ones((2, 1))),
        zt([Pair((2, 1), (ONE, m1))], Pair.ones((2,)), coef=-1),
        zt([Pair((2, 2), (ONE, m1))], Pair.ones((1,)), coef=-1),
    ])
    assert reduce_to_z1(t) == expected


def test_step_example_5_5_shape():
    # arity r+1 all-ones collapses to -r times the arity-r term
    from connsum.model import drop_all_empty_components

    for r in (2, 3):
        recv = Pair((2,), (sc(F(1, 2)),))
        t = zt([ONES1] * r + [recv])
        out = transport_step(t).as_terms()
        merged = ZExpr.of([drop_all_empty_components(u) for u in out]).as_terms()
        assert len(merged) == 1
        u = merged[0]
        assert u.coef == -r and u.arity == r
        v = sc(F(1, 1 - r))
        assert u.components[-1] == Pair((2, 1), (sc(F(1, 2)), v))


def test_step_example_3_3():
    # three components, receiving slot decorated by -1
    eps = Pair((2,), (sc(-1),))
    t = zt([Pair.ones((1, 1)), Pair.ones((2, 1)), eps])
    out = transport_step(t)
    grown = Pair((2, 1), (sc(-1), sc(-1)))
    expected = ZExpr.of([
        zt([Pair.ones((1,)), Pair.ones((2, 1)), grown], coef=-1),
        zt([Pair.ones((1, 1)), Pair.ones((2,)), grown], coef=-1),
    ])
    assert out == expected


def test_step_vertical_bar_pattern():
    # bar peels vertically (t = 0), receiver gains the negated reciprocal
    t = zt([Pair((1,), (sc(F(1, 2)),)), ONES1], Pair.ones((2,)))
    out = transport_step(t).as_terms()
    # v2 = -1/2 appended to the receiver on all surviving branches
    for u in out:
        assert u.components[-1] == Pair((1, 1), (ONE, sc(F(-1, 2))))


def test_step_preconditions():
    with pytest.raises(NotTransportableStep):
        transport_step(zt([ONES1]))
    # received value strictly inside the punctured disk: |1 - 1/v| < 1
    bad = zt([Pair((1,), (sc(F(3, 5), F(4, 5)),)), ONES1])
    with pytest.raises(NotTransportableStep):
        transport_step(bad)
    # empty receiver must not receive an infinity arrow
    with pytest.raises(NotTransportableStep):
        transport_step(zt([ONES1, EMPTY_PAIR]))


def test_weight_measure_decreases():
    random.seed(10)
    pool = [sc(1), sc(-1), sc(F(-1, 2))]
    checked = 0
    while checked < 25:
        n = random.randint(2, 3)
        comps = []
        for _ in range(n):
            k = tuple(random.randint(1, 2) for _ in range(random.randint(1, 2)))
            comps.append(Pair(k, tuple(random.choice(pool) for _ in k)))
        bar = Pair.ones((random.randint(1, 2),))
        t = zt(comps, bar)
        if transportable_pick(t) is None:
            continue
        j = transportable_pick(t)
        t2 = swap_components(t, [x for x in range(n) if x != j] + [j])
        try:
            out = transport_step(t2)
        except NotTransportableStep:
            continue
        for u in out.as_terms():
            assert u.transport_measure() == t2.transport_measure() - 1
        checked += 1


def test_transportable_examples():
    all_ones = zt([Pair.ones((1, 2)), Pair.ones((2,))], Pair.ones((1, 1)))
    assert all(is_transportable(all_ones, j) for j in range(2))
    t = zt([ONES1, ONES1], Pair.ones((1,)))
    assert is_transportable(t, 1)
    # |1 - 1/z| < 1 with the reciprocal sum off-target: rejected
    edge = zt([Pair((1,), (sc(F(3, 5), F(4, 5)),)), ONES1], Pair.ones((1,)))
    assert not is_transportable(edge, 1)


def test_transportable_vertical_closure():
    # a vertical move can face the bar value 1/2 strictly inside the disk:
    # the variable condition alone would accept, the closure must reject
    t = zt([Pair((2,), (sc(-1),)), ONES1], Pair((1,), (sc(F(1, 2)),)))
    assert not is_transportable(t, 1)
    with pytest.raises(NotTransportable):
        reduce_to_z1(t)


def test_reduce_rejects_divergent():
    with pytest.raises(DivergentInput):
        reduce_to_z1(zt([Pair.ones((1, 1))], Pair.ones((1, 1))))


def test_reduce_outputs_convergent_z1():
    random.seed(6)
    pool = [sc(1), sc(-1), sc(F(1, 2)), sc(F(-1, 2))]
    checked = 0
    while checked < 20:
        n = random.randint(2, 3)
        comps = []
        for _ in range(n):
            r = random.randint(1, 2)
            comps.append(Pair(tuple(random.randint(1, 2) for _ in range(r)),
                              tuple(random.choice(pool) for _ in range(r))))
        bk = tuple(random.randint(1, 2) for _ in range(random.randint(1, 2)))
        bar = Pair(bk, tuple(random.choice([sc(1), sc(-1)]) for _ in bk))
        t = zt(comps, bar)
        if transportable_pick(t) is None or not is_convergent(t):
            continue
        out = reduce_to_z1(t)
        for u in out.as_terms():
            assert u.arity == 1
            assert is_convergent(u)
        checked += 1


def test_step_value_preservation_numeric():
    random.seed(3)
    pool = [sc(1), sc(-1), sc(F(1, 2)), sc(F(-1, 2))]
    checked = 0
    while checked < 10:
        n = random.randint(2, 3)
        comps = []
        for _ in range(n):
            r = random.randint(1, 2)
            comps.append(Pair(tuple(random.randint(1, 2) for _ in range(r)),
                              tuple(random.choice(pool) for _ in range(r))))
        bk = tuple(random.randint(1, 2) for _ in range(random.randint(1, 2)))
        bar = Pair(bk, tuple(random.choice([sc(1), sc(-1)]) for _ in bk))
        t = zt(comps, bar)
        j = transportable_pick(t)
        if j is None or not is_convergent(t):
            continue
        t2 = swap_components(t, [x for x in range(n) if x != j] + [j])
        step = transport_step(t2)
        lhs = eval_zterm(t2, 150, tol=1.0)
        rv, rtail = 0j, 0.0
        for u in step.as_terms():
            rep = eval_zterm(u.with_coef(F(1)), 150, tol=1.0)
            rv += complex(float(u.coef)) * rep.value
            rtail += rep.tail_estimate
        assert abs(lhs.value - rv) <= 1e-6 + lhs.tail_estimate + rtail
        checked += 1


def test_full_reduction_value_preservation():
    random.seed(8)
    pool = [sc(1), sc(-1), sc(F(1, 2)), sc(F(-1, 2))]
    checked = 0
    while checked < 6:
        n = random.randint(2, 3)
        comps = []
        for _ in range(n):
            r = random.randint(1, 2)
            comps.append(Pair(tuple(random.randint(1, 2) for _ in range(r)),
                              tuple(random.choice(pool) for _ in range(r))))
        bar = Pair.ones((random.randint(1, 2),))
        t = zt(comps, bar)
        if transportable_pick(t) is None or not is_convergent(t):
            continue
        mpl = reduce_to_mpl(t)
        lhs = eval_zterm(t, 200, tol=1.0)
        rv, rtail = 0j, 0.0
        for c, term in mpl.terms:
            v, e = eval_mpl_auto(term, 1e-8)
            rv += complex(float(c)) * v
            rtail += abs(float(c)) * e
        assert abs(lhs.value - rv) <= 1e-6 + lhs.tail_estimate + rtail
        checked += 1


def test_reduce_duality_matches_dagger():
    random.seed(12)
    pool = [sc(1), sc(-1), sc(F(1, 2)), sc(F(-1, 2)), sc(F(1, 3)),
            sc(0, 1), sc(F(-3, 5), F(4, 5)), sc(F(1, 3), F(-1, 3))]
    checked = 0
    while checked < 100:
        r = random.randint(0, 4)
        p = Pair(tuple(random.randint(1, 3) for _ in range(r)),
                 tuple(random.choice(pool) for _ in range(r)))
        from connsum.duality import dual_condition

        if not dual_condition(p):
            continue
        assert reduce_duality(p) == dagger(p)
        checked += 1


def test_trace_replay():
    trace = []
    t = zt([ONES1, ONES1], Pair.ones((2, 1)))
    reduce_to_z1(t, trace=trace)
    assert trace
    for record in trace:
        premise = zterm_from_json(record["premise"])
        if record["rule"] == "transport-step":
            got = transport_step(premise)
            expect = ZExpr.of([zterm_from_json(c) for c in record["conclusions"]])
            assert got == expect
        elif record["rule"] == "drop-empty":
            from connsum.model import drop_all_empty_components

            got = drop_all_empty_components(premise)
            assert got == zterm_from_json(record["conclusions"][0])


def test_step_sign_table_arity2():
    """The four horizontal/vertical patterns of the arity-2 rewrite."""
    half = sc(F(-1, 2))
    base1 = Pair((2,), (half,))
    p2 = Pair((1,), (sc(F(1, 3)),))
    bar_base = Pair((2,), (ONE,))

    # (1) horizontal component, horizontal bar: v2 = 1/(t - 1/v1)
    p1 = Pair((2, 1), (half, sc(-1)))          # base1 with arrow v1 = -1
    bar = Pair((2, 1), (ONE, ONE))             # bar_base with arrow t = 1
    v2 = (sc(1) - sc(-1).inv()).inv()          # = 1/2
    grown = Pair((1, 1), (sc(F(1, 3)), v2))
    out = transport_step(zterm([p1, p2], bar))
    assert out == ZExpr.of([
        zterm([base1, grown], bar, coef=-1),
        zterm([p1, grown], bar_base, coef=-1),
    ])

    # (2) vertical component, horizontal bar: v2 = 1/t, signs flip once
    p1v = Pair((3,), (half,))                  # base1 with the vertical arrow
    grown = Pair((1, 1), (sc(F(1, 3)), ONE))   # arrow by 1/t = 1
    out = transport_step(zterm([p1v, p2], bar))
    assert out == ZExpr.of([
        zterm([base1, grown], bar, coef=1),
        zterm([p1v, grown], bar_base, coef=-1),
    ])

    # (3) horizontal component, vertical bar: v2 = -v1
    barv = Pair((3,), (ONE,))                  # bar_base with the vertical arrow
    grown = Pair((1, 1), (sc(F(1, 3)), sc(1)))
    out = transport_step(zterm([p1, p2], barv))
    assert out == ZExpr.of([
        zterm([base1, grown], barv, coef=-1),
        zterm([p1, grown], bar_base, coef=-1),
    ])

    # (4) vertical component, vertical bar: the receiver moves vertically too
    grown = Pair((2,), (sc(F(1, 3)),))
    out = transport_step(zterm([p1v, p2], barv))
    assert out == ZExpr.of([
        zterm([base1, grown], barv, coef=-1),
        zterm([p1v, grown], bar_base, coef=1),
    ])
