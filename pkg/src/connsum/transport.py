"""The rewrite engine: one transport rewrite, and full reduction to arity 1.

A rewrite peels the first n-1 components and the bar simultaneously, solves
the reciprocal constraint for the value received by the last slot, and emits
the n right-hand terms: the move is legal exactly when the received value is
again a nonzero disk point or infinity, plus four boundary bullets guarding
empty slots and unit-circle targets.  Each emitted term's weight outside the
receiving slot is one less than the input's, so reduction terminates.
"""
from __future__ import annotations

import itertools
from typing import Optional

from . import serialize
from .duality import dual_condition
from .errors import (
    DivergentInput,
    DualConditionViolated,
    NotTransportable,
    NotTransportableStep,
    StepPreconditionFailed,
)
from .model import (
    EMPTY_PAIR,
    Pair,
    ZExpr,
    ZTerm,
    arrow,
    drop_all_empty_components,
    is_convergent,
    peel,
    swap_components,
    zterm,
)
from .scalars import INF, ZERO, Scalar, in_reciprocal_ball, reciprocal_sum

Trace = list


def _record(trace: Optional[Trace], rule: str, premise: ZTerm, conclusions) -> None:
    if trace is None:
        return
    trace.append({
        "rule": rule,
        "premise": serialize.zterm_to_json(premise),
        "conclusions": [serialize.zterm_to_json(c) for c in conclusions],
    })


def transport_step(t: ZTerm, trace: Optional[Trace] = None) -> ZExpr:
    """Apply one transport rewrite to a term of arity >= 2.

    Components 1..n-1 and the bar must all be peelable; the receiving slot is
    the last component.  Raises NotTransportableStep naming the violated
    precondition.
    """
    n = t.arity
    if n < 2:
        raise NotTransportableStep("transport needs arity >= 2")
    peels = [peel(p, "component") for p in t.components[:-1]]
    bar_t, bar_base, _ = peel(t.bar, "bar")
    recv = t.components[-1]

    inv_recv_v = bar_t - reciprocal_sum(v for v, _, _ in peels)
    if inv_recv_v.is_zero():
        recv_v: Scalar = INF
    elif inv_recv_v.abs_sq() >= 1:
        recv_v = inv_recv_v.inv()
    else:
        raise NotTransportableStep(
            f"received value 1/v = {inv_recv_v} is neither 0 nor of modulus >= 1"
        )

    for v_i, base_i, _ in peels:
        if base_i.is_empty() and v_i.is_inf:
            raise NotTransportableStep("emptied slot cannot carry an infinity arrow")
    if recv.is_empty() and recv_v.is_inf:
        raise NotTransportableStep(
            "receiving slot is empty and the reciprocal sum equals the bar value"
        )
    if n == 2 and not bar_t.is_inf and bar_t.abs_eq_one():
        v1 = peels[0][0]
        if peels[0][1].is_empty() and (bar_t - v1.inv()).abs_eq_one():
            raise NotTransportableStep(
                "emptying slot with |bar value| = 1 needs |t - 1/v| != 1"
            )
        if recv.is_empty() and v1.abs_eq_one():
            raise NotTransportableStep(
                "empty receiving slot with |bar value| = 1 needs |v| != 1"
            )

    recv_sign, recv_new = arrow(recv, recv_v)
    out: list[ZTerm] = []
    for i, (_, base_i, s_i) in enumerate(peels):
        comps = list(t.components[:-1])
        comps[i] = base_i
        comps.append(recv_new)
        out.append(ZTerm(-t.coef * s_i * recv_sign, tuple(comps), t.bar))
    out.append(ZTerm(-t.coef * recv_sign, t.components[:-1] + (recv_new,), bar_base))
    _record(trace, "transport-step", t, out)
    return ZExpr.of(out)


def _bar_targets(t: ZTerm) -> list[Scalar]:
    """Bar values a rewrite chain can aim at: each w_k, plus 0 when some bar
    exponent exceeds 1 (vertical bar moves exist)."""
    targets = list(t.bar.z)
    if any(e >= 2 for e in t.bar.k):
        targets.append(ZERO)
    return targets


def is_transportable(t: ZTerm, j: int) -> bool:
    """Whether receiving slot j guarantees every rewrite along the reduction.

    Checks the variable condition (every coordinate pick from every non-empty
    subset of the other components lies in the reciprocal ball at every bar
    target) and the unit-circle first-variable condition, plus the closure
    needed when some non-receiving component can present a vertical move
    against a bar value strictly inside the punctured disk.
    """
    t = drop_all_empty_components(t)
    if t.is_structurally_zero():
        return True
    n = t.arity
    if not 0 <= j < n:
        return False
    if n == 1:
        return True
    others = [i for i in range(n) if i != j]
    targets = _bar_targets(t)

    for size in range(1, len(others) + 1):
        for subset in itertools.combinations(others, size):
            picks = [range(t.components[i].dep) for i in subset]
            for combo in itertools.product(*picks):
                vs = [t.components[i].z[a] for i, a in zip(subset, combo)]
                for tau in targets:
                    if not in_reciprocal_ball(vs, tau):
                        return False
    for w in t.bar.z:
        if w.abs_eq_one():
            for i in others:
                first = t.components[i].z[0]
                if (w - first.inv()).abs_eq_one():
                    return False
    if any(any(e >= 2 for e in t.components[i].k) for i in others):
        for tau in t.bar.z:
            if not (tau.is_zero() or tau.abs_eq_one()):
                return False
    return True


def transportable_pick(t: ZTerm) -> Optional[int]:
    """First receiving slot (tried last to first) passing the condition."""
    t = drop_all_empty_components(t)
    for j in range(t.arity - 1, -1, -1):
        if is_transportable(t, j):
            return j
    return None


def reduce_to_z1(t: ZTerm, j: Optional[int] = None, trace: Optional[Trace] = None) -> ZExpr:
    """Rewrite a transportable term into a combination of arity-1 terms.

    The chosen receiving slot is swapped to the last position, then rewrites
    run until every branch reaches arity 1; emptied components and
    structurally-zero terms are dropped along the way.
    """
    t0 = t
    t = drop_all_empty_components(t)
    if t.is_structurally_zero():
        return ZExpr.of([])
    if not is_convergent(t):
        raise DivergentInput(f"{t} does not converge absolutely")
    if t.arity >= 2:
        if j is None:
            j = transportable_pick(t)
            if j is None:
                raise NotTransportable(f"no receiving slot qualifies for {t0}")
        elif not is_transportable(t, j):
            raise NotTransportable(f"receiving slot {j} does not qualify for {t0}")
        if j != t.arity - 1:
            perm = [i for i in range(t.arity) if i != j] + [j]
            t = swap_components(t, perm)
            _record(trace, "swap-components", t0, [t])

    out: list[ZTerm] = []
    active = ZExpr.of([t]).as_terms()
    while active:
        batch: list[ZTerm] = []
        for u in active:
            v = drop_all_empty_components(u)
            if v is not u:
                _record(trace, "drop-empty", u, [v])
            u = v
            if u.is_structurally_zero():
                continue
            if u.arity == 1:
                out.append(u)
                continue
            try:
                step = transport_step(u, trace)
            except NotTransportableStep as exc:
                raise StepPreconditionFailed(
                    f"rewrite failed after transportability was confirmed: {u}: {exc}"
                ) from exc
            batch.extend(step.as_terms())
        # coalescing structurally equal branches between generations keeps
        # symmetric inputs polynomial instead of exponential
        active = ZExpr.of(batch).as_terms()
    return ZExpr.of(out)


def reduce_to_mpl(t: ZTerm, j: Optional[int] = None, trace: Optional[Trace] = None):
    """Full pipeline: reduce to arity 1, then expand every term into
    shuffle-type polylogarithms."""
    from .boundary import boundary_reduce
    from .model import MplExpr

    items = []
    for term in reduce_to_z1(t, j=j, trace=trace).as_terms():
        items.extend(boundary_reduce(term).terms)
    return MplExpr.of(items)


def reduce_duality(p: Pair) -> tuple[int, Pair]:
    """Transport a dual-condition pair across an arity-2 sum with empty mate.

    Returns the accumulated sign and the pair collected in the receiving
    slot; must agree with the explicit dagger.
    """
    if not dual_condition(p):
        raise DualConditionViolated(f"{p} fails the dual condition")
    term = zterm([p, EMPTY_PAIR])
    while not term.components[0].is_empty():
        surviving = transport_step(term).as_terms()
        if len(surviving) != 1:
            raise StepPreconditionFailed(
                f"duality chain expected one surviving term, got {len(surviving)}"
            )
        term = surviving[0]
    sign = 1 if term.coef > 0 else -1
    if abs(term.coef) != 1:
        raise StepPreconditionFailed(f"duality chain coefficient {term.coef} not a sign")
    return sign, term.components[1]
