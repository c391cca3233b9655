"""Truncated numerical evaluation, exact partial-sum oracles, and verification.

Connected sums are summed by dynamic programming over per-component top
values (each capped at the bound), combined through a connector-normalized
convolution so no factorial ever overflows, and closed with the bar-chain
weight.  For components whose outermost letter is (1, k) over an all-ones
bar, the single-escape rows beyond the cap admit closed-form or windowed
tail sums built from exact factorial telescoping; those corrections are
folded into the value and their residuals into the tail estimate.  All other
tail estimates are heuristic and reported as such.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.signal import lfilter
from scipy.special import digamma, gammaln
from scipy.special import zeta as hurwitz_zeta

from .boundary import harmonic_to_shuffle
from .errors import DivergentInput, HypothesisViolated, NotConverged
from .model import (
    MplTerm,
    Pair,
    ZExpr,
    ZTerm,
    drop_all_empty_components,
    is_convergent,
)
from .records import EvalReport, Relation, VerifyReport
from .scalars import ONE, Scalar, reciprocal_sum, sc

_KERNEL_WINDOW = 20_000  # escape-row window before the telescoped remainder


def connector(a: Sequence[int]) -> Fraction:
    """Inverse multinomial weight a_1! ... a_n! / (a_1 + ... + a_n)!."""
    total = sum(a)
    num = 1
    for x in a:
        num *= math.factorial(x)
    return Fraction(num, math.factorial(total))


def connector_log(a: Sequence[int]) -> float:
    """log of the connector, safe for arguments far beyond factorial range."""
    return float(sum(gammaln(x + 1) for x in a) - gammaln(sum(a) + 1))


def _glf(x):
    """log(x!) elementwise."""
    return gammaln(np.asarray(x, dtype=np.float64) + 1.0)


def _harmonic(n: int) -> float:
    return float(digamma(n + 1)) + float(np.euler_gamma)


def _strict_layers(p: Pair, bound: int) -> list[np.ndarray]:
    """Chain layers over top values 0..bound; layer[i][m] sums the depth-i
    strict chains of the component ending at m."""
    layers = [np.zeros(bound + 1, dtype=np.complex128)]
    layers[0][0] = 1.0
    ms = np.arange(bound + 1, dtype=np.float64)
    for v, e in p.letters():
        z = complex(v)
        prev = layers[-1]
        acc = lfilter([0.0, z], [1.0, -z], prev)
        nxt = np.zeros_like(prev)
        nxt[1:] = acc[1:] / ms[1:] ** e
        layers.append(nxt)
    return layers


def _bar_weight(bar: Pair, bound: int) -> np.ndarray:
    """W[T] = T * (bar-chain mass ending exactly at T); first slot strict,
    later slots weak."""
    d = np.zeros(bound + 1, dtype=np.complex128)
    d[0] = 1.0
    ts = np.arange(bound + 1, dtype=np.float64)
    for i, (v, e) in enumerate(bar.letters()):
        w = complex(v)
        if i == 0:
            acc = lfilter([0.0, w], [1.0, -w], d)
        else:
            acc = lfilter([1.0], [1.0, -w], d)
        d = np.zeros_like(d)
        d[1:] = acc[1:] / ts[1:] ** e
    return d * ts


def _binom_conv(g: np.ndarray, a: np.ndarray, cap: int) -> np.ndarray:
    """out[T] = sum_m g[T-m] a[m] (T-m)! m! / T!, m = 1..cap."""
    glf_g = _glf(np.arange(g.size))
    glf_a = _glf(np.arange(a.size))
    out = np.zeros(g.size + cap, dtype=np.complex128)
    glf_t = _glf(np.arange(out.size))
    for t in range(2, out.size):
        lo, hi = max(1, t - g.size + 1), min(cap, t - 1)
        if lo > hi:
            continue
        m = np.arange(lo, hi + 1)
        weights = np.exp(glf_g[t - m] + glf_a[m] - glf_t[t])
        out[t] = np.sum(g[t - m] * a[m] * weights)
    return out


def _phi(m: int, r: int) -> float:
    """sum_{u>m} (u-1)!/(u+r)! = m!/(r (m+r)!), exact telescoping (r >= 1)."""
    return math.exp(float(_glf(m) - _glf(m + r))) / r


def _escape_kernel(bar: Pair, w_ext: np.ndarray, cap: int, r_other: int,
                   k_top: int, z: complex) -> tuple[complex, float]:
    """(value, residual bound) for sum_{m>cap} (m-1)! r!/(m+r)! z^m W(m+r)/m^(k-1).

    For z = 1 the all-ones bars of shapes (1) and (1,1) with k = 1 have exact
    closed forms; every other case is a phase-carrying window plus a frozen-W
    telescoped remainder (added to the value only when z = 1, where the
    remainder terms share one sign).
    """
    r = r_other
    rfac = math.exp(float(_glf(r)))
    ones = all(v.is_one() for v in bar.z)
    if z == 1 and k_top == 1 and ones and bar.k == (1,):
        return complex(rfac * _phi(cap, r)), 0.0
    if z == 1 and k_top == 1 and ones and bar.k == (1, 1):
        val = rfac * (_phi(cap, r) * _harmonic(cap + r + 1) + _phi(cap + 1, r) / r)
        return complex(val), 0.0
    b = cap + _KERNEL_WINDOW
    m = np.arange(cap + 1, b + 1, dtype=np.float64)
    logs = _glf(m - 1) + float(_glf(r)) - _glf(m + r)
    terms = np.exp(logs) * w_ext[(m + r).astype(np.int64)] / m ** (k_top - 1)
    if z != 1:
        terms = terms * np.power(z, m)
    val = complex(np.sum(terms))
    w_end = complex(w_ext[min(b + r, w_ext.size - 1)])
    w_probe = complex(w_ext[min(2 * b // 3 + r, w_ext.size - 1)])
    rem = rfac * _phi(b, r) * w_end / float(b) ** (k_top - 1)
    resid = rfac * _phi(b, r) * (abs(w_end - w_probe) + abs(w_end) / b)
    if z == 1:
        return val + rem, float(resid)
    return val, float(abs(rem)) + float(resid)


def eval_zterm(t: ZTerm, bound: int, tol: float = 1e-6,
               tail_completion: bool = True) -> EvalReport:
    """Evaluate a connected-sum term with every component top capped at bound.

    The bar chain runs up to the full component total.  With tail_completion
    the qualifying single-escape rows are summed past the cap; without it the
    raw truncated value is returned (useful for monotone bracketing).
    """
    if t.is_structurally_zero():
        return EvalReport(0j, bound, 0.0, True)
    t = drop_all_empty_components(t)  # arity reduction, value-preserving
    if not is_convergent(t):
        raise DivergentInput(f"{t} does not converge absolutely")
    coef = complex(float(t.coef))
    n = t.arity
    cap = bound
    r_cut = max(2, int(45.0 / max(math.log(cap), 1.0))) + n
    t_ext = n * cap + _KERNEL_WINDOW + r_cut + 2
    w = _bar_weight(t.bar, t_ext)

    all_layers = [_strict_layers(p, cap) for p in t.components]
    tops = [ls[-1] for ls in all_layers]
    g = tops[0].copy()
    for a in tops[1:]:
        g = _binom_conv(g, a, cap)
    raw = complex(np.sum(g * w[:g.size]))

    value = raw
    tail = 0.0
    for j, p in enumerate(t.components):
        z_top, k_top = p.z[-1], p.k[-1]
        az = complex(z_top)
        if abs(az) < 1.0 - 1e-12:
            tail += abs(az) ** cap
            continue
        inner = all_layers[j][-2]
        zpow = np.power(np.conj(az), np.arange(cap, dtype=np.float64))
        ghat = complex(np.sum(inner[:cap] * zpow))
        ghat_half = complex(np.sum(inner[:cap // 2] * zpow[:cap // 2]))
        drift = abs(ghat - ghat_half)

        if n == 1:
            b = cap + _KERNEL_WINDOW
            m = np.arange(cap + 1, b + 1, dtype=np.float64)
            zs = np.power(az, m)
            row = complex(np.sum(zs * w[m.astype(np.int64)] / m ** k_top)) * ghat
            keff = max(k_top - 1, 1)
            rem_est = abs(ghat) * abs(w[b]) / (keff * float(b) ** keff)
            if tail_completion:
                value += row
                tail += drift * (abs(row) / abs(ghat) if ghat != 0 else 0.0)
                if z_top.is_one() and k_top >= 2:
                    # frozen-W remainder; the leftover is one log-slope of the
                    # bar weight per e-fold, estimated from a half-way probe
                    rem = ghat * complex(w[b]) * float(hurwitz_zeta(k_top, b + 1))
                    value += rem
                    slope = abs(complex(w[b]) - complex(w[b // 2])) / math.log(2)
                    tail += abs(ghat) * (slope + abs(w[b]) / b) * \
                        float(hurwitz_zeta(k_top, b + 1))
                else:
                    tail += rem_est
            else:
                tail += abs(row) + rem_est
            continue

        others = tops[:j] + tops[j + 1:]
        o = others[0].copy()
        for a in others[1:]:
            o = _binom_conv(o, a, cap)
        correction = 0j
        resid = 0.0
        for r in range(max(1, n - 1), min(r_cut, o.size - 1) + 1):
            if o[r] == 0:
                continue
            kv, kr = _escape_kernel(t.bar, w, cap, r, k_top, az)
            correction += o[r] * ghat * kv
            resid += abs(o[r]) * abs(ghat) * kr
        if tail_completion:
            value += correction
            scale = abs(correction) / abs(ghat) if ghat != 0 else 0.0
            tail += resid + drift * scale
        else:
            tail += abs(correction) + resid

    report_tail = float(tail) + 1e-13 * (1.0 + abs(value))
    report_tail = float(abs(coef)) * report_tail
    return EvalReport(complex(coef * value), bound, report_tail,
                      bool(report_tail <= tol))


# ---------------------------------------------------------------------------
# polylogarithm evaluation


def _mpl_terms_by_top(term: MplTerm, bound: int) -> np.ndarray:
    # gap powers z^(m_i - m_{i-1}) stay bounded for |z| <= 1, so harmonic
    # inputs are evaluated through their shuffle form
    if term.kind == "harmonic":
        term = harmonic_to_shuffle(term)
    prev = np.zeros(bound + 1, dtype=np.complex128)
    prev[0] = 1.0
    ms = np.arange(bound + 1, dtype=np.float64)
    for v, e in zip(term.z, term.k):
        z = complex(v)
        acc = lfilter([0.0, z], [1.0, -z], prev)
        prev = np.zeros_like(prev)
        prev[1:] = acc[1:] / ms[1:] ** e
    return prev


def eval_mpl(m: MplTerm, bound: int, tol: float = 1e-6) -> EvalReport:
    """Direct nested summation with outer index <= bound.

    An alternating outer tail is sharpened by averaging the last two partial
    sums; the tail estimate is heuristic.
    """
    if not m.guard_ok():
        raise DivergentInput(f"{m} violates its convergence guard")
    if m.dep == 0:
        return EvalReport(1 + 0j, bound, 0.0, True)
    terms = _mpl_terms_by_top(m, bound)
    s_full = complex(np.sum(terms))
    a_last = complex(terms[-1])
    a_prev = complex(terms[-2]) if bound >= 2 else 0j
    alternating = (
        abs(a_last) > 0
        and abs(a_prev) > 0
        and abs(a_last + a_prev) < 0.5 * (abs(a_last) + abs(a_prev))
    )
    if alternating:
        value = s_full - a_last / 2
        tail = abs(a_last) / 2
    else:
        value = s_full
        ratio = abs(a_last) / abs(a_prev) if abs(a_prev) > 0 else 1.0
        if ratio < 0.999:
            tail = abs(a_last) * ratio / (1.0 - ratio)
        else:
            tail = abs(a_last) * bound
    tail += 1e-15 * (1.0 + abs(value))
    return EvalReport(complex(value), bound, float(tail), bool(float(tail) <= tol))


def _mzv_depth2(a: int, b: int) -> tuple[float, float]:
    """zeta(a, b) at all-ones variables to near machine precision.

    The tail past the partial sum is rebuilt exactly: the inner chain splits
    at the truncation point, the double tail swaps summation order, and the
    leftover single sums come from the Hurwitz zeta plus one exact
    telescoped product ladder.  Needs b >= 2.
    """
    if b < 2:
        raise DivergentInput("depth-2 value needs an admissible top")
    n0 = 100_000
    window = 200_000
    ms = np.arange(1, n0 + 1, dtype=np.float64)
    inv_a = ms ** (-float(a))
    h_prev = np.concatenate(([0.0], np.cumsum(inv_a)[:-1]))
    partial = float(np.sum(h_prev / ms ** float(b)))
    js = np.arange(n0 + 1, n0 + window + 1, dtype=np.float64)
    end = float(js[-1])
    if a == 1:
        h_n0 = float(np.sum(inv_a))
        second = float(np.sum(hurwitz_zeta(b, js + 1) / js))
        lead = 1.0 / (b - 1) ** 2
        for c in range(1, b):
            lead /= end + c
        value = partial + h_n0 * float(hurwitz_zeta(b, n0 + 1)) + second + lead
        residual = end ** (-float(b)) + 1e-13
        return value, residual
    za = float(hurwitz_zeta(a, 1))
    cross = float(np.sum(hurwitz_zeta(a, js) / js ** float(b)))
    value = partial + za * float(hurwitz_zeta(b, n0 + 1)) - cross
    residual = 1.5 * float(hurwitz_zeta(a + b - 1, end + 1)) / (a - 1) + 1e-13
    return value, residual


def _all_ones_deep(k: tuple[int, ...], bound: int) -> tuple[float, float]:
    """Chunked large-bound partial sum for a pure zeta value of depth >= 3.

    The outer tail is completed at the frozen inner partial sum (exact swap
    at the cut, Hurwitz zeta for the remaining single sum); what is left is
    the inner chain's growth past the cut, reported as the estimate.
    """
    r = len(k)
    carry = np.zeros(r - 1, dtype=np.float64)
    total = 0.0
    chunk = 1 << 21
    start = 1
    while start <= bound:
        stop = min(bound, start + chunk - 1)
        ms = np.arange(start, stop + 1, dtype=np.float64)
        layer = ms ** (-float(k[0]))
        for i in range(1, r):
            excl = np.concatenate(([0.0], np.cumsum(layer)[:-1]))
            layer_sum = float(np.sum(layer))
            layer = (carry[i - 1] + excl) / ms ** float(k[i])
            carry[i - 1] += layer_sum
        total += float(np.sum(layer))
        start = stop + 1
    completion = carry[r - 2] * float(hurwitz_zeta(k[-1], bound + 1))
    tail = abs(completion) * min(1.0, 3.0 * (r - 1) / math.log(bound))
    return total + completion, tail


def _all_ones_mzv(k: tuple[int, ...], tol: float) -> tuple[complex, float]:
    r = len(k)
    if r == 1:
        return complex(float(hurwitz_zeta(k[0], 1))), 1e-15
    if r == 2:
        v, e = _mzv_depth2(k[0], k[1])
        return complex(v), e
    bound = 1 << 21
    value, tail = _all_ones_deep(k, bound)
    while tail > tol and bound < (1 << 25):
        bound <<= 2
        value, tail = _all_ones_deep(k, bound)
    return complex(value), tail


def eval_mpl_auto(m: MplTerm, tol: float, nmax: int = 1 << 21) -> tuple[complex, float]:
    """Adaptive evaluation used by the verifier: returns (value, tail estimate)."""
    if m.kind == "harmonic":
        m = harmonic_to_shuffle(m)
    if m.dep == 0:
        return 1 + 0j, 0.0
    if all(v.is_one() for v in m.z):
        return _all_ones_mzv(m.k, tol)
    n = 4096
    report = eval_mpl(m, n, tol)
    while report.tail_estimate > tol / 2 and n < nmax:
        n <<= 1
        report = eval_mpl(m, n, tol)
    return report.value, report.tail_estimate


# ---------------------------------------------------------------------------
# exact partial sums (oracles)


def eval_zterm_partial_exact(t: ZTerm, bound: int) -> Scalar:
    """Exact rational-complex partial sum over component tops <= bound."""
    if t.is_structurally_zero():
        return sc(0)
    comp_layers = []
    for p in t.components:
        layer: dict[int, Scalar] = {0: ONE}
        for v, e in p.letters():
            nxt: dict[int, Scalar] = {}
            for m in range(1, bound + 1):
                acc = sc(0)
                for mp, val in layer.items():
                    if mp < m:
                        acc = acc + val * v ** (m - mp)
                if not acc.is_zero():
                    nxt[m] = acc * sc(Fraction(1, m ** e))
            layer = nxt
        comp_layers.append(layer)

    totals: dict[int, Scalar] = {}

    def _combine(idx: int, acc_v: Scalar, tops: list[int]) -> None:
        if idx == len(comp_layers):
            tot = sum(tops)
            totals[tot] = totals.get(tot, sc(0)) + acc_v * sc(connector(tops))
            return
        # an empty component keeps its base entry {0: 1} and contributes a
        # zero top, matching the arity-reduction identity
        for m, val in comp_layers[idx].items():
            _combine(idx + 1, acc_v * val, tops + [m])

    _combine(0, ONE, [])
    if not totals:
        return sc(0)

    t_max = max(totals)
    bar_layer: dict[int, Scalar] = {0: ONE}
    for i, (v, e) in enumerate(t.bar.letters()):
        nxt = {}
        for q in range(1, t_max + 1):
            acc = sc(0)
            for qp, val in bar_layer.items():
                if qp < q or (i > 0 and qp == q):
                    acc = acc + val * v ** (q - qp)
            if not acc.is_zero():
                nxt[q] = acc * sc(Fraction(1, q ** e))
        bar_layer = nxt

    out = sc(0)
    for tot, val in totals.items():
        wq = bar_layer.get(tot)
        if wq is not None:
            out = out + val * wq * sc(tot)
    return out * sc(t.coef)


def eval_mpl_partial_exact(m: MplTerm, bound: int) -> Scalar:
    """Exact rational-complex partial sum with outer index <= bound."""
    layer: dict[int, Scalar] = {0: ONE}
    for v, e in zip(m.z, m.k):
        nxt: dict[int, Scalar] = {}
        for mm in range(1, bound + 1):
            acc = sc(0)
            for mp, val in layer.items():
                if mp < mm:
                    if m.kind == "shuffle":
                        acc = acc + val * v ** (mm - mp)
                    else:
                        acc = acc + val
            if m.kind == "harmonic":
                acc = acc * v ** mm
            if not acc.is_zero():
                nxt[mm] = acc * sc(Fraction(1, mm ** e))
        layer = nxt
    out = sc(0)
    for val in layer.values():
        out = out + val
    return out


# ---------------------------------------------------------------------------
# the finite telescoping identity


def telescoping_check(d: int, n: int, m_minus: Sequence[int], m_plus: Sequence[int],
                      q: int, vs: Sequence[Scalar], t: Scalar, bound: int) -> bool:
    """Exact check of the finite-truncation rearrangement identity.

    In exact arithmetic, the two capped double sums must differ by precisely
    the explicit boundary shell at total = bound (0**0 counted as 1).
    """
    if not (1 <= d <= n):
        raise HypothesisViolated("need 1 <= d <= n")
    if len(m_minus) != d or len(m_plus) != n - d:
        raise HypothesisViolated("parameter lengths do not match d, n")
    if any(x < 0 for x in m_minus) or any(x < 1 for x in m_plus):
        raise HypothesisViolated("m- must be non-negative, m+ positive")
    if q < 0:
        raise HypothesisViolated("q must be non-negative")
    if len(vs) != d:
        raise HypothesisViolated("need one v per horizontal slot")
    for v in vs:
        if v.is_inf or v.is_zero() or not v.in_closed_disk():
            raise HypothesisViolated(f"v = {v} outside the punctured closed disk")
    if reciprocal_sum(vs) != t:
        raise HypothesisViolated("reciprocal sum of vs must equal t")
    if t.is_inf or not t.in_closed_disk():
        raise HypothesisViolated("|t| <= 1 required")
    if bound <= q or bound <= sum(m_minus) + d + sum(m_plus):
        raise HypothesisViolated("bound too small for a non-degenerate check")

    mp_total = sum(m_plus)
    prod_mp = math.prod(m_plus) if m_plus else 1
    inv_mp = sc(Fraction(1, prod_mp))

    def shells(strict_slots: Sequence[int], fixed: dict[int, int],
               lo: int, hi: int, include_hi: bool) -> Iterable[tuple[tuple[int, ...], int]]:
        ranges = [range(m_minus[i] + 1, hi + 1) for i in strict_slots]
        for combo in itertools.product(*ranges):
            a = [fixed.get(i, 0) for i in range(d)]
            for i, val in zip(strict_slots, combo):
                a[i] = val
            total = sum(a) + mp_total
            if total < lo or (total > hi if include_hi else total >= hi):
                continue
            yield tuple(a), total

    def prod_term(a: tuple[int, ...], skip: Optional[int]) -> Scalar:
        out = ONE
        for kk in range(d):
            if kk == skip:
                continue
            out = out * vs[kk] ** (a[kk] - m_minus[kk]) * sc(Fraction(1, a[kk]))
        return out

    def conn(a: tuple[int, ...]) -> Scalar:
        return sc(connector(tuple(a) + tuple(m_plus)))

    lhs = sc(0)
    for i in range(d):
        part = sc(0)
        for a, total in shells([kk for kk in range(d) if kk != i],
                               {i: m_minus[i]}, q, bound, include_hi=False):
            part = part + conn(a) * prod_term(a, i) * t ** (total - q)
        lhs = lhs + part
    lhs = lhs * inv_mp

    for i in range(n - d):
        part = sc(0)
        for a, total in shells(list(range(d)), {}, q, bound, include_hi=False):
            part = part + conn(a) * prod_term(a, None) * t ** (total - q)
        lhs = lhs - part * sc(Fraction(m_plus[i], prod_mp))

    rhs = sc(0)
    for a, total in shells(list(range(d)), {}, q, q, include_hi=True):
        rhs = rhs + conn(a) * prod_term(a, None) * sc(q)
    rhs = rhs * sc(Fraction(-1, prod_mp))

    boundary = sc(0)
    for a, total in shells(list(range(d)), {}, bound, bound, include_hi=True):
        boundary = boundary + conn(a) * prod_term(a, None) * t ** (bound - q)
    rhs = rhs + boundary * sc(Fraction(bound, prod_mp))

    return lhs == rhs


# ---------------------------------------------------------------------------
# relation verification


def _eval_side(side, bound: int, tol: float) -> tuple[complex, float, list]:
    val = 0j
    tails = 0.0
    per_term: list[tuple[str, complex]] = []
    if isinstance(side, ZExpr):
        for term in side.as_terms():
            rep = eval_zterm(term.with_coef(Fraction(1)), bound, tol)
            val += complex(float(term.coef)) * rep.value
            tails += abs(float(term.coef)) * rep.tail_estimate
            per_term.append((str(term), rep.value))
        return val, tails, per_term
    nterms = max(len(side.terms), 1)
    budget = tol / (4.0 * nterms)
    for coef, term in side.terms:
        v, e = eval_mpl_auto(term, budget)
        val += complex(float(coef)) * v
        tails += abs(float(coef)) * e
        per_term.append((str(term), v))
    return val, tails, per_term


def verify_relation(rel: Relation, bound: int = 400, tol: float = 1e-6) -> VerifyReport:
    """Numerically certify |lhs - rhs| <= tol; NotConverged if tails exceed tol."""
    lv, lt, lp = _eval_side(rel.lhs, bound, tol)
    rv, rt, rp = _eval_side(rel.rhs, bound, tol)
    tail_total = lt + rt
    diff = abs(lv - rv)
    if tail_total > tol:
        raise NotConverged(f"tail estimate {tail_total:.3e} exceeds tolerance {tol:.3e}")
    return VerifyReport(
        ok=bool(diff <= tol),
        lhs_value=complex(lv),
        rhs_value=complex(rv),
        difference=float(diff),
        tol=tol,
        tail_total=float(tail_total),
        per_term=tuple(lp + rp),
    )
