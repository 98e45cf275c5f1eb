"""Bohr-Sommerfeld inversion in both coupling regimes, the quantization
functions of the exact band-edge condition, and strong-coupling gap edges.

Everything in this module that returns series returns exact rationals; the
only floating point lives in ``zjj_quantization_solve`` which evaluates the
transcendental band-edge condition numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Callable

import mpmath

from . import actions, charvalues
from .errors import ConvergenceError, DomainError, StructureError
from .series import PolyB, PolySeries, poly_eval_series

__all__ = [
    "bs_invert_weak",
    "u_pert",
    "bs_invert_strong",
    "StrongExpansion",
    "ZjjFunctions",
    "zjj_construct",
    "zjj_A_from_E",
    "zjj_quantization_solve",
    "GapEdges",
    "gap_edge_series",
    "alphabeta_extract",
]

_B = PolyB((0, 1))
_WEAK_CACHE: dict[int, PolySeries] = {}


def bs_invert_weak(order: int, progress: Callable[[float], None] | None = None) -> PolySeries:
    """u(hbar, B) from the all-orders quantization condition in the wells.

    Inverts hbar B = 2 sum_n hbar^(2n) a_n(u) around u = -1, order by
    order in hbar; coefficients come out as polynomials in B = N + 1/2.
    The hbar^0 coefficient is -1 (the well bottom).
    """
    if order < 1:
        raise DomainError("order >= 1 required")
    if order in _WEAK_CACHE:
        return _WEAK_CACHE[order]
    n_max = order // 2
    acts = actions.well_actions(n_max, order)

    # Unknown v = u + 1 as a series in hbar with PolyB coefficients.
    v = PolySeries("hbar", order, [PolyB(), _B])
    target = PolySeries("hbar", order, [PolyB(), _B])  # hbar * B
    for sweep in range(order + 1):
        # residual F(v) - hbar B where F = 2 sum hbar^(2n) a_n(v)
        resid = -target
        for n in range(n_max + 1):
            an = acts[n]
            # evaluate 2 * a_n at v, then shift by hbar^(2n)
            poly = PolyB([2 * c for c in an])
            term = poly_eval_series(poly, v)
            if n:
                term = term.shift_powers(2 * n)
            resid = resid + term
        if resid.is_zero():
            break
        # Leading correction: residual starts at some hbar^k; d(F)/dv = 1 + ...
        v = v - resid
        if progress is not None:
            progress(min(1.0, (sweep + 1) / (order + 1)))
    else:
        raise ConvergenceError("weak-coupling inversion did not close")
    out = v - PolySeries.const("hbar", order, 1)
    _WEAK_CACHE[order] = out
    return out


def u_pert(order: int) -> PolySeries:
    """The weak-coupling band-location series: alias for bs_invert_weak."""
    return bs_invert_weak(order)


@dataclass
class StrongExpansion:
    """u as a double expansion at strong coupling.

    terms[(i, k)] multiplies hbar^(2i) * a^(2-k) with a = N hbar / 2.
    """

    terms: dict[tuple[int, int], Q]

    def u(self, hbar: float, N: int) -> float:
        a = N * hbar / 2.0
        return sum(
            float(c) * hbar ** (2 * i) * a ** (2 - k) for (i, k), c in self.terms.items()
        )

    def f_series(self, i: int) -> dict[int, Q]:
        """The hbar^(2i) row as {power of 1/a: coefficient} relative to a^2."""
        return {k: c for (j, k), c in self.terms.items() if j == i}


def bs_invert_strong(order: int, depth: int = 8) -> StrongExpansion:
    """Invert hbar N / 2 = a(hbar, u) for u >> 1.

    ``order`` bounds the hbar^(2i) rows kept, ``depth`` the 1/a powers.
    """
    acts = actions.high_actions(order, depth + 2 * order + 2)

    # Work with s = sqrt(2u): each a_n is sum c (s)^h. Unknown:
    # s = a (1 + d) with d a truncated double series in (hbar^2, 1/a^2).
    imax, kmax = order, depth + 2

    def dmul(x, y):
        out: dict[tuple[int, int], Q] = {}
        for (i1, k1), c1 in x.items():
            for (i2, k2), c2 in y.items():
                i, k = i1 + i2, k1 + k2
                if i <= imax and k <= kmax:
                    key = (i, k)
                    out[key] = out.get(key, Q(0)) + c1 * c2
        return {k: v for k, v in out.items() if v}

    def dadd(x, y):
        out = dict(x)
        for key, c in y.items():
            out[key] = out.get(key, Q(0)) + c
            if not out[key]:
                del out[key]
        return out

    def dpow_1plus(d, alpha_num: int):
        """(1 + d)^alpha for integer alpha (possibly negative), truncated."""
        out = {(0, 0): Q(1)}
        term = {(0, 0): Q(1)}
        t = 0
        while True:
            t += 1
            if t > imax * 2 + kmax:
                break
            term = dmul(term, d)
            if not term:
                break
            coef = Q(1)
            for r in range(t):
                coef *= Q(alpha_num - r)
            coef /= math.factorial(t)
            out = dadd(out, {k: coef * v for k, v in term.items()})
        return out

    d: dict[tuple[int, int], Q] = {}
    for _sweep in range(2 * (imax + kmax) + 4):
        # F(s)/a - 1 where F = sum_n hbar^(2n) a_n, s = a(1+d).
        resid = {(0, 0): Q(-1)}
        for n in range(order + 1):
            for h, c in acts[n].items():
                # c * (2u)^(h/2) = c * s^h = c * a^h (1+d)^h ;
                # relative to a: a^(h-1): k-index = 1 - h
                powd = dpow_1plus(d, h)
                term = {
                    (i + n, k + 1 - h): v * c
                    for (i, k), v in powd.items()
                    if i + n <= imax and k + 1 - h <= kmax
                }
                resid = dadd(resid, term)
        if not resid:
            break
        d = dadd(d, {k: -v for k, v in resid.items()})
    else:
        raise ConvergenceError("strong-coupling inversion did not close")

    one_plus_d2 = dpow_1plus(d, 2)
    terms = {}
    for (i, k), c in one_plus_d2.items():
        terms[(i, k)] = c / 2  # u = s^2/2 = a^2 (1+d)^2 / 2, stored vs a^(2-k)
    return StrongExpansion(terms={k: v for k, v in terms.items() if v})


@dataclass
class ZjjFunctions:
    """The two quantization functions in both variable conventions.

    A carries an explicit 16/hbar leading term on top of its power series.
    """

    E_of_B: PolySeries
    B_of_E: PolySeries
    A_of_B: PolySeries
    A_of_E: PolySeries

    A_LEADING_NUM: int = 16  # the 16/hbar pole term of both A series


def _revert_in_poly_variable(f: PolySeries) -> PolySeries:
    """Given y = B + sum_{n>=1} hbar^n p_n(B), produce B = y + sum q_n(y).

    Functional inversion of a near-identity map graded by the series
    variable; the polynomial variable simply relabels (B -> E).
    """
    if f[0] != _B:
        raise StructureError("inversion requires leading coefficient B")
    order = f.order
    g = PolySeries("hbar", order, [_B])  # B = E + corrections, symbol reused
    for _sweep in range(order + 1):
        # residual: f(g) - E, composing in the polynomial variable.
        resid = PolySeries.zero("hbar", order)
        for n in range(order + 1):
            pn = f[n]
            term = _poly_at_series(pn, g)
            if n:
                term = term.shift_powers(n)
            resid = resid + term
        resid = resid - PolySeries("hbar", order, [_B])
        if resid.is_zero():
            return g
        g = g - resid
    raise ConvergenceError("series inversion in the polynomial variable failed")


def _poly_at_series(p: PolyB, g: PolySeries) -> PolySeries:
    """p evaluated at a PolySeries whose coefficients are PolyB in the new
    variable; Horner over that ring."""
    out = PolySeries.zero(g.var, g.order)
    for a in reversed(p.c):
        out = out * g + a
    return out


def zjj_construct(order: int) -> ZjjFunctions:
    """Build E(hbar,B), B(hbar,E), A(hbar,B), A(hbar,E) from the
    perturbative series alone, all to hbar^order."""
    up = bs_invert_weak(order + 2)
    # E = (u + 1)/hbar; one extra order so A reaches hbar^order below
    E_full = PolySeries("hbar", order + 1, [up[n + 1] for n in range(order + 2)])
    E_of_B = E_full.truncate(order)
    B_of_E = _revert_in_poly_variable(E_of_B)
    A_of_B = zjj_A_from_E(E_full).truncate(order)
    # A(hbar, E): substitute B(E) into the series part of A(hbar, B).
    A_of_E = _substitute_poly_variable(A_of_B, B_of_E)
    return ZjjFunctions(E_of_B=E_of_B, B_of_E=B_of_E, A_of_B=A_of_B, A_of_E=A_of_E)


def _substitute_poly_variable(f: PolySeries, g: PolySeries) -> PolySeries:
    """f with its polynomial variable replaced by the series g."""
    order = min(f.order, g.order)
    out = PolySeries.zero("hbar", order)
    for n in range(order + 1):
        term = _poly_at_series(f[n], g.truncate(order))
        if n:
            term = term.shift_powers(n)
        out = out + term
    return out


def zjj_A_from_E(E_of_B: PolySeries) -> PolySeries:
    """The instanton function from the perturbative one:

        dA/dhbar = -(16/hbar^2) dE/dB - 2B/hbar,

    integrated termwise with the hbar^0 constant set to zero.  The would-be
    log term (the 1/hbar piece of the right side) cancels identically
    because dE/dB = 1 - hbar B/8 + O(hbar^2); a surviving term means the
    input is not a consistent perturbative series.  The returned series is
    the part beyond the explicit 16/hbar pole.
    """
    order = E_of_B.order
    dEdB = E_of_B.derivative_B()
    if dEdB[0] != PolyB.const(1):
        raise StructureError("dE/dB must start at 1")
    if order >= 1 and dEdB[1] != PolyB((0, Q(-1, 8))):
        raise StructureError("1/hbar term fails to cancel: wrong input series")
    out = [PolyB() for _ in range(order)]
    for n in range(2, order + 1):
        # -(16/hbar^2) * c_n hbar^n integrates to -16 c_n hbar^(n-1)/(n-1)
        out[n - 1] = dEdB[n] * Q(-16, n - 1)
    # the hbar^order coefficient would need dE/dB one order further
    return PolySeries("hbar", order - 1, out)


def zjj_quantization_solve(
    hbar: float,
    N: int,
    theta: float,
    order: int = 8,
    branch: int = +1,
) -> dict:
    """Band-edge energy from the exact quantization condition, numerically.

    Solves, for E near N + 1/2,

        (32/hbar)^-B e^(A/2) / Gamma(1/2 - B)
        + (-32/hbar)^-B e^(-A/2) / Gamma(1/2 + B) = 2 cos(theta)/sqrt(2 pi)

    with A, B the truncated quantization functions and (-1)^-B evaluated on
    the chosen lateral branch.  Returns u = -1 + hbar E plus a truncation
    uncertainty estimated by redoing the solve one order lower.
    """
    if hbar <= 0:
        raise DomainError("hbar > 0 required")
    if branch not in (+1, -1):
        raise DomainError("branch is +1 or -1")
    z = zjj_construct(order)

    def solve_at(ord_used: int) -> float:
        Bf = z.B_of_E.truncate(ord_used)
        Af = z.A_of_E.truncate(ord_used)

        def F(E: float) -> float:
            Bv = float(Bf(hbar, E))
            Av = 16.0 / hbar + float(Af(hbar, E))
            # reciprocal Gamma handles the Gamma poles at half-integer B
            t1 = (32.0 / hbar) ** (-Bv) * math.exp(Av / 2) * float(mpmath.rgamma(0.5 - Bv))
            phase = complex(math.cos(math.pi * Bv), -branch * math.sin(math.pi * Bv))
            t2 = (32.0 / hbar) ** (-Bv) * math.exp(-Av / 2) * float(mpmath.rgamma(0.5 + Bv))
            lhs = t1 + (phase * t2).real
            return lhs - 2 * math.cos(theta) / math.sqrt(2 * math.pi)

        lo, hi = N + 0.02, N + 0.98
        flo, fhi = F(lo), F(hi)
        if flo * fhi > 0:
            raise ConvergenceError("no bracketed root for the band edge")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = F(mid)
            if flo * fm <= 0:
                hi, fhi = mid, fm
            else:
                lo, flo = mid, fm
            if hi - lo < 1e-14 * max(1.0, abs(mid)):
                break
        return 0.5 * (lo + hi)

    E_full = solve_at(order)
    E_lower = solve_at(order - 1)
    u = -1 + hbar * E_full
    return {
        "E": E_full,
        "u": u,
        "uncertainty": abs(hbar * (E_full - E_lower)),
        "order": order,
        "branch": branch,
    }


@dataclass
class GapEdges:
    """Strong-coupling edges of gap N: u = (hbar^2/8) * [b_N | a_N](4/hbar^2).

    ``lower``/``upper`` are the characteristic-value series; for N = 0 only
    the upper edge (bottom of the spectrum's first band) exists.
    """

    N: int
    lower: PolySeries | None
    upper: PolySeries

    def u_lower(self, hbar: float) -> float:
        if self.lower is None:
            raise DomainError("gap 0 has no lower edge")
        return hbar * hbar / 8 * float(self.lower(4 / hbar**2))

    def u_upper(self, hbar: float) -> float:
        return hbar * hbar / 8 * float(self.upper(4 / hbar**2))

    def width(self, hbar: float) -> float:
        return self.u_upper(hbar) - self.u_lower(hbar)


def gap_edge_series(N: int, order: int) -> GapEdges:
    """Exact strong-coupling expansions of the two edges of gap N."""
    if N < 0:
        raise DomainError("N >= 0")
    upper = charvalues.char_a(N, order)
    lower = charvalues.char_b(N, order) if N >= 1 else None
    return GapEdges(N=N, lower=lower, upper=upper)


def alphabeta_extract(N: int, order: int) -> tuple[list[Q], list[Q]]:
    """Rewrite gap-N edges as mean/splitting data:

        u_pm = (hbar^2 N^2/8) sum_n alpha_n / hbar^(4n)
               +- (hbar^2/8) (2/hbar)^(2N) / (2^(N-1) (N-1)!)^2
                  * sum_n beta_n / hbar^(4n)

    Returns (alpha, beta) as exact rationals.
    """
    if N < 1:
        raise DomainError("gap label N >= 1 required")
    edges = gap_edge_series(N, order)
    a, b = edges.upper, edges.lower
    mean = (a + b) / 2
    half = (a - b) / 2
    # mean: only even powers of q survive; q^(2n) = 16^n / hbar^(4n)
    alphas: list[Q] = []
    for j in range(mean.order + 1):
        c = mean[j].const_value()
        if j == 0:
            if c != N * N:
                raise StructureError("mean must start at N^2")
            alphas.append(Q(1))
        elif j % 2 == 1:
            if c != 0:
                raise StructureError("odd power in gap mean")
        else:
            alphas.append(c * Q(16) ** (j // 2) / (N * N))
    # splitting: supported on q^(N + 2n); q^N carries 4^N/hbar^(2N) which
    # matches the (2/hbar)^(2N) template factor exactly
    pref = Q(2 ** (N - 1) * math.factorial(N - 1)) ** 2
    betas: list[Q] = []
    for j in range(half.order + 1):
        c = half[j].const_value()
        if j < N or (j - N) % 2 == 1:
            if c != 0:
                raise StructureError(
                    f"gap splitting has support at q^{j}, outside the template"
                )
            continue
        betas.append(c * pref * Q(16) ** ((j - N) // 2))
    if not betas or betas[0] == 0:
        raise StructureError("no leading gap splitting found at order hbar^(2-2N)")
    return alphas, betas
