"""Zero-dimensional saddle resurgence laboratory for the periodic and
doubly-periodic partition integrals

    Z(hbar | m) = 1/sqrt(pi hbar) * int_{-K}^{K} exp(-sd^2(z|m)/hbar) dz,

whose m -> 0 limit is the sin^2 integral.  Provides exact saddle-point
fluctuation expansions, quadrature ground truth, large-order/low-order
coefficient relations, and lateral Borel-type resummation experiments.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction as Q

import mpmath

from .elliptic import ellip_K, jacobi_sn_cn_dn
from .errors import DomainError
from .jacobi_exact import saddle_potential_imag, saddle_potential_real, sd_squared_taylor
from .series import PolyB

__all__ = [
    "SaddleExpansion",
    "saddle_series",
    "lame_saddles",
    "lame_vacuum_symbolic",
    "sin2_vacuum_exact",
    "z_quadrature",
    "berry_howls_check",
    "exact_relation_check",
    "borel_lateral_check",
]


@dataclass
class SaddleExpansion:
    """Fluctuation data of one saddle of exp(-f/hbar).

    The steepest-descent integral through the saddle is

        int exp(-f/hbar) = exp(-action/hbar) sqrt(pi hbar / curvature)
                           * sum_r coeffs[r] hbar^r,

    with coeffs[0] = 1.  ``rotated`` marks saddles whose descent direction
    is i times the original one (contributing a factor i to the sector).
    All stored numbers are exact rationals.
    """

    label: str
    action: Q
    curvature: Q
    coeffs: list[Q]
    rotated: bool = False

    def sector_coeff(self, r: int, dps: int = 30):
        """a_r = coeffs[r]/sqrt(curvature), the partition-normalized
        fluctuation coefficient (an mpf; irrational in general)."""
        with mpmath.workdps(dps):
            c2 = mpmath.mpf(self.curvature.numerator) / self.curvature.denominator
            b = mpmath.mpf(self.coeffs[r].numerator) / self.coeffs[r].denominator
            return b / mpmath.sqrt(c2)


def _dfac(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def saddle_series(taylor, order: int, label: str = "saddle",
                  rotated: bool = False) -> SaddleExpansion:
    """Gaussian-moment expansion about a nondegenerate saddle.

    ``taylor``: exact coefficients [c0, c1, c2, c3, ...] of f along the
    (possibly rotated) descent direction; requires c1 = 0 and c2 > 0.
    """
    taylor = [Q(c) if not isinstance(c, PolyB) else c for c in taylor]
    taylor = [c.const_value() if isinstance(c, PolyB) else c for c in taylor]
    if len(taylor) < 3 or taylor[1] != 0:
        raise DomainError("need Taylor data [S, 0, c2, ...] along the descent line")
    c2 = taylor[2]
    if c2 <= 0:
        raise DomainError("degenerate or wrongly oriented saddle: c2 must be > 0")
    # A(s, delta) = sum_{k>=3} c_k delta^(k-2) s^k, delta = sqrt(hbar);
    # expand exp(-A) and take Gaussian moments <s^(2j)> = (2j-1)!!/(2 c2)^j.
    dmax = 2 * order
    # exp(-A) term by term: dict delta-power -> dict s-power -> Q
    expA: dict[int, dict[int, Q]] = {0: {0: Q(1)}}
    term: dict[int, dict[int, Q]] = {0: {0: Q(1)}}
    kmax = min(len(taylor) - 1, dmax + 2)
    for n in range(1, dmax + 1):
        # term_n = term_{n-1} * (-A) / n
        new: dict[int, dict[int, Q]] = {}
        for d1, row in term.items():
            for k in range(3, kmax + 1):
                ck = taylor[k]
                if ck == 0:
                    continue
                d = d1 + k - 2
                if d > dmax:
                    continue
                dst = new.setdefault(d, {})
                for s1, v in row.items():
                    dst[s1 + k] = dst.get(s1 + k, Q(0)) - v * ck / n
        term = new
        if not term:
            break
        for d, row in term.items():
            dst = expA.setdefault(d, {})
            for s, v in row.items():
                dst[s] = dst.get(s, Q(0)) + v
    coeffs = []
    for r in range(order + 1):
        tot = Q(0)
        row = expA.get(2 * r, {})
        for s, v in row.items():
            if s % 2 == 0:
                j = s // 2
                tot += v * Q(_dfac(2 * j - 1), 1) / (2 * c2) ** j
        coeffs.append(tot)
    return SaddleExpansion(
        label=label, action=taylor[0], curvature=c2, coeffs=coeffs, rotated=rotated
    )


def lame_saddles(m: Q, order: int) -> dict[str, SaddleExpansion]:
    """The three connected saddles of the doubly-periodic integrand.

    vacuum at z = 0 (action 0), the real saddle at z = K(m) with action
    1/(1-m), and the imaginary one at z = i K(1-m) with action -1/m; the
    latter two are rotated (descent along the imaginary direction).
    """
    m = Q(m)
    if not 0 < m < 1:
        raise DomainError("saddle set needs 0 < m < 1; use sin2_vacuum_exact at m=0")
    need = 2 * order + 4
    vac_taylor = [p(m) for p in sd_squared_taylor(need).c]
    vacuum = saddle_series(vac_taylor, order, label="vacuum")

    # real saddle: f(K + i s) = P(s)/(1-m), P = (1-m) sd^2 series;
    # rescale s -> sqrt(1-m) sigma to keep every coefficient rational.
    P = [p(m) for p in saddle_potential_real(need).c]
    one_m = 1 - m
    f1 = [P[k] * one_m ** (k // 2 - 1) if k % 2 == 0 else Q(0) for k in range(len(P))]
    # k = 0 entry: action S1 = 1/(1-m)
    f1[0] = 1 / one_m
    real = saddle_series(f1, order, label="real", rotated=True)
    # the sigma-rescaling moved the physical curvature 1/(1-m) to 1;
    # restore it so sector_coeff carries the right Gaussian prefactor
    real.curvature = 1 / one_m

    # imaginary saddle: f(i (K' + s)) = -C(s)/m, C = cn^2(s | 1-m);
    # rescale s -> sqrt(m) sigma.
    C = [p(m) for p in saddle_potential_imag(need).c]
    f2 = [-C[k] * m ** (k // 2 - 1) if k % 2 == 0 else Q(0) for k in range(len(C))]
    f2[0] = -1 / m
    imag = saddle_series(f2, order, label="imag", rotated=True)
    imag.curvature = 1 / m
    return {"vacuum": vacuum, "real": real, "imag": imag}


def lame_vacuum_symbolic(order: int) -> list[PolyB]:
    """Vacuum fluctuation coefficients as exact polynomials in m."""
    need = 2 * order + 4
    sd2 = sd_squared_taylor(need)
    dmax = 2 * order
    expA: dict[int, dict[int, PolyB]] = {0: {0: PolyB.const(1)}}
    term: dict[int, dict[int, PolyB]] = {0: {0: PolyB.const(1)}}
    for n in range(1, dmax + 1):
        new: dict[int, dict[int, PolyB]] = {}
        for d1, row in term.items():
            for k in range(3, need + 1):
                ck = sd2[k] if k <= sd2.order else PolyB()
                if ck.is_zero():
                    continue
                d = d1 + k - 2
                if d > dmax:
                    continue
                dst = new.setdefault(d, {})
                for s1, v in row.items():
                    add = v * ck * Q(-1, n)
                    dst[s1 + k] = dst.get(s1 + k, PolyB()) + add
        term = new
        if not term:
            break
        for d, row in term.items():
            dst = expA.setdefault(d, {})
            for s, v in row.items():
                dst[s] = dst.get(s, PolyB()) + v
    out = []
    for r in range(order + 1):
        tot = PolyB()
        for s, v in expA.get(2 * r, {}).items():
            if s % 2 == 0:
                j = s // 2
                tot = tot + v * Q(_dfac(2 * j - 1), 2 ** j)
        out.append(tot)
    return out


def sin2_vacuum_exact(r: int) -> Q:
    """Closed form for the sin^2 vacuum coefficients:
    Gamma(r+1/2)^2/(sqrt(pi) r!) normalized by the Gaussian prefactor
    sqrt(pi), i.e. ((2r-1)!!)^2 / (4^r r!)."""
    return Q(_dfac(2 * r - 1) ** 2, 4 ** r * math.factorial(r))


def z_quadrature(hbar: float, m, dps: int = 25) -> float:
    """1/sqrt(pi hbar) int_{-K}^{K} exp(-sd^2(z|m)/hbar) dz by adaptive
    quadrature, absolute accuracy well below 1e-12."""
    if hbar <= 0:
        raise DomainError("hbar > 0 required")
    if not 0 <= m <= 1:
        raise DomainError("m in [0, 1]")
    with mpmath.workdps(dps):
        mm = mpmath.mpf(m.numerator) / m.denominator if isinstance(m, Q) else mpmath.mpf(m)
        h = mpmath.mpf(hbar)
        K = mpmath.pi / 2 if mm == 0 else (
            mpmath.mpf("1e9") if mm == 1 else ellip_K(mm, dps=dps)
        )
        if mm == 1:
            # sinh^2 well: integrate to effective infinity
            K = mpmath.sqrt(h) * 40 + 10

        def f(z):
            if mm == 0:
                s = mpmath.sin(z)
                val = s * s
            elif mm == 1:
                s = mpmath.sinh(z)
                val = s * s
            else:
                sn, _cn, dn = jacobi_sn_cn_dn(z, mm, dps=dps)
                val = (sn / dn) ** 2
            return mpmath.exp(-val / h)

        total = mpmath.quad(f, [-K, 0, K])
        return float(total / mpmath.sqrt(mpmath.pi * h))


def berry_howls_check(m: Q, n_values, j_max: int = 4, dps: int = 50) -> list[dict]:
    """Compare vacuum coefficients against the (n-1)!-weighted sums over
    the two adjacent saddles; reports the relative error coefficient by
    coefficient.  The dominant saddle flips from the real one (m < 1/2,
    non-alternating) to the imaginary one (m > 1/2, alternating).
    """
    m = Q(m)
    order = max(n_values)
    sads = lame_saddles(m, order)
    vac = sads["vacuum"]
    S1, S2 = sads["real"].action, sads["imag"].action
    out = []
    with mpmath.workdps(dps):
        s1 = mpmath.mpf(S1.numerator) / S1.denominator
        s2 = mpmath.mpf(S2.numerator) / S2.denominator
        for n in n_values:
            lhs = mpmath.mpf(vac.coeffs[n].numerator) / vac.coeffs[n].denominator
            rhs = mpmath.mpf(0)
            for j in range(min(j_max, n - 1) + 1):
                w = mpmath.factorial(n - j - 1) / mpmath.pi
                rhs += w * (
                    sads["real"].sector_coeff(j, dps) / s1 ** (n - j)
                    + sads["imag"].sector_coeff(j, dps) / s2 ** (n - j)
                )
            rel = abs(lhs - rhs) / abs(lhs)
            out.append({"m": float(m), "n": n, "lhs": float(lhs),
                        "rhs": float(rhs), "rel_defect": float(rel)})
    return out


def exact_relation_check(m: Q, n_range, j_max: int = 6, dps: int = 60) -> dict:
    """Max relative defect of the coefficient relation

        a_n^(0) = sum_j ((n-j-1)!/pi) (a_j^(1)/S1^(n-j) + a_j^(2)/S2^(n-j))

    truncated at j_max, over the requested n range."""
    rows = berry_howls_check(m, list(n_range), j_max=j_max, dps=dps)
    worst = max(r["rel_defect"] for r in rows)
    return {"m": float(Q(m)), "j_max": j_max, "rows": rows, "max_rel_defect": worst}


def report_to_json(rows) -> str:
    return json.dumps(rows, sort_keys=True)


def _phi_tail(x, p: int):
    """PV-resummed factorial tail sum_{q > p} (q-1)! x^q.

    Equals x^(p+1) J_p with J_p = PV int_0^inf t^p e^(-t)/(1 - x t) dt / x
    ... satisfying J_p = t* J_{p-1} - (p-1)!, J_0 = e^(-t*) Ei(t*),
    t* = 1/x.  mpmath's ei takes the principal value on the positive axis,
    which is exactly the lateral average.
    """
    tstar = 1 / x
    J = mpmath.exp(-tstar) * mpmath.ei(tstar)
    fact = mpmath.mpf(1)
    for q in range(1, p + 1):
        J = tstar * J - fact
        fact *= q
    return x ** (p + 1) * J


def borel_lateral_check(
    m: Q,
    hbar_list,
    j_max: int = 8,
    n_cut: int | None = None,
    dps: int = 60,
) -> list[dict]:
    """Superasymptotic lateral-Borel reconstruction of Z(hbar | m).

    The exact vacuum coefficients are kept up to the optimal truncation
    n_cut (chosen per hbar as the index of the smallest term when not
    given); the factorially divergent tail is replaced sector by sector
    using the coefficient relation

        a_n ~ sum_j ((n-j-1)!/pi) (a_j^(1)/S1^(n-j) + a_j^(2)/S2^(n-j)),

    each j-term resummed in closed form through the principal-value kernel
    PV int_0^inf t^p e^(-t) dt/(1 - hbar v ...) = e^(-1/x) Ei(1/x) tails.
    The pole on the positive axis (real saddle) carries the lateral
    ambiguity +- i pi e^(-S1/hbar) sum_j a_j^(1) hbar^j, reported in
    ``imag_ambiguity``; the ghost sector is pole-free.  ``rhs`` is compared
    against direct quadrature; the residual defect tracks the omitted
    sectors and shrinks exponentially as hbar decreases.
    """
    m = Q(m)
    rows = []
    order_needed = 36
    sads = lame_saddles(m, max(j_max + 2, order_needed))
    vac = sads["vacuum"].coeffs
    S1, S2 = sads["real"].action, sads["imag"].action
    quad_dps = min(dps, 30)
    with mpmath.workdps(dps):
        s1 = mpmath.mpf(S1.numerator) / S1.denominator
        s2 = mpmath.mpf(S2.numerator) / S2.denominator
        a1 = [sads["real"].sector_coeff(j, dps) for j in range(j_max + 1)]
        a2 = [sads["imag"].sector_coeff(j, dps) for j in range(j_max + 1)]
        for hb in hbar_list:
            h = mpmath.mpf(hb)
            lhs = mpmath.mpf(z_quadrature(float(hb), m, dps=quad_dps))
            if n_cut is None:
                terms = {
                    n: abs(mpmath.mpf(c.numerator) / c.denominator) * h ** n
                    for n, c in enumerate(vac[1:], start=1)
                    if c != 0
                }
                nc = min(terms, key=terms.__getitem__)
                nc = min(nc, order_needed - 2)
            else:
                nc = n_cut
            head = mpmath.mpf(0)
            for n in range(nc + 1):
                head += mpmath.mpf(vac[n].numerator) / vac[n].denominator * h ** n
            tail = mpmath.mpf(0)
            amb = mpmath.mpf(0)
            for j in range(j_max + 1):
                p1 = max(nc - j, 0)
                tail += (a1[j] / mpmath.pi) * h ** j * _phi_tail(h / s1, p1)
                tail += (a2[j] / mpmath.pi) * h ** j * _phi_tail(h / s2, p1)
                amb += a1[j] * h ** j
            rhs = head + tail
            ambiguity = float(abs(mpmath.pi * mpmath.exp(-s1 / h) * amb))
            rows.append(
                {
                    "m": float(m),
                    "hbar": float(hb),
                    "n_cut": nc,
                    "j_max": j_max,
                    "lhs": float(lhs),
                    "rhs": float(rhs),
                    "abs_defect": float(abs(lhs - rhs)),
                    "rel_defect": float(abs(lhs - rhs) / abs(lhs)),
                    "imag_ambiguity": ambiguity,
                }
            )
    return rows
