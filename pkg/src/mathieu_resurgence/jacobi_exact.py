"""Exact Taylor expansions of Jacobi elliptic functions over Q[m].

Coefficients are PolyB polynomials in the elliptic parameter m, generated
from the derivative system sn' = cn dn, cn' = -sn dn, dn' = -m sn cn by an
order-by-order convolution recursion.  No floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction as Q

from .series import PolyB, PolySeries

__all__ = [
    "jacobi_taylor",
    "sd_squared_taylor",
    "cn_taylor_flipped",
    "saddle_potential_real",
    "saddle_potential_imag",
]

_M = PolyB((0, 1))  # the parameter m as a polynomial


def jacobi_taylor(order: int) -> tuple[PolySeries, PolySeries, PolySeries]:
    """(sn, cn, dn) about z = 0 to z^order, coefficients in Q[m]."""
    n = order
    s = [PolyB() for _ in range(n + 1)]
    c = [PolyB() for _ in range(n + 1)]
    d = [PolyB() for _ in range(n + 1)]
    c[0] = PolyB.const(1)
    d[0] = PolyB.const(1)

    def conv(a, b, k):
        tot = PolyB()
        for i in range(k + 1):
            if a[i] and b[k - i]:
                tot = tot + a[i] * b[k - i]
        return tot

    for k in range(n):
        inv = Q(1, k + 1)
        s[k + 1] = conv(c, d, k) * inv
        c[k + 1] = -conv(s, d, k) * inv
        d[k + 1] = -_M * conv(s, c, k) * inv
    mk = lambda coeffs: PolySeries("z", n, coeffs)
    return mk(s), mk(c), mk(d)


def sd_squared_taylor(order: int) -> PolySeries:
    """sd^2(z | m) = (sn/dn)^2 about z = 0, exact in Q[m]."""
    sn, _cn, dn = jacobi_taylor(order)
    dn2 = dn * dn
    return sn * sn * dn2.inverse()


def cn_taylor_flipped(order: int) -> PolySeries:
    """cn(z | 1-m) about z = 0 with coefficients re-expressed in Q[m]."""
    _sn, cn, _dn = jacobi_taylor(order)
    flip = PolyB((1, -1))  # m -> 1 - m
    return cn.map_coeffs(lambda p: p.compose(flip))


def saddle_potential_real(order: int) -> PolySeries:
    """sd^2 along the steepest-descent line through the saddle at K(m).

    With z = K(m) + i s, one has sd^2(z | m) = 1 / ((1-m) cn^2(s | 1-m)),
    a real function of s with value 1/(1-m) and curvature +1/(1-m) at s=0.
    Returned as a series in s times the overall 1/(1-m) prefactor kept
    inside the coefficients, which are rational functions ... -- since
    1/(1-m) is not polynomial, coefficients here are in Q[m] *after*
    multiplying through; this function returns (1-m) * sd^2, i.e. the
    series with the 1/(1-m) prefactor stripped.
    """
    cnf = cn_taylor_flipped(order)
    return (cnf * cnf).inverse()


def saddle_potential_imag(order: int) -> PolySeries:
    """-m * sd^2 along the imaginary axis through i K(1-m).

    With z = i (K(1-m) + s), sd^2(z | m) = -cn^2(s | 1-m) / m; the returned
    series is cn^2(s | 1-m), so the potential is -(series)/m.
    """
    cnf = cn_taylor_flipped(order)
    return cnf * cnf
