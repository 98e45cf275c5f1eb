"""Exact-rational formal algebra: polynomials in B, truncated one-variable
series with polynomial coefficients, and trans-series containers.

Everything here is closed over ``fractions.Fraction``; no floating point
enters any arithmetic path.  Binary operations truncate to the minimum
order of their operands, so precision loss is always explicit.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

from .errors import StructureError, TruncationError

Q = Fraction
QLike = Union[int, Fraction]

__all__ = [
    "Q",
    "PolyB",
    "PolySeries",
    "TransSeries",
    "transseries_substitute",
    "series_arith",
    "series_reversion",
    "series_exp",
    "series_log",
]


def _as_q(x: QLike) -> Q:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Q(x)
    raise TypeError(f"exact coefficient expected, got {type(x).__name__}")


class PolyB:
    """Polynomial in the band variable B = N + 1/2 over the rationals.

    Trailing zero coefficients are trimmed on construction, so ``degree``
    is well defined (-1 for the zero polynomial).
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[QLike] = ()):
        c = [_as_q(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[Q, ...] = tuple(c)

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, x: QLike) -> "PolyB":
        return cls((x,))

    @classmethod
    def var(cls) -> "PolyB":
        return cls((0, 1))

    # -- structure ----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def const_value(self) -> Q:
        if not self.is_const():
            raise StructureError(f"polynomial {self} is not constant")
        return self.c[0] if self.c else Q(0)

    def __getitem__(self, k: int) -> Q:
        return self.c[k] if 0 <= k < len(self.c) else Q(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyB):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self == PolyB.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __bool__(self) -> bool:
        return bool(self.c)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "PolyB | QLike") -> "PolyB":
        o = other if isinstance(other, PolyB) else PolyB.const(other)
        n = max(len(self.c), len(o.c))
        return PolyB(self[k] + o[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "PolyB":
        return PolyB(-x for x in self.c)

    def __sub__(self, other: "PolyB | QLike") -> "PolyB":
        return self + (-(other if isinstance(other, PolyB) else PolyB.const(other)))

    def __rsub__(self, other: QLike) -> "PolyB":
        return PolyB.const(other) - self

    def __mul__(self, other: "PolyB | QLike") -> "PolyB":
        if isinstance(other, (int, Fraction)):
            q = _as_q(other)
            return PolyB(x * q for x in self.c)
        out = [Q(0)] * (len(self.c) + len(other.c))
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return PolyB(out)

    __rmul__ = __mul__

    def __truediv__(self, other: QLike) -> "PolyB":
        q = _as_q(other)
        return PolyB(x / q for x in self.c)

    def __pow__(self, n: int) -> "PolyB":
        if n < 0:
            raise ValueError("negative polynomial power")
        out, base = PolyB.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "PolyB":
        return PolyB(k * self.c[k] for k in range(1, len(self.c)))

    def compose(self, inner: "PolyB") -> "PolyB":
        """p(inner(B)) by Horner."""
        out = PolyB()
        for a in reversed(self.c):
            out = out * inner + a
        return out

    def shift(self, a: QLike) -> "PolyB":
        """p(B + a)."""
        return self.compose(PolyB((a, 1)))

    def __call__(self, x):
        """Evaluate at x (Fraction for exact work, float/mpf for numerics)."""
        out = x * 0
        for a in reversed(self.c):
            out = out * x + a
        return out

    def __repr__(self) -> str:
        if not self.c:
            return "PolyB(0)"
        terms = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            if k == 0:
                terms.append(str(a))
            elif k == 1:
                terms.append(f"{a}*B")
            else:
                terms.append(f"{a}*B^{k}")
        return "PolyB(" + " + ".join(terms) + ")"


_ZERO = PolyB()
_ONE = PolyB.const(1)


class PolySeries:
    """Truncated power series in one small variable with PolyB coefficients.

    ``var`` is a bookkeeping tag ("hbar", "u+1", "1/u2", ...); operations on
    series with different tags are refused.  Arithmetic truncates to the
    minimum truncation order of the operands.
    """

    __slots__ = ("var", "order", "c")

    def __init__(self, var: str, order: int, coeffs: Iterable[PolyB | QLike] = ()):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cl = [x if isinstance(x, PolyB) else PolyB.const(x) for x in coeffs]
        if len(cl) > order + 1:
            raise ValueError("more coefficients than truncation order allows")
        cl += [_ZERO] * (order + 1 - len(cl))
        self.var = var
        self.order = order
        self.c: tuple[PolyB, ...] = tuple(cl)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, var: str, order: int) -> "PolySeries":
        return cls(var, order)

    @classmethod
    def const(cls, var: str, order: int, x: PolyB | QLike) -> "PolySeries":
        return cls(var, order, (x,))

    @classmethod
    def identity(cls, var: str, order: int) -> "PolySeries":
        """The series 'var' itself."""
        return cls(var, order, (0, 1))

    # -- structure ----------------------------------------------------
    def __getitem__(self, n: int) -> PolyB:
        if n < 0:
            return _ZERO
        if n > self.order:
            raise TruncationError(
                f"order {n} beyond stored truncation {self.order} for {self.var}-series"
            )
        return self.c[n]

    def coeff(self, n: int) -> PolyB:
        return self[n]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolySeries):
            return NotImplemented
        return (
            self.var == other.var
            and self.order == other.order
            and self.c == other.c
        )

    def __hash__(self) -> int:
        return hash((self.var, self.order, self.c))

    def _check_var(self, other: "PolySeries") -> None:
        if self.var != other.var:
            raise StructureError(
                f"variable tag mismatch: {self.var!r} vs {other.var!r}"
            )

    def truncate(self, order: int) -> "PolySeries":
        order = min(order, self.order)
        return PolySeries(self.var, order, self.c[: order + 1])

    def extend_zero(self, order: int) -> "PolySeries":
        """Pad with explicit zero coefficients up to ``order`` (use only when
        the higher coefficients are known to vanish identically)."""
        if order <= self.order:
            return self.truncate(order)
        return PolySeries(self.var, order, self.c)

    def map_coeffs(self, f: Callable[[PolyB], PolyB]) -> "PolySeries":
        return PolySeries(self.var, self.order, (f(p) for p in self.c))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "PolySeries | PolyB | QLike") -> "PolySeries":
        if not isinstance(other, PolySeries):
            other = PolySeries.const(self.var, self.order, other)
        self._check_var(other)
        n = min(self.order, other.order)
        return PolySeries(self.var, n, (self.c[k] + other.c[k] for k in range(n + 1)))

    __radd__ = __add__

    def __neg__(self) -> "PolySeries":
        return PolySeries(self.var, self.order, (-p for p in self.c))

    def __sub__(self, other) -> "PolySeries":
        if not isinstance(other, PolySeries):
            other = PolySeries.const(self.var, self.order, other)
        return self + (-other)

    def __rsub__(self, other) -> "PolySeries":
        return (-self) + other

    def __mul__(self, other: "PolySeries | PolyB | QLike") -> "PolySeries":
        if isinstance(other, (int, Fraction, PolyB)):
            o = other if isinstance(other, PolyB) else PolyB.const(other)
            return PolySeries(self.var, self.order, (p * o for p in self.c))
        self._check_var(other)
        n = min(self.order, other.order)
        out = [_ZERO] * (n + 1)
        for i in range(min(len(self.c), n + 1)):
            a = self.c[i]
            if a.is_zero():
                continue
            for j in range(min(len(other.c), n + 1 - i)):
                b = other.c[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return PolySeries(self.var, n, out)

    __rmul__ = __mul__

    def __truediv__(self, other: QLike) -> "PolySeries":
        q = _as_q(other)
        return PolySeries(self.var, self.order, (p / q for p in self.c))

    def __pow__(self, n: int) -> "PolySeries":
        if n < 0:
            raise ValueError("negative series power; use inverse() first")
        out = PolySeries.const(self.var, self.order, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_powers(self, k: int) -> "PolySeries":
        """Multiply by var**k (k >= 0), keeping the truncation order."""
        if k < 0:
            raise ValueError("negative power shift")
        return PolySeries(self.var, self.order, (_ZERO,) * k + self.c[: self.order + 1 - k])

    def inverse(self) -> "PolySeries":
        """Multiplicative inverse; constant term must be a nonzero rational."""
        a0 = self.c[0].const_value()
        if a0 == 0:
            raise StructureError("series has zero constant term, not invertible")
        out = [PolyB.const(1 / a0)]
        for n in range(1, self.order + 1):
            s = _ZERO
            for k in range(1, n + 1):
                s = s + self.c[k] * out[n - k] if k < len(self.c) else s
            out.append(s * Q(-1, 1) / a0)
        return PolySeries(self.var, self.order, out)

    def compose(self, inner: "PolySeries") -> "PolySeries":
        """self(inner); inner must have zero constant term."""
        self._check_var(inner)
        if not inner.c[0].is_zero():
            raise StructureError("composition requires zero constant term")
        n = min(self.order, inner.order)
        out = PolySeries.zero(self.var, n)
        for a in reversed(self.c[: n + 1]):
            out = out * inner.truncate(n) + a
        return out

    def reversion(self) -> "PolySeries":
        """Compositional inverse g with self(g) = identity.

        Requires zero constant term and a nonzero *constant* linear
        coefficient (so the inverse stays polynomial in B).
        """
        if not self.c[0].is_zero():
            raise StructureError("reversion requires zero constant term")
        if self.order < 1:
            raise TruncationError("reversion needs at least order 1")
        a1 = self.c[1].const_value()
        if a1 == 0:
            raise StructureError("reversion requires invertible linear coefficient")
        n = self.order
        g = PolySeries(self.var, n, (0, 1 / a1))
        # Newton-free order raising: enforce self(g) = x coefficient by coefficient.
        for k in range(2, n + 1):
            resid = self.compose(g)
            # f(g)(x) = x + c_k x^k + ...; correct g by -c_k/a1 x^k.
            ck = resid.c[k]
            if not ck.is_zero():
                corr = PolySeries(self.var, n)
                corr = corr + PolySeries(self.var, n, (_ZERO,) * k + (ck * Q(-1) / a1,))
                g = g + corr
        return g

    def derivative_var(self) -> "PolySeries":
        """d/d(var); output truncation drops by one order."""
        if self.order == 0:
            return PolySeries.zero(self.var, 0)
        return PolySeries(
            self.var, self.order - 1, (self.c[k] * k for k in range(1, self.order + 1))
        )

    def derivative_B(self) -> "PolySeries":
        """Coefficient-wise d/dB."""
        return self.map_coeffs(lambda p: p.derivative())

    def integrate_var(self) -> "PolySeries":
        """Termwise antiderivative with zero constant; order rises by one."""
        out = [_ZERO]
        for k in range(0, self.order + 1):
            out.append(self.c[k] / Q(k + 1))
        return PolySeries(self.var, self.order + 1, out)

    def exp(self) -> "PolySeries":
        """exp(series); constant term must vanish."""
        if not self.c[0].is_zero():
            raise StructureError("series_exp requires zero constant term")
        out = [_ONE]
        # e' = f' e  =>  (n+1) e_{n+1} = sum_{k} (k+1) f_{k+1} e_{n-k}
        for n in range(self.order):
            s = _ZERO
            for k in range(n + 1):
                fk = self.c[k + 1] * (k + 1)
                if not fk.is_zero():
                    s = s + fk * out[n - k]
            out.append(s / Q(n + 1))
        return PolySeries(self.var, self.order, out)

    def log(self) -> "PolySeries":
        """log(series); constant term must be exactly 1."""
        if self.c[0] != _ONE:
            raise StructureError("series_log requires constant term 1")
        # l' = f'/f  =>  solve f * l' = f' as convolution.
        lp = [self.c[1] if self.order >= 1 else _ZERO]  # l'_0 = f_1
        for n in range(1, self.order):
            s = self.c[n + 1] * (n + 1)
            for k in range(1, n + 1):
                s = s - self.c[k] * lp[n - k]
            lp.append(s)
        out = [_ZERO]
        for n, d in enumerate(lp):
            out.append(d / Q(n + 1))
        return PolySeries(self.var, self.order, out[: self.order + 1])

    def eval_at_B(self, b: QLike) -> "PolySeries":
        """Substitute a rational value for B in every coefficient."""
        q = _as_q(b)
        return self.map_coeffs(lambda p: PolyB.const(p(q)))

    def __call__(self, x, b=None):
        """Numerical evaluation at var=x (and optionally B=b)."""
        out = x * 0
        for p in reversed(self.c):
            pv = p(b) if b is not None else p.const_value()
            out = out * x + pv
        return out

    def __repr__(self) -> str:
        terms = [f"({p!r})*{self.var}^{k}" for k, p in enumerate(self.c) if not p.is_zero()]
        body = " + ".join(terms) if terms else "0"
        return f"PolySeries[{self.var}; O({self.var}^{self.order + 1})]({body})"

    # -- serialization ------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "variable": self.var,
            "order": self.order,
            "coeffs": [[[str(x.numerator), str(x.denominator)] for x in p.c] for p in self.c],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "PolySeries":
        coeffs = [
            PolyB(Q(int(num), int(den)) for num, den in p) for p in d["coeffs"]
        ]
        return cls(d["variable"], int(d["order"]), coeffs)

    @classmethod
    def from_json(cls, s: str) -> "PolySeries":
        return cls.from_json_dict(json.loads(s))


def poly_eval_series(p: PolyB, s: PolySeries) -> PolySeries:
    """Evaluate a PolyB at a PolySeries argument (Horner over the series ring)."""
    out = PolySeries.zero(s.var, s.order)
    for a in reversed(p.c):
        out = out * s + a
    return out


def series_arith(a: PolySeries, b: PolySeries, op: str) -> PolySeries:
    """Named-dispatch surface over the ring operations: add | mul | compose."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown series operation {op!r}")


def series_reversion(f: PolySeries) -> PolySeries:
    return f.reversion()


def series_exp(f: PolySeries) -> PolySeries:
    return f.exp()


def series_log(f: PolySeries) -> PolySeries:
    return f.log()


class TransSeries:
    """Finite trans-series: sum over sectors (k, l) of

        sigma^k * (ln[-1/hbar])^l * hbar^shift(k,l) * PolySeries(hbar)

    with trans-monomial sigma = hbar^-(N+1/2) exp(-S/hbar).  The log branch
    ln(-1/hbar) = ln(1/hbar) -+ i pi is kept symbolic; ``branch`` records the
    lateral continuation (+1 or -1) and is never expanded to a float here.
    """

    __slots__ = ("action", "sectors", "shifts", "branch")

    def __init__(
        self,
        action: QLike,
        sectors: Mapping[tuple[int, int], PolySeries],
        shifts: Mapping[tuple[int, int], int] | None = None,
        branch: int = +1,
    ):
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        self.action = _as_q(action)
        sec = {}
        shf = {}
        for (k, l), s in sectors.items():
            if k < 0 or l < 0:
                raise StructureError("sector indices must be non-negative")
            if l > max(k - 1, 0):
                raise StructureError(
                    f"log power l={l} exceeds max(k-1,0) in sector k={k}"
                )
            if s.is_zero():
                continue
            sec[(k, l)] = s
            shf[(k, l)] = (shifts or {}).get((k, l), 0)
        self.sectors = dict(sorted(sec.items()))
        self.shifts = {key: shf[key] for key in self.sectors}
        self.branch = branch

    def sector(self, k: int, l: int = 0) -> PolySeries | None:
        return self.sectors.get((k, l))

    @property
    def perturbative(self) -> PolySeries | None:
        return self.sector(0, 0)

    def _check_compat(self, other: "TransSeries") -> None:
        if self.action != other.action or self.branch != other.branch:
            raise StructureError("trans-series action/branch mismatch")

    def __add__(self, other: "TransSeries") -> "TransSeries":
        self._check_compat(other)
        keys = set(self.sectors) | set(other.sectors)
        sec, shf = {}, {}
        for key in keys:
            a, b = self.sectors.get(key), other.sectors.get(key)
            if a is not None and b is not None:
                if self.shifts[key] != other.shifts[key]:
                    raise StructureError("incompatible hbar shifts in sector sum")
                sec[key], shf[key] = a + b, self.shifts[key]
            elif a is not None:
                sec[key], shf[key] = a, self.shifts[key]
            else:
                sec[key], shf[key] = b, other.shifts[key]
        return TransSeries(self.action, sec, shf, self.branch)

    def __mul__(self, other: "TransSeries | PolySeries | PolyB | QLike") -> "TransSeries":
        if isinstance(other, (int, Fraction, PolyB, PolySeries)):
            sec = {key: s * other for key, s in self.sectors.items()}
            return TransSeries(self.action, sec, self.shifts, self.branch)
        self._check_compat(other)
        sec: dict[tuple[int, int], PolySeries] = {}
        shf: dict[tuple[int, int], int] = {}
        for (k1, l1), s1 in self.sectors.items():
            for (k2, l2), s2 in other.sectors.items():
                key = (k1 + k2, l1 + l2)
                shift = self.shifts[(k1, l1)] + other.shifts[(k2, l2)]
                prod = s1 * s2
                if key in sec:
                    if shf[key] != shift:
                        raise StructureError("incompatible hbar shifts in sector product")
                    sec[key] = sec[key] + prod
                else:
                    sec[key], shf[key] = prod, shift
        return TransSeries(self.action, sec, shf, self.branch)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransSeries):
            return NotImplemented
        return (
            self.action == other.action
            and self.branch == other.branch
            and self.sectors == other.sectors
            and self.shifts == other.shifts
        )

    def to_json_dict(self) -> dict:
        return {
            "instanton_action": [str(self.action.numerator), str(self.action.denominator)],
            "branch": self.branch,
            "sectors": [
                {
                    "k": k,
                    "l": l,
                    "hbar_shift": self.shifts[(k, l)],
                    "series": s.to_json_dict(),
                }
                for (k, l), s in self.sectors.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "TransSeries":
        sec = {}
        shf = {}
        for entry in d["sectors"]:
            key = (int(entry["k"]), int(entry["l"]))
            sec[key] = PolySeries.from_json_dict(entry["series"])
            shf[key] = int(entry["hbar_shift"])
        num, den = d["instanton_action"]
        return cls(Q(int(num), int(den)), sec, shf, int(d["branch"]))


def transseries_substitute(u: PolySeries, dnu: TransSeries) -> TransSeries:
    """Expand u(N + delta-nu) where u is a series with PolyB coefficients in nu.

    The sector (0,0) of ``dnu`` must vanish: delta-nu is purely
    non-perturbative.  The result's (0,0) sector is u itself (nu -> N), and
    its (1,0) sector is (du/dnu) * dnu_(1,0), etc., from the exact Taylor
    expansion of the polynomial coefficients.
    """
    if dnu.perturbative is not None:
        raise StructureError("delta-nu must have empty perturbative sector")
    max_k = max((k for (k, _l) in dnu.sectors), default=0)
    # Highest useful Taylor depth: polynomial degree caps it too.
    max_deg = max((p.degree for p in u.c), default=0)
    depth = min(max_deg, max_k) if dnu.sectors else 0

    one = TransSeries(dnu.action, {(0, 0): PolySeries.const(u.var, u.order, 1)},
                      branch=dnu.branch)
    out = TransSeries(dnu.action, {(0, 0): u}, branch=dnu.branch)
    dpow = one
    fact = 1
    deriv = u
    for j in range(1, depth + 1):
        dpow = dpow * dnu
        fact *= j
        deriv = deriv.derivative_B()
        term = dpow * (deriv / Q(fact))
        out = out + term
    return out
