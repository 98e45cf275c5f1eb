"""Ground-truth numerics for the band problem: Fourier (Hill) matrix band
edges, the ODE-monodromy discriminant, numeric widths, and the plot-ready
spectrum datasets.

Two independent methods are kept on purpose: the plane-wave matrix at Bloch
momentum 0 and 1/2 gives the edges, and the discriminant of the monodromy
over one period gives the same edges as roots of |cos theta| = 1.  Every
asymptotic formula in the package is ultimately tested against these.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from . import tridiag
from .errors import ConvergenceError, DomainError

__all__ = [
    "HillConfig",
    "SpectralPoint",
    "band_edges",
    "discriminant",
    "width_num",
    "figure1_dataset",
    "figure2_dataset",
    "dataset_to_csv",
    "dataset_to_json",
]


@dataclass(frozen=True)
class HillConfig:
    truncation: int = 0  # 0: choose automatically
    potential_scale: float = 1.0  # 0 switches the free-particle test mode on
    dps: int | None = None  # extended-precision tier when set

    def resolve_truncation(self, hbar: float, n_bands: int) -> int:
        if self.truncation:
            if self.truncation < 8:
                raise DomainError("Fourier truncation must be at least 8")
            return self.truncation
        # momenta engaged up to the classical turning scale plus decay margin
        umax = max(1.5, 1.2 + (n_bands + 1) * hbar + (n_bands + 1) ** 2 * hbar ** 2 / 8)
        k_turn = math.sqrt(2 * (umax + 1.5)) / hbar
        return max(10, int(k_turn + 14 + 4 / math.sqrt(hbar)))


@dataclass
class SpectralPoint:
    hbar: float
    N: int
    edge: str  # "bottom" | "top"
    u: float
    converged_digits: int


def _edge_table(hbar: float, n_bands: int, M: int, lam: float, dps):
    """Sorted low eigenvalues of the two Bloch-momentum sectors.

    Returns (bottoms, tops): u-values of band bottoms and tops, 0..n_bands.
    """
    need0 = n_bands + 2
    needh = n_bands + 2

    def sector(kappa: float, howmany: int):
        ks = np.arange(-M, M + 1)
        if dps is None:
            d = (hbar * hbar / 2.0) * (ks + kappa) ** 2
            e = np.full(2 * M, lam / 2.0)
            vals = eigh_tridiagonal(
                d, e, select="i", select_range=(0, howmany - 1), eigvals_only=True
            )
            return list(vals)
        with mpmath.workdps(dps):
            h2 = mpmath.mpf(hbar) ** 2 / 2
            d = [h2 * (mpmath.mpf(int(k)) + mpmath.mpf(kappa)) ** 2 for k in ks]
            e = [mpmath.mpf(lam) / 2] * (2 * M)
            tol = mpmath.mpf(10) ** (-dps + 4) * max(1, abs(d[0]), abs(d[-1]))
            return tridiag.eigenvalues_lowest(d, e, howmany, tol)

    ev0 = sector(0.0, need0)
    evh = sector(0.5, needh)
    # Sturm ordering of edges: periodic sector carries bottom of band 0,
    # then alternately top of odd / bottom of even bands; the antiperiodic
    # sector carries top of even / bottom of odd bands.
    bottoms: dict[int, object] = {}
    tops: dict[int, object] = {}
    for i, v in enumerate(ev0):
        if i == 0 or i % 2 == 0:
            bottoms[i] = v
        else:
            tops[i] = v
    for i, v in enumerate(evh):
        if i % 2 == 0:
            tops[i] = v
        else:
            bottoms[i] = v
    return bottoms, tops


def band_edges(
    hbar: float, N_max: int, cfg: HillConfig | None = None
) -> list[SpectralPoint]:
    """Band edges for bands 0..N_max, with truncation-convergence estimates."""
    cfg = cfg or HillConfig()
    if hbar <= 0:
        raise DomainError("hbar > 0 required")
    M = cfg.resolve_truncation(hbar, N_max)
    lam = cfg.potential_scale
    b_full, t_full = _edge_table(hbar, N_max, M, lam, cfg.dps)
    b_half, t_half = _edge_table(hbar, N_max, max(8, M // 2), lam, cfg.dps)
    out: list[SpectralPoint] = []
    for N in range(N_max + 1):
        for edge, table, table2 in (("bottom", b_full, b_half), ("top", t_full, t_half)):
            u = table[N]
            diff = abs(u - table2[N])
            scale = max(abs(u), 1.0 if cfg.dps is None else mpmath.mpf(1))
            rel = diff / scale
            if cfg.dps is None:
                # cap at the double-precision eigensolver roundoff floor
                digits = 13 if rel == 0 else max(0, min(13, int(-math.log10(float(rel) + 1e-300))))
            else:
                digits = cfg.dps if rel == 0 else max(
                    0, min(cfg.dps, int(-mpmath.log10(rel)))
                )
            if digits < 6:
                raise ConvergenceError(
                    f"band edge not converged at truncation M={M}: ~{digits} digits"
                )
            out.append(
                SpectralPoint(hbar=hbar, N=N, edge=edge, u=float(u) if cfg.dps is None else u,
                              converged_digits=int(digits))
            )
    return out


def discriminant(hbar: float, u: float, cfg: HillConfig | None = None) -> float:
    """cos(theta) = psi_1(x0 + 2 pi) for the monodromy from identity data
    at x0 = -pi (a symmetry point of V = lam cos x), integrated with a
    high-order adaptive explicit scheme.
    """
    cfg = cfg or HillConfig()
    lam = cfg.potential_scale

    def rhs(x, y):
        v = 2.0 * (lam * math.cos(x) - u) / (hbar * hbar)
        return [y[1], v * y[0], y[3], v * y[2]]

    sol = solve_ivp(
        rhs,
        (-math.pi, math.pi),
        [1.0, 0.0, 0.0, 1.0],
        method="DOP853",
        rtol=1e-12,
        atol=1e-13,
        dense_output=False,
    )
    if not sol.success:
        raise ConvergenceError(f"monodromy integration failed: {sol.message}")
    return float(sol.y[0, -1])


def width_num(hbar: float, N: int, kind: str, cfg: HillConfig | None = None) -> dict:
    """Numeric band or gap width from adjacent edges.

    Bands narrower than double precision can resolve are automatically
    recomputed on the extended-precision tier sized from a rough width
    estimate.  Returns {"width", "error_bound"}.
    """
    cfg = cfg or HillConfig()
    if kind not in ("band", "gap"):
        raise DomainError("kind is 'band' or 'gap'")
    if kind == "gap" and N < 1:
        raise DomainError("gap label N >= 1")
    dps = cfg.dps
    if dps is None and kind == "band":
        # size the precision from the leading exponential estimate
        log10w = (
            math.log10(2 * hbar / math.sqrt(2 * math.pi) / math.factorial(N))
            + (N + 0.5) * math.log10(32 / hbar)
            - 8 / hbar * math.log10(math.e)
        )
        if log10w < -9:
            dps = int(-log10w) + 18
    use = HillConfig(truncation=cfg.truncation, potential_scale=cfg.potential_scale, dps=dps)
    pts = band_edges(hbar, N, use)
    table = {(p.N, p.edge): p for p in pts}
    if kind == "band":
        hi, lo = table[(N, "top")], table[(N, "bottom")]
    else:
        hi, lo = table[(N, "bottom")], table[(N - 1, "top")]
    width = hi.u - lo.u
    err = abs(hi.u) * 10.0 ** (-hi.converged_digits) + abs(lo.u) * 10.0 ** (
        -lo.converged_digits
    )
    width = float(width)
    err = float(err)
    if width <= 0:
        raise ConvergenceError("width not resolved: non-positive difference")
    if err > 0.2 * width:
        raise ConvergenceError(
            f"width {width:.3e} below achievable precision (bound {err:.3e})"
        )
    return {"width": width, "error_bound": err, "dps_used": dps}


def figure1_dataset(hbar_grid, N_max: int = 19, cfg: HillConfig | None = None) -> list[dict]:
    """Band edges against hbar: the spectrum overview dataset.

    Rows carry (hbar, Q, N, edge, u, err); the potential extrema u = +-1
    are the natural reference lines and are recorded as metadata rows by
    the CLI serializer.
    """
    rows = []
    for hbar in hbar_grid:
        for p in band_edges(hbar, N_max, cfg):
            rows.append(
                {
                    "hbar": p.hbar,
                    "Q": 4 / p.hbar ** 2,
                    "N": p.N,
                    "edge": p.edge,
                    "u": float(p.u),
                    "err": 10.0 ** (-p.converged_digits),
                }
            )
    return rows


def figure2_dataset(Q_grid, N_max: int = 12, cfg: HillConfig | None = None) -> list[dict]:
    """Band edges against Q = 4/hbar^2 near the barrier top u = 1."""
    rows = []
    for Qv in Q_grid:
        hbar = 2 / math.sqrt(Qv)
        for p in band_edges(hbar, N_max, cfg):
            rows.append(
                {
                    "hbar": hbar,
                    "Q": Qv,
                    "N": p.N,
                    "edge": p.edge,
                    "u": float(p.u),
                    "err": 10.0 ** (-p.converged_digits),
                }
            )
    return rows


def crossing_Q(N: int, edge: str, cfg: HillConfig | None = None,
               u_target: float = 1.0) -> float:
    """Q at which the requested edge of band N crosses u_target (= 1)."""
    lo_Q = math.pi ** 2 / 16 * max(N - 0.75, 0.05) ** 2
    hi_Q = math.pi ** 2 / 16 * (N + 0.75) ** 2

    def u_of_Q(Qv: float) -> float:
        hbar = 2 / math.sqrt(Qv)
        pts = band_edges(hbar, N, cfg)
        for p in pts:
            if p.N == N and p.edge == edge:
                return float(p.u)
        raise ConvergenceError("edge not found")

    flo, fhi = u_of_Q(lo_Q) - u_target, u_of_Q(hi_Q) - u_target
    if flo * fhi > 0:
        raise ConvergenceError("crossing not bracketed")
    for _ in range(60):
        mid = 0.5 * (lo_Q + hi_Q)
        fm = u_of_Q(mid) - u_target
        if flo * fm <= 0:
            hi_Q, fhi = mid, fm
        else:
            lo_Q, flo = mid, fm
    return 0.5 * (lo_Q + hi_Q)


def dataset_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["hbar", "Q", "N", "edge", "u", "err"])
    for r in rows:
        writer.writerow(
            [
                _fmt17(r["hbar"]),
                _fmt17(r["Q"]),
                r["N"],
                r["edge"],
                _fmt17(r["u"]),
                _fmt17(r["err"]),
            ]
        )
    return buf.getvalue()


def dataset_to_json(rows: list[dict], metadata: dict | None = None) -> str:
    payload = {"metadata": metadata or {}, "rows": rows}
    return json.dumps(payload, sort_keys=True, default=_fmt17)


def _fmt17(x) -> str:
    return format(float(x), ".17g")
