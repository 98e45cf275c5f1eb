import json
import math

import pytest

from mathieu_resurgence.errors import ConvergenceError, DomainError
from mathieu_resurgence.oracle import (
    HillConfig,
    band_edges,
    crossing_Q,
    dataset_to_csv,
    dataset_to_json,
    discriminant,
    figure1_dataset,
    figure2_dataset,
    width_num,
)


class TestBandEdges:
    def test_free_particle(self):
        pts = band_edges(1.0, 5, HillConfig(potential_scale=0.0))
        for p in pts:
            want = p.N**2 / 8 if p.edge == "bottom" else (p.N + 1) ** 2 / 8
            assert float(p.u) == pytest.approx(want, abs=1e-12)

    def test_weak_coupling_band_center(self):
        from fractions import Fraction as Q

        from mathieu_resurgence.spectral import u_pert

        pts = {(p.N, p.edge): p.u for p in band_edges(0.5, 0)}
        center = (pts[(0, "bottom")] + pts[(0, "top")]) / 2
        assert center == pytest.approx(float(u_pert(10)(0.5, Q(1, 2))), abs=1e-8)

    def test_strong_coupling_edges_match_series(self):
        from mathieu_resurgence.spectral import gap_edge_series

        tb = {(p.N, p.edge): p.u for p in band_edges(6.0, 2)}
        ge = gap_edge_series(1, 10)
        assert abs(tb[(0, "top")] / ge.u_lower(6.0) - 1) <= 1e-6
        assert abs(tb[(1, "bottom")] / ge.u_upper(6.0) - 1) <= 1e-6

    def test_interlacing(self):
        pts = band_edges(1.3, 6)
        tb = {(p.N, p.edge): p.u for p in pts}
        for N in range(6):
            assert tb[(N, "bottom")] < tb[(N, "top")]
            if N:
                assert tb[(N - 1, "top")] <= tb[(N, "bottom")]

    def test_truncation_doubling_invariant(self):
        base = band_edges(0.8, 3, HillConfig(truncation=24))
        double = band_edges(0.8, 3, HillConfig(truncation=48))
        for p, q in zip(base, double):
            assert abs(p.u - q.u) < 10.0 ** (-p.converged_digits)

    def test_shift_convention_spectrum_invariant(self):
        # V = +cos x and V = -cos x give the same spectrum
        plus = band_edges(0.9, 3, HillConfig(potential_scale=1.0))
        minus = band_edges(0.9, 3, HillConfig(potential_scale=-1.0))
        for p, q in zip(plus, minus):
            assert p.u == pytest.approx(q.u, abs=1e-11)

    def test_small_truncation_rejected(self):
        with pytest.raises(DomainError):
            band_edges(1.0, 2, HillConfig(truncation=4))


class TestDiscriminant:
    def test_free_particle_closed_form(self):
        cfg = HillConfig(potential_scale=0.0)
        for u in (0.5, 1.3):
            want = math.cos(2 * math.pi * math.sqrt(2 * u) / 1.0)
            assert discriminant(1.0, u, cfg) == pytest.approx(want, abs=1e-10)

    def test_edge_roots_match_matrix_edges(self):
        hbar = 0.5
        tb = {(p.N, p.edge): p.u for p in band_edges(hbar, 0)}

        def root(target, lo, hi):
            f = lambda x: discriminant(hbar, x) - target
            flo = f(lo)
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            return 0.5 * (lo + hi)

        lo_edge = tb[(0, "bottom")]
        got = root(1.0, lo_edge - 5e-7, lo_edge + 3e-7)
        assert abs(got - lo_edge) <= 1e-9

    def test_gap_has_magnitude_above_one(self):
        tb = {(p.N, p.edge): p.u for p in band_edges(0.5, 1)}
        mid_gap = (tb[(0, "top")] + tb[(1, "bottom")]) / 2
        assert abs(discriminant(0.5, mid_gap)) > 1

    def test_edge_type_alternation(self):
        # periodic/antiperiodic edges alternate with N: D at bottom of band N
        # is +1 for even N, -1 for odd N
        hbar = 1.5
        tb = {(p.N, p.edge): p.u for p in band_edges(hbar, 2)}
        assert discriminant(hbar, tb[(0, "bottom")]) == pytest.approx(1.0, abs=1e-6)
        assert discriminant(hbar, tb[(1, "bottom")]) == pytest.approx(-1.0, abs=1e-6)
        assert discriminant(hbar, tb[(2, "bottom")]) == pytest.approx(1.0, abs=1e-6)


class TestWidths:
    def test_band_width_against_asymptotics(self):
        import warnings

        from mathieu_resurgence.widths import band_width

        got = width_num(0.5, 0, "band")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = band_width(0.5, 0, order=3).with_fluctuations
        assert abs(est / got["width"] - 1) < 0.05

    def test_gap_width_against_asymptotics(self):
        from mathieu_resurgence.widths import gap_width

        got = width_num(6.0, 2, "gap")
        assert abs(gap_width(6.0, 2).leading / got["width"] - 1) < 0.10

    def test_extended_precision_engages(self):
        out = width_num(0.3, 0, "band")
        assert out["dps_used"] is not None
        assert out["width"] == pytest.approx(1.2534757464e-11, rel=1e-6)
        assert out["error_bound"] < 1e-3 * out["width"]

    def test_equal_band_gap_widths_near_top(self):
        wb = width_num(2.0, 1, "band")["width"]
        wg = width_num(2.0, 1, "gap")["width"]
        assert 0.5 < wb / wg < 2.0

    def test_kind_validation(self):
        with pytest.raises(DomainError):
            width_num(1.0, 0, "gap")
        with pytest.raises(DomainError):
            width_num(1.0, 0, "ridge")


class TestCrossings:
    def test_gap_edge_crossings_match_quarter_shifts(self):
        for N in (3, 6):
            q_lower = crossing_Q(N - 1, "top")
            q_upper = crossing_Q(N, "bottom")
            assert abs(q_lower / (math.pi**2 / 16 * (N - 0.25) ** 2) - 1) < 0.02
            assert abs(q_upper / (math.pi**2 / 16 * (N + 0.25) ** 2) - 1) < 0.02


class TestDatasets:
    def test_figure1_rows(self):
        rows = figure1_dataset([0.8, 1.2], N_max=4)
        assert len(rows) == 2 * 2 * 5
        for r in rows:
            assert set(r) == {"hbar", "Q", "N", "edge", "u", "err"}
        # monotone interlacing per hbar
        for h in (0.8, 1.2):
            seq = [r["u"] for r in rows if r["hbar"] == h]
            assert seq == sorted(seq)

    def test_figure2_rows(self):
        rows = figure2_dataset([10.0], N_max=4)
        assert all(abs(r["Q"] - 10.0) < 1e-12 for r in rows)

    def test_csv_shape_and_17_digits(self):
        rows = figure1_dataset([0.9], N_max=1)
        text = dataset_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "hbar,Q,N,edge,u,err"
        cell = lines[1].split(",")[4]
        assert len(cell.replace("-", "").replace(".", "").lstrip("0")) >= 15

    def test_json_mirrors_csv(self):
        rows = figure1_dataset([0.9], N_max=1)
        payload = json.loads(dataset_to_json(rows, metadata={"u_lines": [-1, 1]}))
        assert payload["metadata"]["u_lines"] == [-1, 1]
        assert len(payload["rows"]) == len(rows)

    def test_determinism(self):
        a = dataset_to_csv(figure1_dataset([0.7, 1.1], N_max=3))
        b = dataset_to_csv(figure1_dataset([0.7, 1.1], N_max=3))
        assert a == b
