import math

import numpy as np
import pytest

from zetapair.special import TWO_PI
from zetapair.zeros import (
    IncompleteEnumerationError,
    ZeroList,
    ZeroTableFormatError,
    compute_zeros,
    counting_check,
    gram_point,
    load_zeros,
    rs_theta,
    save_zeros,
    smooth_count,
    unfold,
    zfunc,
)


class TestIngestion:
    def test_three_line_table(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("# comment\n14.134725\n\n21.022040\n25.010858\n")
        zl = load_zeros(p)
        assert len(zl) == 3
        assert zl.source == "ingested"
        assert zl.range == (14.134725, 25.010858)

    def test_offset_header(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("#offset 1000.0\n0.5\n1.5\n")
        zl = load_zeros(p)
        assert np.allclose(zl.ordinates, [1000.5, 1001.5])

    def test_empty_file_is_error(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("# nothing\n")
        with pytest.raises(ZeroTableFormatError):
            load_zeros(p)

    def test_out_of_order_names_line(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("14.1\n21.0\n20.9\n25.0\n")
        with pytest.raises(ZeroTableFormatError) as err:
            load_zeros(p)
        assert err.value.line == 3

    def test_unparsable_line(self, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("14.1\nbogus\n")
        with pytest.raises(ZeroTableFormatError) as err:
            load_zeros(p)
        assert err.value.line == 2

    def test_fixture_is_complete(self, zero_fixture_path):
        zl = load_zeros(zero_fixture_path)
        assert len(zl) == 100
        assert zl.claimed_complete

    def test_save_load_roundtrip(self, tmp_path, zero_fixture_path):
        zl = load_zeros(zero_fixture_path)
        path = save_zeros(zl, tmp_path / "out.txt")
        again = load_zeros(path)
        assert np.max(np.abs(again.ordinates - zl.ordinates)) < 1e-10


class TestComputation:
    def test_count_below_100(self, zeros_low):
        sel = zeros_low.ordinates[zeros_low.ordinates <= 100.0]
        assert len(sel) == 29
        smooth = (100 / TWO_PI) * math.log(100 / (TWO_PI * math.e)) + 7.0 / 8.0
        assert abs(len(sel) - smooth) < 1.0

    def test_first_zero_against_fixture(self, zeros_low, zero_fixture_path):
        table = load_zeros(zero_fixture_path)
        assert abs(zeros_low.ordinates[0] - table.ordinates[0]) < 1e-6
        assert abs(zeros_low.ordinates[0] - 14.134725) < 1e-6

    def test_overlap_with_ingested_table(self, zeros_low, zero_fixture_path):
        table = load_zeros(zero_fixture_path)
        mine = zeros_low.ordinates[: len(table)]
        assert np.max(np.abs(mine - table.ordinates)) < 1e-6

    def test_z_sign_changes_between_zeros(self, zeros_low):
        zs = zeros_low.ordinates[:40]
        mids = 0.5 * (zs[:-1] + zs[1:])
        signs = np.sign(zfunc(mids))
        assert np.all(signs[1:] * signs[:-1] < 0)

    def test_subrange_reproducibility(self, zeros_low):
        sub = compute_zeros(100.0, 200.0)
        ref = zeros_low.ordinates[
            (zeros_low.ordinates > 100.0) & (zeros_low.ordinates <= 200.0)
        ]
        assert len(sub) == len(ref)
        assert np.max(np.abs(sub.ordinates - ref)) < 1e-9

    def test_envelope_validated(self):
        with pytest.raises(ValueError):
            compute_zeros(5.0, 100.0)
        with pytest.raises(ValueError):
            compute_zeros(100.0, 2e5)
        with pytest.raises(ValueError):
            compute_zeros(100.0, 50.0)

    def test_gram_points_interleave_low_zeros(self, zeros_low):
        gs = np.array([gram_point(n) for n in range(-1, 30)])
        assert abs(rs_theta(gs[0]) + math.pi) < 1e-9
        # Gram's law usually holds down here: one zero per Gram interval
        hits = np.searchsorted(zeros_low.ordinates, gs)
        assert np.all(np.diff(hits)[:20] >= 0)


class TestCounting:
    def test_computed_range_consistent(self, zeros_low):
        rep = counting_check(zeros_low)
        assert abs(rep.discrepancy) <= 1.0
        assert not rep.flagged

    def test_smooth_count_value(self):
        assert smooth_count(100.0) == pytest.approx(29.0, abs=0.2)

    def test_degenerate_range(self):
        zl = ZeroList(np.array([50.0]), (50.0, 50.0), "ingested", False)
        rep = counting_check(zl)
        assert rep.expected == 0.0

    def test_truncated_table_flagged(self, tmp_path, zeros_low):
        decimated = ZeroList(
            zeros_low.ordinates[::2], zeros_low.range, "ingested", False
        )
        rep = counting_check(decimated)
        assert rep.flagged


class TestUnfold:
    def test_identity_scaling_where_density_is_one(self):
        # dbar(E) = 1 at E = 2 pi e^(2 pi); unfolding there rescales by 1
        center = TWO_PI * math.exp(TWO_PI)
        zl = ZeroList(
            np.array([3000.0, 3100.0, center, 3500.0]),
            (2990.0, 3600.0),
            "ingested",
            False,
        )
        x = unfold(zl, center)
        assert np.allclose(x, zl.ordinates, rtol=1e-12)

    def test_order_preserved_and_mean_gap(self, zeros_low):
        x = unfold(zeros_low, 500.0)
        assert np.all(np.diff(x) > 0)
        window = x[(zeros_low.ordinates > 400) & (zeros_low.ordinates < 600)]
        assert np.mean(np.diff(window)) == pytest.approx(1.0, abs=0.05)

    def test_empty_rejected(self):
        zl = ZeroList(np.array([20.0]), (10.0, 30.0), "ingested", False)
        with pytest.raises(ValueError):
            unfold(zl, 40.0)


class TestHighRange:
    def test_count_matches_smooth(self, zeros_high):
        rep = counting_check(zeros_high)
        assert abs(rep.discrepancy) <= 2.0

    def test_close_pair_resolved(self, zeros_high):
        sel = zeros_high.ordinates[
            (zeros_high.ordinates > 7005.0) & (zeros_high.ordinates < 7005.2)
        ]
        assert len(sel) == 2
        assert sel[1] - sel[0] < 0.05

    def test_unfolded_spacing_mean(self, zeros_high):
        x = unfold(zeros_high, 7500.0)
        assert abs(np.mean(np.diff(x)) - 1.0) <= 0.02
