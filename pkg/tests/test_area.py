"""Sagittal gap to area function, constriction detection, trace export."""

import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tractforge.area import (
    compute_diameters,
    detect_constriction,
    diameters_to_areas,
    station_centers,
    write_area_trace,
)
from tractforge.config import AreaConfig
from tractforge.errors import BadDimension, DomainMismatch


class FlatCurve:
    """Constant-height stand-in for palate or tongue surfaces."""

    def __init__(self, height, length=17.5):
        self.h = height
        self.length = length

    def height(self, xs):
        return np.full_like(np.asarray(xs, dtype=float), self.h)

    def evaluate(self, xs):
        return self.height(xs)


class TestStationCenters:
    def test_centers_of_equal_slices(self):
        c = station_centers(8.0, 4)
        assert np.allclose(c, [1.0, 3.0, 5.0, 7.0])

    def test_count(self):
        assert len(station_centers(17.5, 44)) == 44


class TestComputeDiameters:
    def test_tongue_on_floor_gives_palate_height(self):
        d = compute_diameters(FlatCurve(2.0), FlatCurve(0.0), 44)
        assert np.allclose(d, 2.0)

    def test_tongue_at_palate_seals(self):
        d = compute_diameters(FlatCurve(2.0), FlatCurve(2.0), 44)
        assert np.allclose(d, 0.0)

    def test_half_gap(self):
        d = compute_diameters(FlatCurve(2.0), FlatCurve(1.5), 44)
        assert np.allclose(d, 0.5)

    def test_tongue_above_palate_clamps_to_zero(self):
        d = compute_diameters(FlatCurve(1.0), FlatCurve(1.5), 44)
        assert np.allclose(d, 0.0)

    def test_length_mismatch(self):
        with pytest.raises(DomainMismatch):
            compute_diameters(FlatCurve(2.0, 17.5), FlatCurve(0.0, 16.0), 44)

    def test_too_few_sections(self):
        with pytest.raises(BadDimension):
            compute_diameters(FlatCurve(2.0), FlatCurve(0.0), 7)


class TestDiametersToAreas:
    def test_frozen_values(self):
        a = diameters_to_areas(np.array([0.0, 1.0, 1.5]))
        assert np.allclose(a, [0.0, 1.0, 2.25])

    @given(st.lists(st.floats(0, 5), min_size=1, max_size=50))
    @settings(max_examples=50)
    def test_doubling_gap_quadruples_area(self, ds):
        d = np.array(ds)
        assert np.allclose(diameters_to_areas(2 * d),
                           4 * diameters_to_areas(d))

    @given(st.lists(st.floats(0, 5), min_size=2, max_size=50))
    @settings(max_examples=50)
    def test_order_preserving(self, ds):
        d = np.sort(np.array(ds))
        a = diameters_to_areas(d)
        assert np.all(np.diff(a) >= 0)


class TestDetectConstriction:
    def test_finds_minimum(self):
        c = detect_constriction(np.array([3.0, 1.0, 3.0]))
        assert c.index == 1
        assert c.area == 1.0
        assert c.classification == "open"

    def test_tie_goes_to_most_anterior(self):
        c = detect_constriction(np.full(44, 2.0))
        assert c.index == 43
        assert c.classification == "open"

    def test_fricative_band(self):
        c = detect_constriction(np.array([2.0, 0.02, 2.0]))
        assert c.index == 1
        assert c.classification == "fricative"

    def test_occluded_at_threshold(self):
        cfg = AreaConfig()
        c = detect_constriction(np.array([2.0, cfg.a_stop, 2.0]))
        assert c.classification == "occluded"

    def test_fricative_boundary_is_inclusive(self):
        cfg = AreaConfig()
        c = detect_constriction(np.array([2.0, cfg.a_fric, 2.0]))
        assert c.classification == "fricative"
        c = detect_constriction(np.array([2.0, cfg.a_fric + 1e-9, 2.0]))
        assert c.classification == "open"

    @given(st.lists(st.floats(0, 10), min_size=8, max_size=44))
    @settings(max_examples=80)
    def test_classes_partition_by_minimum(self, areas):
        cfg = AreaConfig()
        a = np.array(areas)
        c = detect_constriction(a)
        lo = float(np.min(a))
        assert c.area == lo
        if lo <= cfg.a_stop:
            assert c.classification == "occluded"
        elif lo <= cfg.a_fric:
            assert c.classification == "fricative"
        else:
            assert c.classification == "open"


class TestAreaTrace:
    def test_header_and_rows(self):
        buf = io.StringIO()
        write_area_trace(buf, [0.0, 10.666], np.array([[1.0, 0.5], [2.0, 0.25]]))
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == "t_ms,a_0,a_1"
        assert lines[1] == "0.000,1,0.5"
        assert lines[2] == "10.666,2,0.25"

    def test_round_trips_through_numpy(self):
        buf = io.StringIO()
        times = [0.0, 10.0, 20.0]
        areas = np.abs(np.random.default_rng(0).normal(1, 0.3, (3, 44)))
        write_area_trace(buf, times, areas)
        buf.seek(0)
        back = np.genfromtxt(buf, delimiter=",", skip_header=1)
        assert back.shape == (3, 45)
        assert np.allclose(back[:, 0], times, atol=1e-3)
        assert np.allclose(back[:, 1:], areas, rtol=1e-4)
