"""
Tests for encprim encounter data, CSV I/O, projection and qualification
"""

import numpy as np
import pytest

from encprim.encounters import (
    EARTH_RADIUS_M,
    CoordinateFrame,
    DrivingEncounter,
    DrivingPrimitive,
    TrajectorySample,
    geographic_to_local,
    list_encounter_files,
    load_encounter_csv,
    project_to_local_frame,
    qualify_encounter,
    save_encounter_csv,
    unproject_to_geographic,
)
from encprim.errors import EncounterParseError, EncounterValidationError

GEO_HEADER = "t,lat1,lon1,v1,lat2,lon2,v2\n"


def geo_rows(n: int, dt: float = 0.1) -> str:
    lines = []
    for i in range(n):
        lines.append(f"{i * dt!r},42.28,-83.74,{5.0 + 0.01 * i!r},42.2801,-83.7401,3.0")
    return "\n".join(lines) + "\n"


class TestDataModel:
    """Tests for encounter and primitive invariants."""

    def test_rejects_non_monotonic_time(self):
        """Test that time must strictly increase."""
        data = np.zeros((3, 7))
        data[:, 0] = [0.0, 0.1, 0.1]
        with pytest.raises(EncounterValidationError, match="non-monotonic"):
            DrivingEncounter(id="x", data=data, rate_hz=10.0)

    def test_rejects_negative_speed(self):
        """Test that speeds are magnitudes."""
        data = np.zeros((2, 7))
        data[:, 0] = [0.0, 0.1]
        data[1, 3] = -1.0
        with pytest.raises(EncounterValidationError, match="negative speed"):
            DrivingEncounter(id="x", data=data, rate_hz=10.0)

    def test_rejects_single_sample(self):
        """Test that an encounter needs at least two samples."""
        with pytest.raises(EncounterValidationError):
            DrivingEncounter(id="x", data=np.zeros((1, 7)), rate_hz=10.0)

    def test_data_is_read_only(self, straight_encounter):
        """Test that encounter arrays cannot be mutated."""
        with pytest.raises(ValueError):
            straight_encounter.data[0, 0] = 5.0

    def test_sample_invariants(self):
        """Test TrajectorySample validation."""
        with pytest.raises(EncounterValidationError):
            TrajectorySample(t=0.0, p1=(0.0, 0.0), p2=(1.0, 1.0), v1=-0.1, v2=0.0)
        with pytest.raises(EncounterValidationError):
            TrajectorySample(t=0.0, p1=(np.nan, 0.0), p2=(1.0, 1.0), v1=0.0, v2=0.0)

    def test_from_samples_round_trip(self, straight_encounter):
        """Test building an encounter from its own samples."""
        rebuilt = DrivingEncounter.from_samples(
            straight_encounter.id, straight_encounter.samples, straight_encounter.rate_hz
        )
        assert rebuilt == straight_encounter

    def test_observations_layout(self, straight_encounter):
        """Test that observations are [x1, y1, x2, y2, v1, v2]."""
        obs = straight_encounter.observations()
        assert obs.shape == (121, 6)
        np.testing.assert_array_equal(obs[:, 0:2], straight_encounter.p1)
        np.testing.assert_array_equal(obs[:, 2:4], straight_encounter.p2)
        np.testing.assert_array_equal(obs[:, 4], straight_encounter.v1)

    def test_primitive_from_encounter(self, straight_encounter):
        """Test primitive bounds and duration."""
        prim = DrivingPrimitive.from_encounter(straight_encounter, 10, 19, 2)
        assert prim.n_samples == 10
        assert prim.duration_s == pytest.approx(1.0)
        assert prim.identity == ("enc", 10, 19, 2)
        np.testing.assert_array_equal(prim.data, straight_encounter.data[10:20])

    def test_primitive_beyond_encounter(self, straight_encounter):
        """Test that a primitive cannot end after the encounter."""
        with pytest.raises(EncounterValidationError):
            DrivingPrimitive.from_encounter(straight_encounter, 100, 121, 0)


class TestLoadCsv:
    """Tests for encounter CSV ingestion."""

    def test_two_rows(self, write_csv):
        """Test a minimal two-row file."""
        path = write_csv("a.csv", GEO_HEADER + "0.0,42.28,-83.74,1.0,42.28,-83.74,2.0\n"
                         "0.1,42.28,-83.74,1.0,42.28,-83.74,2.0\n")
        enc = load_encounter_csv(path)
        assert enc.n_samples == 2
        assert enc.rate_hz == 10.0
        assert enc.frame == CoordinateFrame.GEOGRAPHIC_DEGREES
        assert enc.id == "a"

    def test_non_monotonic_names_line(self, write_csv):
        """Test the line number of a repeated timestamp."""
        row = ",42.28,-83.74,1.0,42.28,-83.74,2.0\n"
        path = write_csv("b.csv", GEO_HEADER + "0.0" + row + "0.1" + row + "0.1" + row)
        with pytest.raises(EncounterValidationError, match="non-monotonic time at line 4"):
            load_encounter_csv(path)

    def test_120_rows(self, write_csv):
        """Test sample count and duration of a 10 Hz file."""
        enc = load_encounter_csv(write_csv("c.csv", GEO_HEADER + geo_rows(120)))
        assert enc.n_samples == 120
        assert enc.rate_hz == 10.0
        assert enc.duration_s == pytest.approx(11.9)

    def test_malformed_value_names_line(self, write_csv):
        """Test that an unparseable field reports its line."""
        text = GEO_HEADER + geo_rows(3)
        lines = text.splitlines()
        lines[2] = lines[2].replace("42.28,", "abc,", 1)
        path = write_csv("d.csv", "\n".join(lines) + "\n")
        with pytest.raises(EncounterParseError, match="at line 3"):
            load_encounter_csv(path)

    def test_blank_field_rejected(self, write_csv):
        """Test that dropouts (blank fields) are rejected."""
        path = write_csv("e.csv", GEO_HEADER + "0.0,42.28,,1.0,42.28,-83.74,2.0\n"
                         "0.1,42.28,-83.74,1.0,42.28,-83.74,2.0\n")
        with pytest.raises(EncounterParseError, match="blank field 'lon1' at line 2"):
            load_encounter_csv(path)

    def test_wrong_header(self, write_csv):
        """Test that the header must match a schema exactly."""
        path = write_csv("f.csv", "t,lat,lon,v1,lat2,lon2,v2\n0,0,0,0,0,0,0\n0.1,0,0,0,0,0,0\n")
        with pytest.raises(EncounterParseError, match="line 1"):
            load_encounter_csv(path)

    def test_non_uniform_rejected(self, write_csv):
        """Test that irregular spacing is rejected without resampling."""
        text = GEO_HEADER + "\n".join(
            f"{t},42.28,-83.74,1.0,42.28,-83.74,2.0" for t in (0.0, 0.1, 0.2, 0.35, 0.45)
        ) + "\n"
        with pytest.raises(EncounterValidationError, match="non-uniform"):
            load_encounter_csv(write_csv("g.csv", text))

    def test_resample_flag(self, write_csv):
        """Test that resampling interpolates onto the uniform grid."""
        text = "# rate_hz=10\n" + GEO_HEADER + "\n".join(
            f"{t},42.28,-83.74,{v},42.28,-83.74,2.0"
            for t, v in ((0.0, 0.0), (0.1, 1.0), (0.25, 2.5), (0.4, 4.0))
        ) + "\n"
        enc = load_encounter_csv(write_csv("h.csv", text), resample=True)
        assert enc.n_samples == 5
        np.testing.assert_allclose(enc.v1, [0.0, 1.0, 2.0, 3.0, 4.0])

    def test_rate_line(self, write_csv):
        """Test the optional rate declaration and line offsets after it."""
        text = "# rate_hz=10\n" + GEO_HEADER + "0.0,1,1,1,1,1,1\n0.1,1,1,-1,1,1,1\n"
        with pytest.raises(EncounterValidationError, match="negative speed at line 4"):
            load_encounter_csv(write_csv("i.csv", text))

    def test_round_trip_bit_identical(self, tmp_path, straight_encounter):
        """Test load -> save -> load on a projected encounter."""
        rng = np.random.default_rng(0)
        noisy = straight_encounter.with_data(
            straight_encounter.data + np.column_stack(
                [np.zeros(121), rng.normal(0, 0.3, (121, 2)), np.zeros(121),
                 rng.normal(0, 0.3, (121, 2)), np.zeros(121)]
            )
        )
        first = save_encounter_csv(noisy, tmp_path / "one.csv")
        loaded = load_encounter_csv(first)
        second = save_encounter_csv(loaded, tmp_path / "two.csv")
        reloaded = load_encounter_csv(second)
        np.testing.assert_array_equal(loaded.data, noisy.data)
        np.testing.assert_array_equal(reloaded.data, loaded.data)
        assert first.read_bytes() == second.read_bytes()

    def test_list_skips_truth_files(self, tmp_path):
        """Test that truth sidecars are not treated as encounters."""
        for name in ("b.csv", "a.csv", "a.truth.csv", "notes.txt"):
            (tmp_path / name).write_text("x")
        assert [p.name for p in list_encounter_files(tmp_path)] == ["a.csv", "b.csv"]


class TestProjection:
    """Tests for the local tangent-plane projection."""

    def test_origin_maps_to_zero(self):
        """Test that the origin projects to (0, 0)."""
        x, y = geographic_to_local(np.array([42.0]), np.array([-83.0]), 42.0, -83.0)
        assert x[0] == 0.0 and y[0] == 0.0

    def test_north_offset_at_equator(self):
        """Test 0.001 degrees north against the great-circle distance."""
        x, y = geographic_to_local(np.array([0.001]), np.array([0.0]), 0.0, 0.0)
        great_circle = EARTH_RADIUS_M * np.radians(0.001)
        assert abs(x[0]) < 1e-9
        assert y[0] == pytest.approx(111.19, abs=0.5)
        assert y[0] == pytest.approx(great_circle, abs=0.5)

    def test_project_encounter(self, write_csv):
        """Test origin placement and frame change."""
        enc = load_encounter_csv(write_csv("p.csv", GEO_HEADER + geo_rows(20)))
        local = project_to_local_frame(enc)
        assert local.frame == CoordinateFrame.LOCAL_METERS
        assert local.origin == pytest.approx((42.28005, -83.74005))
        midpoint = (local.p1[0] + local.p2[0]) / 2
        np.testing.assert_allclose(midpoint, [0.0, 0.0], atol=1e-6)
        np.testing.assert_array_equal(local.v1, enc.v1)

    def test_already_projected(self, straight_encounter):
        """Test that a projected encounter cannot be projected again."""
        with pytest.raises(EncounterValidationError, match="already projected"):
            project_to_local_frame(straight_encounter)

    def test_identical_trajectories(self, write_csv):
        """Test that identical vehicles project identically."""
        rows = "".join(f"{i / 10!r},42.3,-83.7,1.0,42.3,-83.7,1.0\n" for i in range(5))
        local = project_to_local_frame(load_encounter_csv(write_csv("q.csv", GEO_HEADER + rows)))
        np.testing.assert_array_equal(local.p1, local.p2)

    def test_preserves_mutual_distance(self, straight_encounter):
        """Test unproject -> project keeps vehicle separation within 0.1%."""
        geo = unproject_to_geographic(straight_encounter, 42.28, -83.74)
        back = project_to_local_frame(geo)
        np.testing.assert_allclose(
            back.mutual_distance(), straight_encounter.mutual_distance(), rtol=1e-3
        )


class TestQualify:
    """Tests for encounter qualification."""

    def _encounter(self, make_encounter, seconds: float, gap: float):
        n = int(round(seconds * 10)) + 1
        p1 = np.zeros((n, 2))
        p2 = np.column_stack([np.full(n, gap), np.zeros(n)])
        return make_encounter(p1, p2)

    def test_qualifies(self, make_encounter):
        """Test an 11 s encounter with 40 m separation."""
        result = qualify_encounter(self._encounter(make_encounter, 11.0, 40.0))
        assert result.qualified and result.reason is None
        assert result.min_distance_m == pytest.approx(40.0)

    def test_too_short(self, make_encounter):
        """Test a 9 s encounter."""
        result = qualify_encounter(self._encounter(make_encounter, 9.0, 40.0))
        assert not result
        assert result.reason == "duration"

    def test_too_far(self, make_encounter):
        """Test vehicles that never come within 150 m."""
        result = qualify_encounter(self._encounter(make_encounter, 15.0, 150.0))
        assert result.reason == "distance"

    def test_exactly_ten_seconds(self, make_encounter):
        """Test the duration boundary is inclusive."""
        assert qualify_encounter(self._encounter(make_encounter, 10.0, 5.0)).qualified

    def test_translation_invariant(self, make_encounter):
        """Test that rigid translation does not change the verdict."""
        enc = self._encounter(make_encounter, 12.0, 99.0)
        shifted = enc.data.copy()
        shifted[:, [1, 4]] += 1234.5
        shifted[:, [2, 5]] -= 678.9
        before = qualify_encounter(enc)
        after = qualify_encounter(enc.with_data(shifted))
        assert (before.qualified, before.reason) == (after.qualified, after.reason)
        assert after.min_distance_m == pytest.approx(before.min_distance_m)

    def test_requires_projection(self, write_csv):
        """Test that geographic encounters must be projected first."""
        enc = load_encounter_csv(write_csv("r.csv", GEO_HEADER + geo_rows(5)))
        with pytest.raises(EncounterValidationError):
            qualify_encounter(enc)
