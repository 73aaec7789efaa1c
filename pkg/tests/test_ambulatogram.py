"""
Unit tests for ambulatogram construction, co-presence and rendering.
"""

from itertools import permutations

import numpy as np
import pytest

from ambulatogram import (
    CSV_HEADER,
    Ambulatogram,
    AmbulatogramMismatchError,
    CopresenceInterval,
    IntervalOverlapError,
    PresenceInterval,
    UnknownZoneError,
    ambulatogram_csv,
    ambulatogram_svg,
    bin_count,
    build,
    copresence,
    copresence_csv,
    copresence_report,
    daytime_label,
    format_number,
    parse_ambulatogram_csv,
    reference_ambulatogram,
    render,
)
from ingestion import TrackSequence
from zones import Zone, ZoneMap

pytestmark = [pytest.mark.unit, pytest.mark.ambulatogram]

CENTERS = {"kitchen": (1.0, 1.0), "dining-room": (4.0, 1.0), "outside": (11.0, 11.0)}


def square(x0, y0, size=2.0):
    return ((x0, y0), (x0 + size, y0), (x0 + size, y0 + size), (x0, y0 + size))


@pytest.fixture
def zone_map():
    return ZoneMap([
        Zone("kitchen", square(0, 0), covered=True),
        Zone("dining-room", square(3, 0), covered=True),
        Zone("outside", square(10, 10)),
    ])


def stay(key, zone, t_start, t_end, dt=1.0):
    """Samples at the zone center every ``dt`` over [t_start, t_end)."""
    stamps = np.arange(t_start, t_end, dt)
    x, y = CENTERS[zone]
    positions = np.column_stack([np.full(len(stamps), x), np.full(len(stamps), y), np.full(len(stamps), 1.0)])
    return TrackSequence(key, stamps, positions)


def mixed(key, zones, t0=0.0, dt=0.5):
    """One sample per entry of ``zones``, in that order."""
    stamps = t0 + dt * np.arange(len(zones))
    positions = [(*CENTERS[z], 1.0) if z else (50.0, 50.0, 1.0) for z in zones]
    return TrackSequence(key, stamps, positions)


class TestModels:
    """Tests for the ambulatogram and interval models"""

    def test_bin_count(self):
        """Partial last bins are counted"""
        assert bin_count(0, 10, 3) == 4
        assert bin_count(0, 1440, 5) == 288
        assert bin_count(0, 0.3, 0.1) == 3
        assert bin_count(5, 5, 1) == 0

    def test_bin_count_rejects_bad_input(self):
        """Non-positive widths and reversed spans are errors"""
        with pytest.raises(ValueError):
            bin_count(0, 10, 0)
        with pytest.raises(ValueError):
            bin_count(10, 0, 1)

    def test_shape_must_match(self):
        """Counts must be zones by bins"""
        with pytest.raises(ValueError):
            Ambulatogram(5.0, 0.0, 20.0, ("a",), np.zeros((1, 3)))

    def test_negative_counts_rejected(self):
        """Counts are non-negative"""
        with pytest.raises(ValueError):
            Ambulatogram(5.0, 0.0, 10.0, ("a",), [[0, -1]])

    def test_row_and_restricted(self):
        """Rows by name; restriction keeps the requested order"""
        amb = Ambulatogram(5.0, 0.0, 10.0, ("a", "b", "c"), [[1, 0], [0, 2], [3, 3]])
        assert amb.row("b").tolist() == [0, 2]
        sub = amb.restricted(["c", "a"])
        assert sub.zone_names == ("c", "a")
        assert sub.counts.tolist() == [[3, 3], [1, 0]]
        with pytest.raises(UnknownZoneError):
            amb.row("attic")

    def test_check_compatible(self):
        """Different bin widths are a mismatch"""
        a = Ambulatogram.zeros(["a"], 5.0, (0, 60))
        b = Ambulatogram.zeros(["a"], 10.0, (0, 60))
        a.check_compatible(Ambulatogram.zeros(["a", "b"], 5.0, (0, 60)))
        with pytest.raises(AmbulatogramMismatchError):
            a.check_compatible(b)

    def test_presence_interval_requires_positive_duration(self):
        """t_start must be before t_end"""
        with pytest.raises(ValueError):
            PresenceInterval("resident", "kitchen", 10.0, 10.0)

    def test_presence_interval_dict(self):
        """Tuple person keys survive the dict form"""
        interval = PresenceInterval(("kinect1", 3), "kitchen", 1.0, 4.0, "cooking")
        data = interval.to_dict()
        assert data["person"] == ["kinect1", 3]
        assert PresenceInterval.from_dict(data) == interval
        assert interval.duration == 3.0


class TestBuild:
    """Tests for counting people per zone per bin"""

    def test_no_sequences(self, zone_map):
        """Nothing measured gives an all-zero ambulatogram"""
        amb = build([], zone_map, 5.0, (0.0, 60.0))
        assert amb.counts.shape == (3, 12)
        assert amb.counts.sum() == 0
        assert amb.zone_names == ("kitchen", "dining-room", "outside")

    def test_one_person_whole_span(self, zone_map):
        """A person in the kitchen all along counts 1 in every kitchen bin"""
        amb = build([stay(("kinect1", 1), "kitchen", 0, 60)], zone_map, 5.0, (0.0, 60.0))
        assert amb.row("kitchen").tolist() == [1] * 12
        assert amb.row("dining-room").sum() == 0
        assert amb.row("outside").sum() == 0

    def test_two_people_overlap(self, zone_map):
        """Two person keys in the dining-room count 2 where they overlap"""
        seqs = [
            stay(("kinect2", 1), "dining-room", 0, 30),
            stay(("kinect2", 2), "dining-room", 20, 50),
        ]
        amb = build(seqs, zone_map, 5.0, (0.0, 60.0))
        assert amb.row("dining-room").tolist() == [1, 1, 1, 1, 2, 2, 1, 1, 1, 1, 0, 0]

    def test_same_key_counts_once(self, zone_map):
        """Two sequences of one person key in one bin count once"""
        seqs = [stay(("kinect1", 1), "kitchen", 0, 2), stay(("kinect1", 1), "kitchen", 3, 5)]
        amb = build(seqs, zone_map, 5.0, (0.0, 5.0))
        assert amb.row("kitchen").tolist() == [1]

    def test_majority_zone_wins(self, zone_map):
        """A person in two zones within a bin counts where most samples fall"""
        seq = mixed(("kinect1", 1), ["dining-room", "kitchen", "kitchen", "kitchen", "dining-room"])
        amb = build([seq], zone_map, 5.0, (0.0, 5.0))
        assert amb.row("kitchen").tolist() == [1]
        assert amb.row("dining-room").tolist() == [0]

    def test_tie_goes_to_earlier_zone(self, zone_map):
        """Equal votes go to the zone listed first"""
        seq = mixed(("kinect1", 1), ["dining-room", "dining-room", "kitchen", "kitchen"])
        amb = build([seq], zone_map, 5.0, (0.0, 5.0))
        assert amb.row("kitchen").tolist() == [1]
        assert amb.row("dining-room").tolist() == [0]

    def test_samples_outside_every_zone_do_not_vote(self, zone_map):
        """Unclassified samples are ignored"""
        seq = mixed(("kinect1", 1), [None, None, None, "dining-room"])
        amb = build([seq], zone_map, 5.0, (0.0, 5.0))
        assert amb.row("dining-room").tolist() == [1]
        assert amb.counts.sum() == 1

    def test_samples_outside_span_ignored(self, zone_map):
        """Stamps before t0 or after t1 are dropped"""
        amb = build([stay(("kinect1", 1), "kitchen", -10, 70)], zone_map, 5.0, (0.0, 20.0))
        assert amb.row("kitchen").tolist() == [1, 1, 1, 1]

    def test_permutation_invariant(self, zone_map):
        """Input order does not matter"""
        seqs = [
            stay(("kinect1", 1), "kitchen", 0, 17),
            stay(("kinect2", 1), "dining-room", 8, 40),
            mixed(("kinect1", 2), ["kitchen", "dining-room", "dining-room"], t0=12.0),
        ]
        expected = build(seqs, zone_map, 5.0, (0.0, 40.0))
        for order in permutations(seqs):
            assert build(list(order), zone_map, 5.0, (0.0, 40.0)) == expected

    def test_bin_total_bounded_by_active_keys(self, zone_map):
        """Each key counts in at most one zone per bin"""
        rng = np.random.default_rng(7)
        names = list(CENTERS)
        seqs = [
            mixed(("kinect1", k), [names[i] for i in rng.integers(0, 3, size=80)], dt=0.25)
            for k in range(5)
        ]
        amb = build(seqs, zone_map, 2.0, (0.0, 20.0))
        assert (amb.counts.sum(axis=0) <= 5).all()
        assert amb.counts.sum(axis=0).tolist() == [5] * 10

    def test_refining_bins_keeps_presence_duration(self, zone_map):
        """Halving the bin width moves counted duration by less than two coarse bins"""
        rng = np.random.default_rng(11)
        for _ in range(20):
            start = rng.uniform(0, 100)
            end = start + rng.uniform(1, 100)
            seq = stay(("kinect1", 1), "kitchen", start, end, dt=1 / 30)
            coarse = build([seq], zone_map, 10.0, (0.0, 220.0))
            fine = build([seq], zone_map, 5.0, (0.0, 220.0))
            coarse_s = coarse.counts.sum() * 10.0
            fine_s = fine.counts.sum() * 5.0
            assert abs(coarse_s - fine_s) < 2 * 10.0


class TestReferenceAmbulatogram:
    """Tests for ground-truth counts"""

    def test_empty_scenario(self, zone_map):
        """No intervals gives zeros"""
        amb = reference_ambulatogram([], zone_map, 5.0, (0.0, 60.0))
        assert amb.counts.sum() == 0
        assert amb.label == "reference"

    def test_outside_morning(self, zone_map):
        """08:00 to 09:00 on the expanded clock fills the outside row"""
        amb = reference_ambulatogram(
            [PresenceInterval("resident", "outside", 420.0, 480.0)], zone_map, 5.0, (0.0, 1440.0)
        )
        row = amb.row("outside")
        assert row[84:96].tolist() == [1] * 12
        assert row.sum() == 12
        assert daytime_label(420.0, 60, 1.0) == "08:00"

    def test_visitor_joins_at_dinner(self, zone_map):
        """A visitor with the resident in the dining-room counts 2"""
        intervals = [
            PresenceInterval("resident", "dining-room", 1000.0, 1080.0, "dinner"),
            PresenceInterval("visitor", "dining-room", 1010.0, 1070.0, "dinner"),
        ]
        amb = reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 1440.0))
        row = amb.row("dining-room")
        assert row[202:214].tolist() == [2] * 12
        assert row[200] == 1 and row[215] == 1
        assert copresence(amb, "dining-room", 10.0) == [CopresenceInterval(1010.0, 1070.0, 2)]

    def test_any_overlap_counts(self, zone_map):
        """A bin partially covered by an interval counts the person"""
        amb = reference_ambulatogram([PresenceInterval("resident", "kitchen", 2.5, 7.5)], zone_map, 5.0, (0.0, 15.0))
        assert amb.row("kitchen").tolist() == [1, 1, 0]

    def test_touching_intervals_split_cleanly(self, zone_map):
        """End times are exclusive"""
        intervals = [
            PresenceInterval("resident", "kitchen", 0.0, 5.0),
            PresenceInterval("resident", "dining-room", 5.0, 10.0),
        ]
        amb = reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 10.0))
        assert amb.row("kitchen").tolist() == [1, 0]
        assert amb.row("dining-room").tolist() == [0, 1]

    def test_zone_change_inside_bin_counts_once(self, zone_map):
        """A person moving rooms mid-bin counts in the room of the longer stay"""
        intervals = [
            PresenceInterval("resident", "kitchen", 0.0, 7.0),
            PresenceInterval("resident", "dining-room", 7.0, 20.0),
        ]
        amb = reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 20.0))
        assert amb.row("kitchen").tolist() == [1, 0, 0, 0]
        assert amb.row("dining-room").tolist() == [0, 1, 1, 1]
        assert amb.counts.sum(axis=0).tolist() == [1, 1, 1, 1]

    def test_equal_stays_go_to_earlier_zone(self, zone_map):
        """Half a bin in each room goes to the room listed first"""
        intervals = [
            PresenceInterval("resident", "dining-room", 0.0, 2.5),
            PresenceInterval("resident", "kitchen", 2.5, 10.0),
        ]
        amb = reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 10.0))
        assert amb.row("kitchen").tolist() == [1, 1]
        assert amb.row("dining-room").tolist() == [0, 0]

    def test_bin_total_bounded_by_active_persons(self, zone_map):
        """Random itineraries never count more people than are present"""
        rng = np.random.default_rng(3)
        names = list(CENTERS)
        for _ in range(20):
            intervals = []
            for person in ("resident", "visitor", "nurse"):
                stamps = np.sort(rng.uniform(0.0, 60.0, size=8))
                for start, end in zip(stamps[:-1], stamps[1:]):
                    if end > start:
                        intervals.append(PresenceInterval(person, names[rng.integers(0, 3)], float(start), float(end)))
            amb = reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 60.0))
            for b in range(amb.n_bins):
                lo, hi = 5.0 * b, 5.0 * (b + 1)
                active = {i.person for i in intervals if i.t_start < hi and i.t_end > lo}
                assert amb.counts[:, b].sum() <= len(active)

    def test_overlapping_intervals_rejected(self, zone_map):
        """One person cannot be in two places at once"""
        intervals = [
            PresenceInterval("resident", "kitchen", 0.0, 10.0),
            PresenceInterval("resident", "dining-room", 8.0, 12.0),
        ]
        with pytest.raises(IntervalOverlapError):
            reference_ambulatogram(intervals, zone_map, 5.0, (0.0, 20.0))

    def test_unknown_zone_rejected(self, zone_map):
        """Intervals must name zones of the map"""
        with pytest.raises(UnknownZoneError):
            reference_ambulatogram([PresenceInterval("resident", "attic", 0.0, 5.0)], zone_map, 5.0, (0.0, 10.0))


class TestCopresence:
    """Tests for co-presence extraction"""

    @staticmethod
    def single_zone(counts, bin_width=60.0):
        return Ambulatogram(bin_width, 0.0, bin_width * len(counts), ("dining-room",), [counts])

    def test_all_zero(self):
        """No crowded bins, no intervals"""
        assert copresence(self.single_zone([0, 0, 0]), "dining-room", 0.0) == []

    def test_hand_computed_run(self):
        """Counts 1,2,2,1 give one 120 s interval peaking at 2"""
        found = copresence(self.single_zone([1, 2, 2, 1]), "dining-room", 60.0)
        assert found == [CopresenceInterval(60.0, 180.0, 2)]

    def test_duration_gate(self):
        """A single crowded bin is shorter than two bins"""
        assert copresence(self.single_zone([2]), "dining-room", 120.0) == []

    def test_peak_and_trailing_run(self):
        """Runs reaching the end are closed and report their peak"""
        found = copresence(self.single_zone([2, 0, 2, 3, 2]), "dining-room", 60.0)
        assert found == [CopresenceInterval(0.0, 60.0, 2), CopresenceInterval(120.0, 300.0, 3)]

    def test_unknown_zone(self):
        """Asking for a missing zone is an error"""
        with pytest.raises(UnknownZoneError):
            copresence(self.single_zone([2]), "attic", 0.0)

    def test_report_follows_zone_order(self):
        """copresence_report walks zones in ambulatogram order"""
        amb = Ambulatogram(5.0, 0.0, 15.0, ("kitchen", "dining-room"), [[0, 2, 2], [3, 0, 0]])
        report = copresence_report(amb, 5.0)
        assert [zone for zone, _ in report] == ["kitchen", "dining-room"]
        assert report[0][1] == CopresenceInterval(5.0, 15.0, 2)
        assert report[1][1] == CopresenceInterval(0.0, 5.0, 3)


class TestRender:
    """Tests for CSV and SVG output"""

    @pytest.fixture
    def pair(self, zone_map):
        measured = build([stay(("kinect1", 1), "kitchen", 0, 30)], zone_map, 5.0, (0.0, 60.0), label="raw")
        reference = reference_ambulatogram(
            [PresenceInterval("resident", "kitchen", 0.0, 30.0), PresenceInterval("resident", "outside", 30.0, 60.0)],
            zone_map,
            5.0,
            (0.0, 60.0),
        )
        return measured, reference

    def test_format_number(self):
        """Six significant digits without float noise"""
        assert format_number(0.1 + 0.2) == "0.3"
        assert format_number(1440.0) == "1440"
        assert format_number(2.5) == "2.5"

    def test_csv_layout(self, pair):
        """Header, zone-major rows, LF endings, one row per zone and bin"""
        text = ambulatogram_csv(pair[0])
        lines = text.split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1] == "kitchen,0,1"
        assert lines[13] == "dining-room,0,0"
        assert "\r" not in text
        assert text.endswith("\n")
        assert len(lines) - 2 == 3 * 12

    def test_csv_parses_back(self, pair):
        """Counts and bins read back unchanged"""
        parsed = parse_ambulatogram_csv(ambulatogram_csv(pair[1]))
        assert parsed == pair[1]

    def test_parse_rejects_wrong_header(self):
        """Files without the expected header are refused"""
        with pytest.raises(ValueError):
            parse_ambulatogram_csv("zone,start,count\nkitchen,0,1\n")

    def test_parse_single_bin_needs_width(self):
        """One bin does not reveal its width"""
        text = "zone,bin_start_s,count\nkitchen,0,2\n"
        with pytest.raises(ValueError):
            parse_ambulatogram_csv(text)
        assert parse_ambulatogram_csv(text, bin_width=5.0).counts.tolist() == [[2]]

    def test_copresence_csv(self):
        """One row per interval with the ambulatogram label"""
        text = copresence_csv([("dining-room", CopresenceInterval(1010.0, 1070.0, 2))], label="raw")
        assert text == "ambulatogram,zone,t_start_s,t_end_s,max_count\nraw,dining-room,1010,1070,2\n"

    def test_daytime_label(self):
        """Scenario seconds map onto the expanded day clock"""
        assert daytime_label(0.0, 60, 1.0) == "01:00"
        assert daytime_label(1020.0, 60, 1.0) == "18:00"
        assert daytime_label(1380.0, 60, 1.0) == "00:00"

    def test_svg_panels(self, pair):
        """Measured above reference, one row label per zone"""
        svg = ambulatogram_svg(*pair)
        assert svg.startswith("<?xml")
        assert svg.index('id="measured"') < svg.index('id="reference"')
        for zone in ("kitchen", "dining-room", "outside"):
            assert f">{zone}</text>" in svg
        assert "<title>kitchen" in svg
        assert "<title>outside" in svg

    def test_svg_is_deterministic(self, pair):
        """Same input, same bytes"""
        assert ambulatogram_svg(*pair) == ambulatogram_svg(*pair)

    def test_svg_axis_ticks(self, zone_map):
        """A whole shrunk day gets clock ticks"""
        amb = Ambulatogram.zeros(zone_map.names, 5.0, (0.0, 1440.0))
        svg = ambulatogram_svg(amb, amb)
        assert ">18:00</text>" in svg
        assert "<title>" not in svg

    def test_svg_mismatch(self, zone_map):
        """Bins must agree"""
        with pytest.raises(AmbulatogramMismatchError):
            ambulatogram_svg(
                Ambulatogram.zeros(zone_map.names, 5.0, (0.0, 60.0)),
                Ambulatogram.zeros(zone_map.names, 10.0, (0.0, 60.0)),
            )

    def test_svg_marks_false_positives_and_negatives(self, pair):
        """FP and FN stretches are drawn under the measured rows with a legend"""
        errors = {
            "kitchen": ["TP"] * 6 + ["TN"] * 4 + ["FN"] * 2,
            "dining-room": ["FP"] * 2 + ["TN"] * 10,
        }
        svg = ambulatogram_svg(*pair, errors=errors)
        assert svg.count('class="fp"') == 1
        assert svg.count('class="fn"') == 1
        assert "<title>dining-room FP 01:00-01:10</title>" in svg
        assert "<title>kitchen FN 01:50-02:00</title>" in svg
        assert ">FP</text>" in svg and ">FN</text>" in svg
        assert svg.index('class="fp"') < svg.index('id="reference"')

    def test_svg_without_errors_has_no_marks(self, pair):
        """No outcomes, no marks and no legend"""
        svg = ambulatogram_svg(*pair)
        assert 'class="fp"' not in svg and 'class="fn"' not in svg
        assert ">FP</text>" not in svg

    def test_svg_errors_must_cover_every_bin(self, pair, tmp_path):
        """Outcome lists of the wrong length are refused before writing"""
        with pytest.raises(AmbulatogramMismatchError):
            render(*pair, tmp_path / "bad", errors={"kitchen": ["FP"]})
        assert list(tmp_path.iterdir()) == []

    def test_render_writes_files(self, pair, tmp_path):
        """render writes the counts CSV and the SVG"""
        saved = render(*pair, tmp_path / "run_01" / "ambulatogram_raw")
        assert saved["csv"].name == "ambulatogram_raw.csv"
        assert saved["svg"].name == "ambulatogram_raw.svg"
        assert saved["csv"].read_text(encoding="utf-8") == ambulatogram_csv(pair[0])
        assert 'id="reference"' in saved["svg"].read_text(encoding="utf-8")

    def test_render_zero_ambulatograms(self, zone_map, tmp_path):
        """Empty inputs still produce valid files"""
        amb = Ambulatogram.zeros(zone_map.names, 5.0, (0.0, 60.0))
        saved = render(amb, amb, tmp_path / "empty")
        assert len(saved["csv"].read_text(encoding="utf-8").splitlines()) == 1 + 3 * 12
        assert saved["svg"].read_text(encoding="utf-8").rstrip().endswith("</svg>")

    def test_render_mismatch_writes_nothing(self, zone_map, tmp_path):
        """Incompatible inputs fail before any file exists"""
        with pytest.raises(AmbulatogramMismatchError):
            render(
                Ambulatogram.zeros(zone_map.names, 5.0, (0.0, 60.0)),
                Ambulatogram.zeros(zone_map.names, 5.0, (0.0, 30.0)),
                tmp_path / "bad",
            )
        assert list(tmp_path.iterdir()) == []
