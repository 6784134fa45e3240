"""Acceptance gate: the eight published anchor points this package must
reproduce, each at its stated tolerance.

Two anchors cannot be met exactly because the published figures were
rounded more coarsely than their tolerance allows; those cells are marked
as strict expected failures rather than loosened:

* The HSL-2 typical column total: the shipped cells sum to 13.90 but the
  published total row says 13.88, a 0.02 gap against a 0.01 tolerance.
* Two small projection cells (sc1/CISCO/psi=1, low, 2018 and 2019): the
  published values 2.2 and 2.7 carry one decimal, so their rounding step
  alone exceeds the +-1% tolerance at this magnitude (computed 2.241 and
  2.666).
"""

import time

import numpy as np
import pytest

from edgelca.cli import main as cli_main
from edgelca.estimator import evaluate_profile, memory_area
from edgelca.model import EmissionTriple, FunctionalBlock, HSL
from edgelca.profiles_io import parse_profiles, render_profiles
from edgelca.projection import (
    DeploymentTrend,
    Scenario,
    TrendKind,
    cumulative_to_annual,
    extrapolate,
    project,
)
from edgelca.sensitivity import block_contributions, scan_extrema

from oracles import brute_force_extrema

# --- criterion 1: factor database column totals ------------------------------

PUBLISHED_COLUMN_TOTALS = {
    HSL.HSL0: (0.46, 0.96, 1.33),
    HSL.HSL1: (1.49, 3.20, 6.47),
    HSL.HSL2: (6.89, 13.88, 24.36),
    HSL.HSL3: (16.62, 30.47, 46.80),
}

_COLUMN_CELLS = [
    pytest.param(
        level,
        comp_index,
        marks=(
            pytest.mark.xfail(
                reason="shipped cells sum to 13.90 against the published "
                "total 13.88; 0.02 gap exceeds the 0.01 tolerance",
                strict=True,
            ),
        )
        if (level, comp_index) == (HSL.HSL2, 1)
        else (),
        id=f"{level.key}-{comp}",
    )
    for level in HSL
    for comp_index, comp in enumerate(("low", "typical", "up"))
]


@pytest.mark.parametrize("level,comp_index", _COLUMN_CELLS)
def test_criterion_1_column_totals(table, level, comp_index):
    got = table.column_sum(level)[comp_index]
    expected = PUBLISHED_COLUMN_TOTALS[level][comp_index]
    assert abs(got - expected) <= 0.01 + 1e-9


# --- criterion 2: sensitivity extrema ----------------------------------------


def test_criterion_2_extrema_match_exhaustive_enumeration(table):
    started = time.monotonic()
    min_assign, min_low, max_assign, max_up = brute_force_extrema(table)
    result = scan_extrema(table)
    assert {b: result.min_profile.level_of(b) for b in FunctionalBlock} == min_assign
    assert {b: result.max_profile.level_of(b) for b in FunctionalBlock} == max_assign
    assert abs(result.min_low_sum - min_low) < 1e-9
    assert abs(result.max_up_sum - max_up) < 1e-9
    assert result.max_up_sum == pytest.approx(47.41, abs=0.01)
    assert result.min_low_sum == pytest.approx(0.29, abs=0.01)
    assert 155.0 <= result.ratio_published_rounding <= 165.0
    assert time.monotonic() - started < 120.0


# --- criterion 3: memory area anchors -----------------------------------------


def test_criterion_3_memory_area_anchors(units):
    assert memory_area(512, "MB", "dram", units) == pytest.approx(31.5, rel=0.02)
    assert memory_area(512, "MB", "flash", units) == pytest.approx(3.2, rel=0.02)


# --- criterion 4: trend conversion --------------------------------------------


def test_criterion_4_annual_2018_values(trends):
    cisco = cumulative_to_annual(trends[("CISCO", "cumulative")])
    statista = cumulative_to_annual(trends[("Statista", "cumulative")])
    assert round(cisco.points[2018], 2) == 1.16
    assert round(statista.points[2018], 2) == 4.26


# --- criterion 5: extrapolation ------------------------------------------------


@pytest.mark.parametrize(
    "source,first_extrapolated",
    [("CISCO", 2024), ("Statista", 2026)],
)
def test_criterion_5_extrapolated_cells(trends, source, first_extrapolated):
    cum = trends[(source, "cumulative")]
    observed = DeploymentTrend(
        source=source,
        kind=TrendKind.CUMULATIVE,
        points={y: v for y, v in cum.points.items() if y < first_extrapolated},
    )
    redone = extrapolate(observed, 2028)
    for year in range(first_extrapolated, 2029):
        assert redone.points[year] == pytest.approx(cum.points[year], rel=0.01), (
            source,
            year,
        )


# --- criterion 6: projection table regeneration --------------------------------

# (scenario, source, psi) -> component -> published values for 2018..2027,
# in MtCO2-eq/year.
PUBLISHED_PROJECTIONS = {
    ("sc1", "CISCO", 1): {
        "low": (2.2, 2.7, 3.2, 3.8, 4.5, 5.3, 6.4, 7.6, 9.0, 10.7),
        "typical": (4.6, 5.4, 6.5, 7.7, 9.2, 10.9, 12.9, 15.4, 18.3, 21.8),
        "up": (6.9, 8.2, 9.7, 11.6, 13.8, 16.4, 19.5, 23.3, 27.7, 33.0),
    },
    ("sc1", "CISCO", 2): {
        "low": (4.5, 5.3, 6.3, 7.5, 9.0, 10.7, 12.7, 15.1, 18.0, 21.4),
        "typical": (9.1, 10.9, 12.9, 15.3, 18.3, 21.7, 25.9, 30.9, 36.7, 43.7),
        "up": (13.8, 16.4, 19.5, 23.2, 27.7, 32.8, 39.1, 46.6, 55.3, 65.9),
    },
    ("sc1", "Statista", 1): {
        "low": (8.2, 9.7, 11.5, 13.6, 16.2, 19.1, 22.6, 26.8, 31.7, 37.6),
        "typical": (16.8, 19.8, 23.5, 27.8, 32.9, 39.0, 46.1, 54.6, 64.7, 76.5),
        "up": (25.3, 29.9, 35.4, 41.9, 49.6, 58.8, 69.6, 82.4, 97.6, 115.5),
    },
    ("sc1", "Statista", 2): {
        "low": (16.5, 19.4, 23.1, 27.3, 32.3, 38.3, 45.3, 53.6, 63.5, 75.2),
        "typical": (33.5, 39.6, 47.0, 55.6, 65.8, 77.9, 92.2, 109.2, 129.3, 153.1),
        "up": (50.6, 59.7, 70.9, 83.8, 99.3, 117.6, 139.2, 164.7, 195.1, 231.0),
    },
    ("sc2", "CISCO", 1): {
        "low": (9.8, 11.7, 13.9, 16.5, 19.7, 23.3, 27.8, 33.2, 39.4, 47.0),
        "typical": (19.0, 22.7, 26.9, 32.0, 38.2, 45.3, 54.0, 64.3, 76.5, 91.1),
        "up": (28.3, 33.6, 40.0, 47.5, 56.8, 67.3, 80.2, 95.5, 113.6, 135.3),
    },
    ("sc2", "CISCO", 2): {
        "low": (19.6, 23.3, 27.7, 33.0, 39.4, 46.7, 55.7, 66.3, 78.8, 93.9),
        "typical": (38.1, 45.3, 53.8, 64.0, 76.5, 90.6, 108.0, 128.7, 153.0, 182.2),
        "up": (56.5, 67.3, 79.9, 95.0, 113.6, 134.5, 160.4, 191.1, 227.1, 270.5),
    },
    ("sc2", "Statista", 1): {
        "low": (36.0, 42.6, 50.5, 59.7, 70.7, 83.8, 99.2, 117.3, 139.0, 164.5),
        "typical": (69.9, 82.6, 98.0, 115.9, 137.2, 162.5, 192.4, 227.7, 269.7, 319.3),
        "up": (103.8, 122.6, 145.5, 172.1, 203.7, 241.3, 285.6, 338.0, 400.4, 474.0),
    },
    ("sc2", "Statista", 2): {
        "low": (72.1, 85.1, 101.0, 119.5, 141.5, 167.5, 198.3, 234.7, 278.0, 329.1),
        "typical": (139.9, 165.1, 196.0, 231.8, 274.5, 325.0, 384.8, 455.4, 539.4, 638.5),
        "up": (207.6, 245.2, 291.0, 344.1, 407.5, 482.5, 571.2, 676.0, 800.8, 948.0),
    },
    ("sc3", "CISCO", 1): {
        "low": (17.4, 20.7, 24.6, 29.2, 34.9, 41.4, 49.3, 58.8, 69.8, 83.2),
        "typical": (33.5, 39.9, 47.4, 56.3, 67.3, 79.8, 95.1, 113.3, 134.7, 160.4),
        "up": (49.7, 59.1, 70.2, 83.5, 99.7, 118.1, 140.8, 167.8, 199.5, 237.6),
    },
    ("sc3", "CISCO", 2): {
        "low": (34.8, 41.4, 49.2, 58.5, 69.8, 82.7, 98.6, 117.5, 139.7, 166.4),
        "typical": (67.0, 79.8, 94.8, 112.7, 134.7, 159.5, 190.1, 226.5, 269.3, 320.7),
        "up": (99.3, 118.1, 140.4, 166.9, 199.5, 236.3, 281.6, 335.6, 398.9, 475.1),
    },
    ("sc3", "Statista", 1): {
        "low": (63.8, 75.4, 89.5, 105.8, 125.3, 148.4, 175.7, 207.9, 246.3, 291.5),
        "typical": (123.1, 145.3, 172.5, 204.0, 241.6, 286.1, 338.6, 400.8, 474.7, 562.0),
        "up": (182.3, 215.3, 255.5, 302.2, 357.8, 423.7, 501.6, 593.7, 703.2, 832.5),
    },
    ("sc3", "Statista", 2): {
        "low": (127.7, 150.8, 179.0, 211.6, 250.6, 296.8, 351.3, 415.8, 492.5, 583.0),
        "typical": (246.2, 290.7, 345.0, 408.0, 483.1, 572.1, 677.3, 801.5, 949.5, 1124.0),
        "up": (364.7, 430.6, 511.1, 604.4, 715.6, 847.5, 1003.3, 1187.3, 1406.5, 1665.0),
    },
}

#: Cells whose published 1-decimal rounding already exceeds the tolerance.
ROUNDING_LIMITED_CELLS = {
    ("sc1", "CISCO", 1, "low", 2018),
    ("sc1", "CISCO", 1, "low", 2019),
}


def _projected(scenarios, trends, name, source, psi):
    scenario_name = name if psi == 1 else f"{name}_revised"
    annual = cumulative_to_annual(trends[(source, "cumulative")])
    return project(scenarios[scenario_name], annual)


def test_criterion_6_table_regeneration(scenarios, trends):
    started = time.monotonic()
    checked = 0
    for (name, source, psi), comps in PUBLISHED_PROJECTIONS.items():
        series = _projected(scenarios, trends, name, source, psi)
        for comp, expected_row in comps.items():
            tolerance = 0.07 if comp == "typical" else 0.01
            for offset, expected in enumerate(expected_row):
                year = 2018 + offset
                if (name, source, psi, comp, year) in ROUNDING_LIMITED_CELLS:
                    continue  # covered by the expected-failure test below
                got = getattr(series.values[year], comp)
                assert got == pytest.approx(expected, rel=tolerance), (
                    name, source, psi, comp, year, got, expected,
                )
                checked += 1
    assert checked == 360 - len(ROUNDING_LIMITED_CELLS)
    assert time.monotonic() - started < 60.0


@pytest.mark.parametrize(
    "cell",
    sorted(ROUNDING_LIMITED_CELLS),
    ids=lambda c: f"{c[0]}-{c[1]}-psi{c[2]}-{c[3]}-{c[4]}",
)
@pytest.mark.xfail(
    reason="published value carries one decimal; its rounding step alone "
    "exceeds +-1% at this magnitude",
    strict=True,
)
def test_criterion_6_rounding_limited_cells(scenarios, trends, cell):
    name, source, psi, comp, year = cell
    series = _projected(scenarios, trends, name, source, psi)
    expected = PUBLISHED_PROJECTIONS[(name, source, psi)][comp][year - 2018]
    assert getattr(series.values[year], comp) == pytest.approx(expected, rel=0.01)


def test_criterion_6_spot_anchors(scenarios, trends):
    sc1_cisco = _projected(scenarios, trends, "sc1", "CISCO", 1)
    assert sc1_cisco.values[2027].typical == pytest.approx(21.8, abs=0.1)
    sc3_statista_rev = _projected(scenarios, trends, "sc3", "Statista", 2)
    assert sc3_statista_rev.values[2027].typical == pytest.approx(1124.0, rel=0.07)
    sc3_cisco = _projected(scenarios, trends, "sc3", "CISCO", 1)
    assert sc3_cisco.values[2027].up == pytest.approx(237.6, rel=0.01)


# --- criterion 7: use-case footprint ranges ------------------------------------

PUBLISHED_USE_CASE_RANGES = {
    "occupancy_sensor": (0.6, 3.2),
    "home_assistant": (3.8, 14.9),
    "drone": (6.1, 23.4),
    "smart_watch": (5.4, 19.5),
}


def test_criterion_7_use_case_ranges(use_cases, table, units):
    by_name = {p.name: p for p in use_cases.profiles}
    assert set(by_name) == set(PUBLISHED_USE_CASE_RANGES)
    for name, (published_low, published_up) in PUBLISHED_USE_CASE_RANGES.items():
        total = evaluate_profile(by_name[name], table, units).estimate.total
        # Interval overlap, not exact reproduction: the block-level mapping
        # behind each published device is not itself published.
        assert total.low <= published_up and total.up >= published_low, (
            name, total.as_tuple(), (published_low, published_up),
        )


# --- criterion 8: framework invariants ------------------------------------------


def test_criterion_8_triple_ordering_under_add_and_scale():
    rng = np.random.default_rng(20260823)
    for _ in range(10_000):
        a = EmissionTriple(*np.sort(rng.uniform(0, 1000, 3)))
        b = EmissionTriple(*np.sort(rng.uniform(0, 1000, 3)))
        s = a + b
        assert 0.0 <= s.low <= s.typical <= s.up
        scaled = a.scale(rng.uniform(0, 100))
        assert 0.0 <= scaled.low <= scaled.typical <= scaled.up


def test_criterion_8_contribution_shares_sum_to_one(table, units, use_cases):
    for profile in use_cases.profiles:
        estimate = evaluate_profile(profile, table, units).estimate
        shares = block_contributions(estimate)
        assert sum(shares.values()) == pytest.approx(1.0, abs=1e-9)


def test_criterion_8_projection_linearity(scenarios, trends):
    annual = cumulative_to_annual(trends[("CISCO", "cumulative")])
    base = project(scenarios["sc2"], annual)
    doubled_psi = project(scenarios["sc2_revised"], annual)
    scaled_counts = DeploymentTrend(
        source="CISCO", kind=TrendKind.ANNUAL,
        points={y: 3.0 * n for y, n in annual.points.items()},
    )
    tripled_n = project(scenarios["sc2"], scaled_counts)
    for year, triple in base.values.items():
        assert doubled_psi.values[year].as_tuple() == pytest.approx(
            triple.scale(2.0).as_tuple(), rel=1e-12
        )
        assert tripled_n.values[year].as_tuple() == pytest.approx(
            triple.scale(3.0).as_tuple(), rel=1e-12
        )


def test_criterion_8_alpha_boundaries():
    all_simple = Scenario(name="s", alpha=1.0)
    all_complex = Scenario(name="c", alpha=0.0)
    assert all_simple.per_device() == all_simple.d_simple
    assert all_complex.per_device() == all_complex.d_complex


def test_criterion_8_profile_roundtrip(use_cases):
    rendered = render_profiles(use_cases)
    assert parse_profiles(rendered) == use_cases
    assert render_profiles(parse_profiles(rendered)) == rendered


def test_criterion_8_cli_runs_byte_identical(tmp_path, use_cases):
    from click.testing import CliRunner

    profile_file = tmp_path / "profiles.iotprof"
    profile_file.write_text(render_profiles(use_cases), encoding="utf-8")
    runner = CliRunner()
    outputs = set()
    for _ in range(3):
        for args in (
            ["estimate", str(profile_file), "--format", "csv"],
            ["sensitivity"],
            ["project"],
            ["pathway"],
        ):
            result = runner.invoke(cli_main, args)
            assert result.exit_code == 0
            outputs.add((tuple(args), result.output))
    assert len(outputs) == 4
