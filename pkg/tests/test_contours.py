"""Tests for boundary-loop extraction, classification, and the droplet census.

Independent oracles used here:
  - disagreement-bond count: total loop length must equal the number of
    nearest-neighbor pairs with opposite spins (border pairs included once,
    border-border pairs never disagree under a uniform border)
  - scipy.ndimage.label: loops whose immediate interior is minus are in
    bijection with 4-connected minus clusters; loops whose interior is plus
    are in bijection with plus clusters not touching the lattice edge
  - exact re-rendering: flipping every loop interior, nesting included,
    must reproduce the original grid
"""

import math

import numpy as np
import pytest
from scipy import ndimage

from dropletlab.contours import (
    CensusSummary,
    Contour,
    ContourCensus,
    census_frequencies,
    census_of,
    census_window,
    classify,
    droplet_fraction,
    extract_contours,
    parse_grid,
    reconstruct_magnetization,
    render_spins,
)
from dropletlab.lattice import CanonicalConstraint, SpinConfig


def config_from_text(text: str, beta: float = 0.7) -> SpinConfig:
    g = parse_grid(text)
    assert g.shape[0] == g.shape[1], "fixtures here are square"
    return SpinConfig(L=g.shape[0], beta=beta, spins=g, boundary="plus")


def random_config(L: int, gen: np.random.Generator, p_minus: float = 0.5) -> SpinConfig:
    spins = np.where(gen.random((L, L)) < p_minus, -1, 1).astype(np.int8)
    return SpinConfig(L=L, beta=0.7, spins=spins, boundary="plus")


def disagreement_bonds(config: SpinConfig) -> int:
    # every +- nearest-neighbor pair contributes one dual edge to some loop
    p = config.padded
    return int(np.count_nonzero(p[:, :-1] != p[:, 1:]) + np.count_nonzero(p[:-1, :] != p[1:, :]))


# the corner rule is geometric, not spin-dependent: at a 4-valent dual corner
# the region touching through the NE-SW diagonal stays connected (either spin)
# and the NW-SE contact is split; this structure encodes that connectivity
NESW_STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=int)


def cluster_counts(config: SpinConfig) -> tuple[int, int]:
    """(minus clusters, enclosed plus clusters) under the corner rule above."""
    _, n_minus = ndimage.label(config.spins < 0, structure=NESW_STRUCTURE)
    # padding keeps the plus sea one cluster; everything else is enclosed
    _, n_plus_padded = ndimage.label(config.padded > 0, structure=NESW_STRUCTURE)
    return n_minus, n_plus_padded - 1


def make_contour(diameter: int, volume: int, interior_spin: int = -1) -> Contour:
    # geometry-free stand-in for classification tests
    return Contour(
        length=2 * (diameter + 1) + 2 * (diameter + 1),
        diameter=diameter,
        volume=volume,
        interior_spin=interior_spin,
        exterior=True,
        _rows=np.array([0]),
        _cols=np.array([0]),
    )


SINGLE = """
+++
+-+
+++
"""

BLOCK2 = """
++++
+--+
+--+
++++
"""

DIAG_NWSE = """
++++
+-++
++-+
++++
"""

DIAG_NESW = """
++++
++-+
+-++
++++
"""

NESTED = """
+++++++
+-----+
+-----+
+--+--+
+-----+
+-----+
+++++++
"""


class TestExtraction:
    def test_all_plus_has_no_loops(self):
        assert extract_contours(SpinConfig.all_plus(8, 0.7)) == []

    def test_single_minus(self):
        (c,) = extract_contours(config_from_text(SINGLE))
        assert (c.length, c.diameter, c.volume) == (4, 1, 1)
        assert c.interior_spin == -1
        assert c.exterior

    def test_two_by_two_block(self):
        (c,) = extract_contours(config_from_text(BLOCK2))
        assert (c.length, c.diameter, c.volume) == (8, 2, 4)
        assert c.interior_spin == -1

    def test_diagonal_touch_nwse_splits(self):
        # corner-touching minus cells on the NW-SE diagonal stay separate loops
        cs = extract_contours(config_from_text(DIAG_NWSE))
        assert sorted((c.length, c.diameter, c.volume) for c in cs) == [(4, 1, 1), (4, 1, 1)]

    def test_diagonal_touch_nesw_joins(self):
        # the complementary diagonal pairing merges them into one loop
        (c,) = extract_contours(config_from_text(DIAG_NESW))
        assert (c.length, c.diameter, c.volume) == (8, 2, 2)

    def test_nested_island(self):
        cs = extract_contours(config_from_text(NESTED))
        assert len(cs) == 2
        outer = max(cs, key=lambda c: c.volume)
        inner = min(cs, key=lambda c: c.volume)
        # outer volume counts every enclosed cell, the plus island included
        assert (outer.length, outer.diameter, outer.volume) == (20, 5, 25)
        assert outer.interior_spin == -1 and outer.exterior
        assert (inner.length, inner.diameter, inner.volume) == (4, 1, 1)
        assert inner.interior_spin == 1 and not inner.exterior

    def test_minimal_lattice(self):
        (c,) = extract_contours(SpinConfig(1, 0.7, spins=[[-1]]))
        assert (c.length, c.diameter, c.volume, c.interior_spin) == (4, 1, 1, -1)

    def test_free_boundary_rejected(self):
        with pytest.raises(ValueError, match="plus boundary"):
            extract_contours(SpinConfig.all_plus(4, 0.7, boundary="free"))


class TestInvariants:
    def test_render_round_trip_bulk(self):
        # re-rendering from the loop set must reproduce the grid exactly
        gen = np.random.default_rng(20260801)
        for k in range(10_000):
            L = 8
            c = random_config(L, gen, p_minus=float(gen.uniform(0.1, 0.9)))
            cs = extract_contours(c)
            assert np.array_equal(render_spins(cs, L), c.spins), f"mismatch at case {k}"

    def test_render_round_trip_varied_sizes(self):
        gen = np.random.default_rng(7)
        for L in (1, 2, 3, 5, 9, 16, 31):
            for _ in range(40):
                c = random_config(L, gen)
                assert np.array_equal(render_spins(extract_contours(c), L), c.spins)

    def test_signed_volume_sum_rule(self):
        gen = np.random.default_rng(11)
        for _ in range(300):
            c = random_config(12, gen, p_minus=float(gen.uniform(0.05, 0.95)))
            cs = extract_contours(c)
            assert reconstruct_magnetization(cs, c.L) == c.m
            minus = sum(k.volume if k.interior_spin < 0 else -k.volume for k in cs)
            assert minus == int(np.count_nonzero(c.spins < 0))

    def test_total_length_equals_disagreement_bonds(self):
        gen = np.random.default_rng(12)
        for _ in range(300):
            c = random_config(10, gen, p_minus=float(gen.uniform(0.05, 0.95)))
            cs = extract_contours(c)
            assert sum(k.length for k in cs) == disagreement_bonds(c)

    def test_cluster_count_oracle(self):
        gen = np.random.default_rng(13)
        for _ in range(300):
            c = random_config(11, gen, p_minus=float(gen.uniform(0.1, 0.9)))
            cs = extract_contours(c)
            n_minus_loops = sum(1 for k in cs if k.interior_spin < 0)
            n_plus_loops = sum(1 for k in cs if k.interior_spin > 0)
            n_minus_clusters, n_enclosed_plus = cluster_counts(c)
            assert n_minus_loops == n_minus_clusters
            assert n_plus_loops == n_enclosed_plus

    def test_length_bounds_and_diameter(self):
        gen = np.random.default_rng(14)
        for _ in range(200):
            c = random_config(9, gen)
            for k in extract_contours(c):
                # corner extents along both axes from the loop's own edges
                di = int(k._rows.max()) + 1 - int(k._rows.min())
                dj = int(k._cols.max()) - int(k._cols.min())
                assert k.length >= 2 * (di + dj)
                assert k.diameter == max(di, dj)
                assert k.length % 2 == 0

    def test_exterior_flags_partition_volume(self):
        # exterior loop volumes are disjoint, so they sum to at most L^2
        gen = np.random.default_rng(15)
        for _ in range(100):
            c = random_config(10, gen)
            cs = extract_contours(c)
            ext_vol = sum(k.volume for k in cs if k.exterior)
            assert ext_vol <= c.L * c.L
            assert all(k.interior_spin == -1 for k in cs if k.exterior)

    def test_fast_census_matches_classify(self):
        gen = np.random.default_rng(16)
        for _ in range(100):
            c = random_config(13, gen, p_minus=float(gen.uniform(0.1, 0.9)))
            for K in (0.5, 1.0, 1.75, 4.0):
                assert census_of(c, K) == classify(extract_contours(c), c.L, K)


class TestClassify:
    def test_window_example(self):
        # at ln L = 10 and K = 2 the window is [20, L^(2/3)/2]
        L = 22026
        lo, hi, valid = census_window(L, 2.0)
        assert abs(lo - 20.0) < 1e-3
        assert 392.0 < hi < 394.0
        assert valid

    def test_band_assignment(self):
        L = 22026
        census = classify(
            [make_contour(19, 19), make_contour(400, 4000), make_contour(100, 500)], L, 2.0
        )
        assert (census.n_small, census.n_intermediate, census.n_large) == (1, 1, 1)
        assert census.largest_diameter == 400
        assert census.largest_volume == 4000
        assert census.total_large_volume == 4000

    def test_band_edges_inclusive(self):
        L = 22026
        lo, hi, _ = census_window(L, 2.0)
        at_lo = make_contour(math.ceil(lo), 10)
        census = classify([at_lo], L, 2.0)
        assert census.n_intermediate == 1
        just_above = make_contour(math.floor(hi) + 1, 10)
        census = classify([just_above], L, 2.0)
        assert census.n_large == 1

    def test_partition_exhaustive(self):
        gen = np.random.default_rng(17)
        for _ in range(50):
            c = random_config(12, gen)
            cs = extract_contours(c)
            census = classify(cs, c.L, 1.0)
            assert census.n_total == len(cs)

    def test_inverted_window_flagged_not_fatal(self):
        # bench-scale lattices invert the window; large takes priority there
        lo, hi, valid = census_window(64, 4.0)
        assert lo > hi
        assert not valid
        census = classify([make_contour(10, 60)], 64, 4.0)
        assert not census.window_valid
        assert census.n_intermediate == 0
        assert census.n_large == 1  # 10 > hi even though 10 < lo

    def test_validation(self):
        with pytest.raises(ValueError, match="L"):
            census_window(1, 2.0)
        for bad in (0.0, -1.0, float("inf"), float("nan")):
            with pytest.raises(ValueError, match="K"):
                census_window(64, bad)

    def test_empty_census(self):
        census = classify([], 64, 1.0)
        assert census.n_total == 0
        assert census.largest_volume == 0
        assert census.total_large_volume == 0


class TestDropletFraction:
    def test_square_droplet_exact(self):
        # 64-cell square against a planned excess of 96 cells is exactly 2/3
        spins = np.ones((64, 64), dtype=np.int8)
        spins[20:28, 20:28] = -1
        c = SpinConfig(64, 0.7, spins=spins)
        census = census_of(c, 4.0)
        assert census.n_large == 1 and census.largest_volume == 64
        lam = droplet_fraction(census, CanonicalConstraint(v_l=96.0, target_m=0))
        assert lam == pytest.approx(2.0 / 3.0, abs=0.0)

    def test_zero_without_large_loop(self):
        census = classify([], 64, 1.0)
        assert droplet_fraction(census, CanonicalConstraint(v_l=96.0, target_m=0)) == 0.0

    def test_rejects_nonpositive_volume(self):
        census = classify([], 64, 1.0)
        with pytest.raises(ValueError, match="v_l"):
            droplet_fraction(census, CanonicalConstraint(v_l=0.0, target_m=0))


class TestCensusFrequencies:
    @staticmethod
    def _census(n_small, n_inter, n_large, largest=0):
        return ContourCensus(
            n_small=n_small,
            n_intermediate=n_inter,
            n_large=n_large,
            K=1.0,
            lo=4.0,
            hi=16.0,
            window_valid=True,
            largest_volume=largest,
            largest_diameter=20 if n_large else 0,
            total_large_volume=largest,
        )

    def test_event_arithmetic(self):
        records = [
            self._census(3, 0, 0),          # quiet: no band activity
            self._census(1, 2, 0),          # intermediate activity only
            self._census(0, 0, 1, largest=48),  # clean droplet
            self._census(2, 1, 1, largest=30),  # droplet plus intermediate
        ]
        s = census_frequencies(records, v_l=96.0)
        assert isinstance(s, CensusSummary)
        assert s.n == 4
        assert s.p_no_intermediate == pytest.approx(0.5)
        assert s.p_no_spanning == pytest.approx(0.25)
        assert s.p_droplet == pytest.approx(0.5)
        for p, err in (
            (s.p_no_intermediate, s.p_no_intermediate_err),
            (s.p_no_spanning, s.p_no_spanning_err),
            (s.p_droplet, s.p_droplet_err),
        ):
            assert err == pytest.approx(math.sqrt(p * (1 - p) / 4))
        expect = np.array([0.0, 0.0, 0.5, 30.0 / 96.0])
        np.testing.assert_allclose(s.lambda_values, expect)
        assert s.mean_lambda == pytest.approx(expect.mean())
        assert s.mean_lambda_err == pytest.approx(expect.std(ddof=1) / 2.0)

    def test_lambda_optional(self):
        s = census_frequencies([self._census(1, 0, 0)])
        assert s.mean_lambda is None and s.lambda_values is None

    def test_validation(self):
        with pytest.raises(ValueError, match="at least one"):
            census_frequencies([])
        with pytest.raises(ValueError, match="v_l"):
            census_frequencies([self._census(1, 0, 0)], v_l=-1.0)


class TestParseGrid:
    def test_round_trip(self):
        g = parse_grid(NESTED)
        assert g.shape == (7, 7)
        assert g.dtype == np.int8
        assert int(g.sum()) == 49 - 2 * 24

    def test_rejects_ragged(self):
        with pytest.raises(ValueError, match="equal length"):
            parse_grid("++\n+++")

    def test_rejects_unknown_chars(self):
        with pytest.raises(ValueError, match="'x'"):
            parse_grid("+x\n++")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            parse_grid("   \n  ")
