import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caccioppoli import (
    DomainError,
    LabelSet,
    Partition1D,
    Partition2D,
    StructuralError,
    embed_partition,
    jump_set,
    l1_distance,
    perimeter,
    reduced_boundary_measure,
    total_variation,
    validate,
)
from caccioppoli.generators import gen_inscribed_polygon, random_partition_2d

from conftest import centroid_refine

Z3 = LabelSet([[0.0], [1.0], [2.0]])


class TestJumpSet1D:
    def test_staircase_has_two_unit_facets(self, three_level_line):
        facets = jump_set(three_level_line)
        assert [f.carrier for f in facets] == [0.25, 0.5]
        assert all(f.measure == 1.0 for f in facets)

    def test_constant_field_has_empty_jump_set(self):
        u = Partition1D((-1.0, 1.0), [], [0], Z3)
        assert jump_set(u) == []

    def test_same_label_breakpoint_is_normalized_away(self):
        u = Partition1D((0.0, 1.0), [0.3, 0.5], [0, 0, 1], Z3)
        facets = jump_set(u)
        assert [f.carrier for f in facets] == [0.5]

    def test_canonical_orientation(self):
        up = Partition1D((0.0, 1.0), [0.5], [0, 1], Z3)
        f = jump_set(up)[0]
        # plus side carries the smaller label index; nu points into it
        assert (f.plus_label, f.minus_label) == (0, 1)
        assert f.normal[0] == -1.0
        down = Partition1D((0.0, 1.0), [0.5], [1, 0], Z3)
        g = jump_set(down)[0]
        assert (g.plus_label, g.minus_label) == (0, 1)
        assert g.normal[0] == 1.0


class TestJumpSet2D:
    def test_split_square_single_facet(self, split_square):
        facets = jump_set(split_square)
        assert len(facets) == 1
        f = facets[0]
        assert f.measure == pytest.approx(1.0, abs=1e-15)
        assert abs(abs(f.normal[0]) - 1.0) < 1e-15 and abs(f.normal[1]) < 1e-15
        # label 0 lives on the left, so the normal points left
        assert f.normal[0] == -1.0

    def test_normal_is_perpendicular_to_carrier(self, random_partitions):
        for u in random_partitions[:10]:
            for f in jump_set(u):
                d = f.carrier[1] - f.carrier[0]
                assert abs(np.dot(d, f.normal)) < 1e-12 * np.linalg.norm(d)
                assert np.linalg.norm(f.normal) == pytest.approx(1.0, abs=1e-12)

    def test_plus_label_below_minus_label(self, random_partitions):
        for u in random_partitions[:10]:
            for f in jump_set(u):
                assert f.plus_label < f.minus_label

    def test_boundary_edges_excluded(self, split_square):
        # six boundary edges, one interior interface
        assert len(jump_set(split_square)) == 1

    def test_non_conforming_mesh_raises(self):
        u = Partition2D(
            [(0, 0), (1, 0), (2, 0), (1, 0.5), (2, 0.5), (0, 1), (1, 1), (2, 1)],
            [[0, 1, 6, 5], [1, 2, 4, 3], [3, 4, 7, 6]],
            [0, 1, 1],
            LabelSet([[0.0], [1.0]]),
        )
        with pytest.raises(StructuralError):
            jump_set(u)


class TestPerimeter:
    def test_staircase_limit(self):
        u = Partition1D((-1.0, 1.0), [0.0], [0, 2], Z3)
        assert perimeter(u) == 1.0

    def test_constant(self):
        assert perimeter(Partition1D((-1.0, 1.0), [], [1], Z3)) == 0.0

    def test_inscribed_hexagon(self):
        u = gen_inscribed_polygon(6, 0.5)
        # closed form 2*n*r*sin(pi/n) against the facet-sum oracle
        assert perimeter(u) == pytest.approx(2 * 6 * 0.5 * math.sin(math.pi / 6), abs=1e-13)
        oracle = sum(f.measure for f in jump_set(u))
        assert perimeter(u) == oracle


class TestReducedBoundary:
    def test_staircase_middle_label_touches_both_facets(self, three_level_line):
        assert reduced_boundary_measure(three_level_line, 1) == 2.0

    def test_absent_label_has_zero_measure(self, three_level_line):
        u = Partition1D((-1.0, 1.0), [0.0], [0, 2], Z3)
        assert reduced_boundary_measure(u, 1) == 0.0

    def test_split_square_labels(self, split_square):
        assert reduced_boundary_measure(split_square, 0) == pytest.approx(1.0)
        assert reduced_boundary_measure(split_square, 1) == pytest.approx(1.0)

    def test_out_of_range_raises(self, split_square):
        with pytest.raises(DomainError):
            reduced_boundary_measure(split_square, 7)

    def test_halved_sum_identity(self, random_partitions):
        for u in random_partitions:
            total = sum(
                reduced_boundary_measure(u, i) for i in range(u.labels.q)
            )
            assert abs(perimeter(u) - 0.5 * total) < 1e-12 * max(1.0, total)


class TestTotalVariation:
    def test_staircase_limit_jump_sum(self):
        u = Partition1D((-1.0, 1.0), [0.0], [0, 2], Z3)
        assert total_variation(u) == pytest.approx(2.0, abs=1e-15)

    def test_staircase_conserves_tv(self):
        for n in range(3, 65):
            u = Partition1D((-1.0, 1.0), [1 / n, 2 / n], [0, 1, 2], Z3)
            assert total_variation(u) == pytest.approx(2.0, abs=1e-14)

    def test_constant(self):
        assert total_variation(Partition1D((0.0, 1.0), [], [2], Z3)) == 0.0

    def test_double_sum_identity(self, random_partitions):
        # independently recompute the pairwise double-sum form
        for u in random_partitions:
            pair_measure = {}
            for f in jump_set(u):
                key = (f.plus_label, f.minus_label)
                pair_measure[key] = pair_measure.get(key, 0.0) + f.measure
            double = 0.0
            for i in range(u.labels.q):
                for j in range(u.labels.q):
                    if i == j:
                        continue
                    m = pair_measure.get((min(i, j), max(i, j)), 0.0)
                    double += u.labels.pair_distance(i, j) * m
            tv = total_variation(u)
            assert abs(tv - 0.5 * double) < 1e-12 * max(1.0, tv)

    def test_bounded_by_gap_times_perimeter(self, random_partitions):
        for u in random_partitions:
            tv = total_variation(u)
            per = perimeter(u)
            assert u.labels.min_gap() * per <= tv + 1e-12
            assert tv <= u.labels.max_gap() * per + 1e-12

    def test_embedding_mass_factor(self, random_partitions):
        for u in random_partitions:
            v = embed_partition(u)
            expected = math.sqrt(2.0) * perimeter(u)
            assert abs(total_variation(v) - expected) < 1e-12 * max(1.0, expected)


class TestL1Distance:
    def test_identical_fields(self, split_square, three_level_line):
        assert l1_distance(split_square, split_square) == 0.0
        assert l1_distance(three_level_line, three_level_line) == 0.0

    def test_staircase_gap_closed_form_and_riemann(self):
        for n in (3, 7, 16):
            u = Partition1D((-1.0, 1.0), [1 / n, 2 / n], [0, 1, 2], Z3)
            v = Partition1D((-1.0, 1.0), [0.0], [0, 2], Z3)
            gap = l1_distance(u, v)
            assert gap == pytest.approx(3.0 / n, abs=1e-12)
            xs = np.linspace(-1.0, 1.0, 400_001)[:-1] + 1.0 / 400_000
            uu = np.where(xs < 1 / n, 0.0, np.where(xs < 2 / n, 1.0, 2.0))
            vv = np.where(xs < 0.0, 0.0, 2.0)
            riemann = np.sum(np.abs(uu - vv)) * (2.0 / 400_000)
            assert gap == pytest.approx(riemann, abs=1e-3)

    def test_shifted_split_squares_overlay(self):
        h = 0.125
        labels = LabelSet([[0.0], [1.0]])
        mesh = lambda s: Partition2D(
            [(0, 0), (s, 0), (1, 0), (0, 1), (s, 1), (1, 1)],
            [[0, 1, 4, 3], [1, 2, 5, 4]],
            [0, 1],
            labels,
        )
        assert l1_distance(mesh(0.5), mesh(0.5 + h)) == pytest.approx(h, abs=1e-14)

    def test_domain_mismatch_raises(self):
        a = Partition1D((0.0, 1.0), [], [0], Z3)
        b = Partition1D((0.0, 2.0), [], [0], Z3)
        with pytest.raises(DomainError):
            l1_distance(a, b)

    def test_metric_properties_on_random_triples(self):
        rng = np.random.default_rng(11)
        labels = LabelSet([[0.0], [0.7], [2.0]])
        for _ in range(12):
            fields = []
            for _k in range(3):
                bps = np.sort(rng.choice(np.arange(1, 20) / 20.0, size=4, replace=False))
                cl = rng.integers(0, 3, size=5)
                fields.append(Partition1D((0.0, 1.0), bps, cl, labels))
            u, v, w = fields
            duv = l1_distance(u, v)
            assert abs(duv - l1_distance(v, u)) < 1e-12
            assert duv <= l1_distance(u, w) + l1_distance(w, v) + 1e-12

    def test_metric_properties_2d_random(self):
        for seed in range(6):
            u = random_partition_2d(3 * seed)
            shuffled = np.random.default_rng(seed).permutation(u.labels.q)
            v = Partition2D(u.vertices, u.cells, shuffled[u.cell_labels], u.labels)
            w = Partition2D(u.vertices, u.cells, (u.cell_labels + 1) % u.labels.q, u.labels)
            duv = l1_distance(u, v)
            assert abs(duv - l1_distance(v, u)) < 1e-12
            assert duv <= l1_distance(u, w) + l1_distance(w, v) + 1e-12

    @settings(deadline=None, max_examples=40)
    @given(st.data())
    def test_1d_overlay_matches_cellwise_on_shared_grid(self, data):
        grid = [k / 8 for k in range(1, 8)]
        bps = sorted(data.draw(st.sets(st.sampled_from(grid), min_size=1, max_size=5)))
        cl_u = data.draw(st.lists(st.integers(0, 2), min_size=len(bps) + 1, max_size=len(bps) + 1))
        cl_v = data.draw(st.lists(st.integers(0, 2), min_size=len(bps) + 1, max_size=len(bps) + 1))
        u = Partition1D((0.0, 1.0), bps, cl_u, Z3)
        v = Partition1D((0.0, 1.0), bps, cl_v, Z3)
        edges = [0.0] + list(bps) + [1.0]
        expected = sum(
            abs(Z3.value(a)[0] - Z3.value(b)[0]) * (edges[k + 1] - edges[k])
            for k, (a, b) in enumerate(zip(cl_u, cl_v))
        )
        assert l1_distance(u, v) == pytest.approx(expected, abs=1e-12)


class TestValidate:
    def test_valid_meshes_report_clean(self, split_square, random_partitions):
        assert validate(split_square).ok
        for u in random_partitions[:20]:
            rep = validate(u)
            assert rep.ok, rep.violations

    def test_duplicate_breakpoint_flagged(self):
        u = Partition1D((0.0, 1.0), [0.5, 0.5], [0, 1, 2], Z3)
        rep = validate(u)
        assert any("non-increasing breakpoints" in v for v in rep.violations)

    def test_breakpoint_outside_interval_flagged(self):
        u = Partition1D((0.0, 1.0), [1.5], [0, 1], Z3)
        assert not validate(u).ok

    def test_label_count_mismatch_flagged(self):
        u = Partition1D((0.0, 1.0), [0.5], [0], Z3)
        assert not validate(u).ok

    def test_edge_shared_by_three_cells_flagged(self):
        # three triangles on the same base edge
        u = Partition2D(
            [(0, 0), (1, 0), (0.5, 1), (0.5, -1), (0.5, 2)],
            [[0, 1, 2], [0, 3, 1], [0, 1, 4]],
            [0, 1, 1],
            LabelSet([[0.0], [1.0]]),
        )
        rep = validate(u)
        assert any(
            "non-conforming edge" in v and "3 cells" in v for v in rep.violations
        )

    def test_hanging_vertex_flagged(self):
        u = Partition2D(
            [(0, 0), (1, 0), (2, 0), (1, 0.5), (2, 0.5), (0, 1), (1, 1), (2, 1)],
            [[0, 1, 6, 5], [1, 2, 4, 3], [3, 4, 7, 6]],
            [0, 1, 1],
            LabelSet([[0.0], [1.0]]),
        )
        rep = validate(u)
        assert any("non-conforming edge" in v for v in rep.violations)

    def test_clockwise_cell_flagged(self):
        u = Partition2D(
            [(0, 0), (1, 0), (1, 1)],
            [[0, 2, 1]],
            [0],
            LabelSet([[0.0], [1.0]]),
        )
        rep = validate(u)
        assert any("counter-clockwise" in v for v in rep.violations)

    def test_degenerate_area_flagged(self):
        u = Partition2D(
            [(0, 0), (1, 0), (1, 1e-14)],
            [[0, 1, 2]],
            [0],
            LabelSet([[0.0], [1.0]]),
        )
        rep = validate(u)
        assert not rep.ok

    def test_reflex_polygon_flagged(self):
        u = Partition2D(
            [(0, 0), (2, 0), (2, 2), (1, 0.5), (0, 2)],
            [[0, 1, 2, 3, 4]],
            [0],
            LabelSet([[0.0], [1.0]]),
        )
        rep = validate(u)
        assert any("not convex" in v for v in rep.violations)


class TestRefinementInvariance:
    def _pair_totals(self, u):
        totals = {}
        for f in jump_set(u):
            key = (f.plus_label, f.minus_label)
            totals[key] = totals.get(key, 0.0) + f.measure
        return totals

    def test_centroid_refinement_preserves_facets(self, random_partitions):
        for u in random_partitions[:12]:
            refined = centroid_refine(u)
            assert validate(refined).ok, validate(refined).violations
            before = self._pair_totals(u)
            after = self._pair_totals(refined)
            assert set(before) == set(after)
            for key in before:
                assert abs(before[key] - after[key]) < 1e-12 * max(1.0, before[key])
            assert abs(perimeter(u) - perimeter(refined)) < 1e-12 * max(
                1.0, perimeter(u)
            )
