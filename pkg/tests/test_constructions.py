
import numpy as np
import pytest

import foamlab as fl
from foamlab.constructions import _two_lens_ring_edges
from foamlab.equilibrium import half_edge_curvature
from foamlab.errors import GeometryDomainError
from foamlab.geometry import arc_properties


class TestDoubleBubble:
    def test_outer_radii(self):
        c = fl.double_bubble(1.0, 0.6)
        outer = sorted(
            arc_properties(c.arc_of(j)).carrier.radius
            for j in range(c.e)
            if c.edges[j].left == fl.EXTERIOR or c.edges[j].right == fl.EXTERIOR
        )
        assert outer == pytest.approx([0.6, 1.0], abs=1e-12)

    def test_interface_radius(self):
        # 1/r_interface = 1/r_small - 1/r_large
        c = fl.double_bubble(1.0, 0.6)
        iface = next(
            j
            for j in range(c.e)
            if fl.EXTERIOR not in (c.edges[j].left, c.edges[j].right)
        )
        r = arc_properties(c.arc_of(iface)).carrier.radius
        assert 1.0 / r == pytest.approx(1.0 / 0.6 - 1.0, abs=1e-12)

    def test_rejects_bad_radii(self):
        with pytest.raises((GeometryDomainError, ValueError)):
            fl.double_bubble(1.0, -1.0)


class TestArcTriangle:
    def test_three_arcs_meet_at_120(self):
        arcs = fl.arc_triangle(1.0)
        assert len(arcs) == 3
        for a, b in zip(arcs, arcs[1:] + arcs[:1]):
            assert abs(a.head.z - b.tail.z) < 1e-12

    def test_scaling(self):
        small = fl.arc_triangle(0.5)
        big = fl.arc_triangle(1.0)
        assert abs(small[0].tail.z) == pytest.approx(0.5 * abs(big[0].tail.z))


class TestTripleBubble:
    def test_standard(self, triple):
        assert (triple.v, triple.e, triple.n) == (4, 6, 3)
        assert fl.classify(triple) is fl.Verdict.EQUILIBRIUM

    def test_prescribed_areas(self):
        c = fl.triple_bubble(areas=(1.2, 0.8, 1.0))
        assert fl.region_areas(c) == pytest.approx([1.2, 0.8, 1.0], abs=1e-8)


class TestDecoration:
    def test_inserts_three_sided_region(self, triple):
        c = fl.decorate(triple, 0, 0.2)
        assert (c.v, c.e, c.n) == (triple.v + 2, triple.e + 3, triple.n + 1)
        assert fl.classify(c) is fl.Verdict.EQUILIBRIUM
        walk = c.region_walks[c.n]
        assert len(walk) == 3

    def test_preserves_far_geometry(self, triple):
        c = fl.decorate(triple, 0, 0.2)
        far = [
            i
            for i in range(triple.v)
            if i != 0
        ]
        # untouched vertices keep their exact coordinates
        kept = sum(
            any(abs(q.z - triple.vertices[i].z) < 1e-14 for q in c.vertices)
            for i in far
        )
        assert kept == len(far)

    def test_round_trip_identity(self, triple):
        c = fl.scale_three_sided(fl.decorate(triple, 1, 0.25), triple.n + 1, 0.0)
        assert c.v == triple.v and c.e == triple.e and c.n == triple.n
        disp = max(
            min(abs(p.z - q.z) for q in c.vertices) for p in triple.vertices
        )
        assert disp < 1e-7
        assert fl.region_areas(c) == pytest.approx(
            fl.region_areas(triple), abs=1e-9
        )

    def test_partial_shrink_stays_equilibrium(self, triple):
        c = fl.decorate(triple, 0, 0.25)
        half = fl.scale_three_sided(c, c.n, 0.5)
        assert fl.classify(half) is fl.Verdict.EQUILIBRIUM
        assert fl.region_areas(half)[-1] < fl.region_areas(c)[-1]


class TestFourBubble:
    def test_counts_and_verdict(self, four):
        assert (four.v, four.e, four.n) == (6, 9, 4)
        assert fl.classify(four) is fl.Verdict.EQUILIBRIUM

    def test_central_bubble_highest_pressure(self, four):
        p = fl.pressures(four)
        assert p[four.n] == pytest.approx(max(p), abs=1e-12)


class TestTwoLens:
    def test_counts_and_verdict(self, two_lens):
        assert (two_lens.v, two_lens.e, two_lens.n) == (4, 6, 3)
        assert fl.classify(two_lens) is fl.Verdict.EQUILIBRIUM

    def test_lens_pressures_equal(self, two_lens):
        p = fl.pressures(two_lens)
        assert p[2] == pytest.approx(p[3], rel=1e-9)
        assert p[1] < p[2]

    def test_ring_edges_border_big_region(self, two_lens):
        for j in _two_lens_ring_edges():
            ed = two_lens.edges[j]
            assert fl.EXTERIOR in (ed.left, ed.right)
            assert 1 in (ed.left, ed.right)


class TestNecklace:
    @pytest.mark.parametrize("k", [5, 6, 7, 9])
    def test_equilibrium(self, k):
        c = fl.necklace(k)
        assert (c.v, c.e, c.n) == (2 * k, 3 * k, k + 1)
        assert fl.classify(c) is fl.Verdict.EQUILIBRIUM

    def test_bubble_pressures_are_one(self, necklace7):
        p = fl.pressures(necklace7)
        assert p[1 : necklace7.n] == pytest.approx(np.ones(necklace7.n - 1), abs=1e-9)

    def test_chamber_pressure_zero_from_seven(self, necklace7):
        assert fl.pressures(necklace7)[-1] == pytest.approx(0.0, abs=1e-9)

    def test_six_bubble_chamber_walls_are_straight(self, necklace6):
        # at k = 6 the 120-degree conditions force flat chamber walls, so the
        # chamber pressure equals the bubble pressure: it cannot reach zero
        assert fl.pressures(necklace6)[-1] == pytest.approx(1.0, abs=1e-9)

    def test_small_chamber_negative_pressure(self):
        c = fl.necklace(7, inner_radius=0.05)
        assert fl.pressures(c)[-1] < 0.0
        assert fl.classify(c) is fl.Verdict.EQUILIBRIUM

    def test_rejects_small_k(self):
        with pytest.raises((GeometryDomainError, ValueError)):
            fl.necklace(4)


class TestFlower:
    def test_counts_and_verdict(self, flower):
        assert (flower.v, flower.e, flower.n) == (8, 12, 5)
        assert fl.classify(flower) is fl.Verdict.EQUILIBRIUM

    def test_four_equal_petals(self, flower):
        areas = fl.region_areas(flower)
        assert areas[:4] == pytest.approx(np.full(4, areas[0]), rel=1e-9)
        assert areas[4] < areas[0]

    def test_center_has_highest_pressure(self, flower):
        p = fl.pressures(flower)
        assert p[5] == pytest.approx(max(p), abs=1e-12)
        assert p[1] == pytest.approx(p[2], rel=1e-9)


class TestQuasiVariants:
    def test_verdicts(self, quasi_presets):
        for name, c in quasi_presets.items():
            assert fl.classify(c) is fl.Verdict.QUASI_EQUILIBRIUM, name

    def test_zero_amount_reproduces_base(self):
        assert fl.quasi_variant("two_lens_recurved", 0.0).chart() == pytest.approx(
            fl.two_lens().chart()
        )
        assert fl.quasi_variant("four_stretched", 0.0).chart() == pytest.approx(
            fl.four_bubble().chart()
        )

    def test_recurved_hits_curvature_targets(self, quasi_recurved, two_lens):
        for j in _two_lens_ring_edges():
            base = half_edge_curvature(two_lens, (j, True))
            assert half_edge_curvature(quasi_recurved, (j, True)) == pytest.approx(
                1.15 * base, abs=1e-8
            )

    def test_unknown_kind_rejected(self):
        with pytest.raises(GeometryDomainError):
            fl.quasi_variant("bogus")


class TestMobiusInvariance:
    def test_random_maps_preserve_equilibrium(self, triple, rng):
        for _ in range(10):
            m = fl.random_mobius(triple, rng)
            img = fl.mobius_apply_cluster(m, triple)
            assert fl.classify(img) is fl.Verdict.EQUILIBRIUM
            rep = fl.residuals(img)
            assert rep.angle_sup < 1e-8

    def test_areas_change_but_counts_do_not(self, triple, rng):
        m = fl.random_mobius(triple, rng)
        img = fl.mobius_apply_cluster(m, triple)
        assert (img.v, img.e, img.n) == (triple.v, triple.e, triple.n)
