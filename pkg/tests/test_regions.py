"""Region membership, vertex enumeration, and the exact LP bound."""

import random
from fractions import Fraction as F

import pytest

from fhlab.errors import EmptyRegion
from fhlab.exponents import ProblemParams, derive
from fhlab.regions import (
    LebesguePair,
    alpha_tilde_sup,
    in_omega_gamma,
    in_omega_gamma_sigma,
    interior_points,
    lattice_membership,
    margin_outside,
    region_is_empty,
    region_vertices,
)


class TestMembership:
    def test_fixture_point_inside(self, params, point):
        assert in_omega_gamma(point, params)
        assert in_omega_gamma_sigma(point, params)

    def test_boundary_excluded(self, params):
        # y == 2 sigma (1/2 - x) exactly: strict inequality fails
        assert not in_omega_gamma(LebesguePair(F(2, 5), F(1, 10)), params)

    def test_degenerate_edge(self, params):
        # x = 1/2 forces y < 0, impossible
        assert not in_omega_gamma(LebesguePair(F(1, 2), F(1, 100)), params)

    def test_x_cap(self, params):
        # x >= x3 = 1/2 is excluded by the refined region for sigma <= 1
        x3 = derive(params).x3
        assert not in_omega_gamma_sigma(LebesguePair(x3, F(1, 100)), params)

    def test_sigma_gt_one_branch(self):
        p = ProblemParams(d=3, m=2, gamma=F(3, 2), beta=F(3, 2))
        assert in_omega_gamma_sigma(LebesguePair(F(3, 7), F(1, 10)), p)

    def test_refined_subset_of_base(self):
        rng = random.Random(3)
        from fhlab.verification import draw_params

        for _ in range(50):
            p = draw_params(rng)
            if region_is_empty(p):
                continue
            for pt in interior_points(p, 10, rng):
                assert in_omega_gamma_sigma(pt, p)
                assert in_omega_gamma(pt, p)


class TestVertices:
    def test_fixture_vertices(self, params):
        verts = set(region_vertices(params))
        # Hand-enumerated closure polygon of the fixture region.
        assert verts == {
            (F(1, 3), F(1, 12)),
            (F(3, 8), F(1, 8)),
            (F(3, 8), F(0)),
            (F(1, 2), F(0)),
        }

    def test_apex_is_constraint_crossing(self, params):
        # The lower-left vertex (x0, y0) lies on two constraint boundaries.
        der = derive(params)
        assert (der.x0, der.y0) in set(region_vertices(params))


class TestAlphaTildeSup:
    def test_fixture_value(self, params):
        assert alpha_tilde_sup(params) == F(5, 16)

    def test_dominates_interior_samples(self, params):
        rng = random.Random(11)
        sup = alpha_tilde_sup(params)
        sigma = derive(params).sigma
        for pt in interior_points(params, 1000, rng):
            assert pt.inv_q + sigma * pt.inv_r < sup

    def test_empty_region(self):
        # beta at/below the window floor leaves no interior
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(1, 2))
        assert region_is_empty(p)
        with pytest.raises(EmptyRegion):
            alpha_tilde_sup(p)
        with pytest.raises(EmptyRegion):
            interior_points(p, 3, random.Random(0))


class TestMargin:
    def test_inside_is_nonpositive(self, params, point):
        assert margin_outside(point, params) < 0

    def test_far_outside_is_large(self, params):
        assert margin_outside(LebesguePair(F(1, 2), F(3, 4)), params) > F(1, 10)


class TestLattice:
    def test_row_count_and_fixture_member(self, params):
        rows = list(lattice_membership(params, 40))
        assert len(rows) == 1600
        hit = [r for r in rows if (r[0], r[1]) == (F(2, 5), F(1, 20))]
        assert hit and hit[0][2] and hit[0][3]

    def test_empty_region_all_false(self):
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(1, 2))
        rows = list(lattice_membership(p, 20))
        assert all(not r[3] for r in rows)
