"""Polytope machinery: hulls, duality, reflexivity, lattice points, slices."""

import itertools
import random
from fractions import Fraction

import pytest

from doublemirror.errors import (
    LatticeMismatchError,
    LowerDimensionalError,
    OriginNotInteriorError,
    UnboundedSliceError,
)
from doublemirror.lattices import LatticeEmbedding
from doublemirror.polytope import (
    Polytope,
    dual_polytope,
    facet_enumeration,
    hull_vertices,
    is_reflexive,
    lattice_points,
    minkowski_sum,
    slice_cone,
)

Z1 = LatticeEmbedding.full(1)
Z2 = LatticeEmbedding.full(2)
Z3 = LatticeEmbedding.full(3)


def poly(lattice, pts):
    return Polytope.from_points(lattice, pts)


SEGMENT = [(-1,), (1,)]
SQUARE = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
SIMPLEX = [(-1, -1), (1, 0), (0, 1)]


def brute_force_facets_2d(vertices):
    """Exhaustive supporting-line oracle: test every line through vertex pairs."""
    facets = set()
    verts = [tuple(Fraction(x) for x in v) for v in vertices]
    for a, b in itertools.combinations(verts, 2):
        d = (b[0] - a[0], b[1] - a[1])
        normal = (-d[1], d[0])
        for sign in (1, -1):
            n = (sign * normal[0], sign * normal[1])
            vals = [n[0] * v[0] + n[1] * v[1] for v in verts]
            support = n[0] * a[0] + n[1] * a[1]
            if all(v >= support for v in vals) and sum(v == support for v in vals) >= 2:
                denom = 1
                for x in n + (support,):
                    denom = denom * Fraction(x).denominator
                ints = [int(Fraction(x) * denom) for x in n + (-support,)]
                g = 0
                for x in ints:
                    g = abs(x) if g == 0 else __import__("math").gcd(g, abs(x))
                facets.add((tuple(x // g for x in ints[:2]), ints[2] // g))
    return sorted(facets)


class TestFacetEnumeration:
    def test_segment(self):
        facets = facet_enumeration(SEGMENT)
        assert facets == [((-1,), 1), ((1,), 1)]

    def test_square(self):
        facets = facet_enumeration(SQUARE)
        assert facets == sorted(
            [((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)]
        )

    def test_simplex_against_brute_force(self):
        facets = facet_enumeration(SIMPLEX)
        assert facets == brute_force_facets_2d(SIMPLEX)

    def test_random_2d_against_brute_force(self):
        rng = random.Random(4242)
        for _ in range(40):
            pts = [(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(8)]
            verts = hull_vertices(pts)
            if len(verts) < 3:
                continue
            assert facet_enumeration(verts) == brute_force_facets_2d(verts)

    def test_lower_dimensional_error(self):
        with pytest.raises(LowerDimensionalError) as err:
            facet_enumeration([(0, 0), (1, 1)])
        assert err.value.affine_dim == 1


class TestHull:
    def test_prunes_interior(self):
        verts = hull_vertices(SQUARE + [(0, 0), (1, 0)])
        assert set(verts) == {tuple(map(Fraction, v)) for v in SQUARE}

    def test_round_trip(self):
        # vertices of the H-representation equal the input vertex set
        for pts in (SEGMENT, SQUARE, SIMPLEX):
            p = poly(LatticeEmbedding.full(len(pts[0])), pts)
            again = hull_vertices(p.vertices)
            assert set(again) == p.vertex_set()

    def test_lower_dim_hull(self):
        verts = hull_vertices([(0, 0), (1, 1), (2, 2)])
        assert set(verts) == {(Fraction(0), Fraction(0)), (Fraction(2), Fraction(2))}


class TestDual:
    def test_segment_self_dual(self):
        p = poly(Z1, SEGMENT)
        d = dual_polytope(p)
        assert d.vertex_set() == p.vertex_set()

    def test_square_cross(self):
        p = poly(Z2, SQUARE)
        d = dual_polytope(p)
        assert d.vertex_set() == {
            (Fraction(1), Fraction(0)),
            (Fraction(-1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            (Fraction(0), Fraction(-1)),
        }

    def test_simplex(self):
        p = poly(Z2, SIMPLEX)
        d = dual_polytope(p)
        assert d.vertex_set() == {
            (Fraction(-1), Fraction(-1)),
            (Fraction(-1), Fraction(2)),
            (Fraction(2), Fraction(-1)),
        }

    def test_double_dual(self):
        for pts in (SEGMENT, SQUARE, SIMPLEX):
            p = poly(LatticeEmbedding.full(len(pts[0])), pts)
            dd = dual_polytope(dual_polytope(p))
            assert dd.vertex_set() == p.vertex_set()

    def test_origin_not_interior(self):
        with pytest.raises(OriginNotInteriorError):
            dual_polytope(poly(Z2, [(0, 0), (1, 0), (0, 1)]))

    def test_order_reversal(self):
        # q inside p implies dual(p) inside dual(q), membership-checked on vertices
        p = poly(Z2, SQUARE)
        q = poly(Z2, [(1, 0), (-1, 0), (0, 1), (0, -1)])
        dp, dq = dual_polytope(p), dual_polytope(q)
        for v in dp.vertices:
            assert dq.contains(v)


class TestReflexive:
    def test_square(self):
        cert = is_reflexive(poly(Z2, SQUARE))
        assert cert.is_reflexive and cert.interior_witness

    def test_flat_diamond_not_reflexive(self):
        cert = is_reflexive(poly(Z2, [(2, 0), (-2, 0), (0, 1), (0, -1)]))
        assert not cert.is_reflexive
        assert cert.interior_witness
        assert cert.witness is not None
        assert any(x.denominator == 2 for x in cert.witness)

    def test_simplex(self):
        cert = is_reflexive(poly(Z2, SIMPLEX))
        assert cert.is_reflexive

    def test_no_interior(self):
        cert = is_reflexive(poly(Z2, [(0, 0), (1, 0), (0, 1)]))
        assert not cert.is_reflexive and not cert.interior_witness


class TestLatticePoints:
    def test_square(self):
        pts = lattice_points(poly(Z2, SQUARE))
        assert len(pts) == 9

    def test_diagonal_segment(self):
        pts = lattice_points(poly(Z2, [(0, 0), (2, 2)]))
        assert pts == [(0, 0), (1, 1), (2, 2)]

    def test_triangle(self):
        pts = lattice_points(poly(Z2, [(0, 0), (1, 0), (0, 1)]))
        assert pts == [(0, 0), (0, 1), (1, 0)]

    def test_against_bounding_box_oracle(self):
        rng = random.Random(31415)
        for _ in range(25):
            pts = [(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(6)]
            p = poly(Z2, pts)
            got = lattice_points(p)
            lo = [min(int(v[j]) - 1 for v in p.vertices) for j in range(2)]
            hi = [max(int(v[j]) + 2 for v in p.vertices) for j in range(2)]
            expected = [
                x
                for x in itertools.product(range(lo[0], hi[0] + 1), range(lo[1], hi[1] + 1))
                if p.contains(x)
            ]
            assert got == sorted(expected)

    def test_rational_vertices(self):
        p = poly(Z1, [(Fraction(-1, 2),), (Fraction(3, 2),)])
        assert lattice_points(p) == [(0,), (1,)]

    def test_no_lattice_points(self):
        p = poly(Z2, [(Fraction(1, 3), 0), (Fraction(2, 3), 0)])
        assert lattice_points(p) == []


class TestMinkowski:
    def test_cross_from_segments(self):
        a = poly(Z2, [(-1, 0), (1, 0)])
        b = poly(Z2, [(0, -1), (0, 1)])
        s = minkowski_sum(a, b)
        assert s.vertex_set() == poly(Z2, SQUARE).vertex_set()

    def test_identity(self):
        p = poly(Z2, SIMPLEX)
        zero = poly(Z2, [(0, 0)])
        assert minkowski_sum(p, zero).vertex_set() == p.vertex_set()

    def test_grid_membership_oracle(self):
        p = poly(Z2, [(0, 0), (1, 0), (0, 1)])
        q = poly(Z2, [(0, 0), (1, 0)])
        s = minkowski_sum(p, q)
        for x in itertools.product(range(-1, 4), repeat=2):
            in_sum = any(
                p.contains((Fraction(x[0]) - b[0], Fraction(x[1]) - b[1]))
                for b in [(0, 0), (Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(0))]
            )
            # exact test: x in p+q iff exists b in q with x-b in p; q is a segment,
            # so checking endpoints and midpoint suffices for this small case only
            # as a necessary condition; rely on full membership both ways:
            if s.contains(x):
                assert any(
                    q.contains((Fraction(x[0]) - a[0], Fraction(x[1]) - a[1]))
                    for a in lattice_points(p)
                ) or in_sum
        # every vertex sum is inside
        for u in p.vertices:
            for v in q.vertices:
                assert s.contains((u[0] + v[0], u[1] + v[1]))

    def test_lattice_mismatch(self):
        a = poly(Z2, SQUARE)
        b = poly(Z1, SEGMENT)
        with pytest.raises(LatticeMismatchError):
            minkowski_sum(a, b)


class TestSlice:
    def test_first_quadrant(self):
        p = slice_cone([(1, 0), (0, 1)], [((1, 1), 1)], Z2)
        assert p.vertex_set() == {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}

    def test_point_slice(self):
        p = slice_cone([(1, 0), (0, 1)], [((1, 0), 1), ((0, 1), 0)], Z2)
        assert p.vertex_set() == {(Fraction(1), Fraction(0))}

    def test_unbounded(self):
        with pytest.raises(UnboundedSliceError):
            slice_cone([(1, 0), (0, 1)], [((1, 0), 1)], Z2)

    def test_degree_slice_of_simplicial_cone(self):
        gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        p = slice_cone(gens, [((1, 1, 1), 1)], Z3)
        assert len(p.vertices) == 3
