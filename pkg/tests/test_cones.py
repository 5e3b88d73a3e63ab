"""Gorenstein cone pairs, decomposition-to-partition conversion, singularities."""

import pytest

from doublemirror.canned import product_projective_lattice, square_part, two_segment_parts
from doublemirror.cones import (
    build_cone,
    classify_singularity,
    cone_to_nef_partition,
    dual_generators,
    normalize_cone,
    verify_reflexive_gorenstein,
    verify_reflexive_gorenstein_data,
)
from doublemirror.dd import cone_contains, extreme_rays
from doublemirror.errors import DecompositionError
from doublemirror.intmat import dot
from doublemirror.lattices import LatticeEmbedding
from doublemirror.nefpart import validate_nef_partition
from doublemirror.polytope import Polytope, hull_vertices

Z2 = LatticeEmbedding.full(2)


def polys(lattice, vertex_lists):
    return [Polytope.from_points(lattice, pts) for pts in vertex_lists]


@pytest.fixture(scope="module")
def two_segment_pair():
    np_ = validate_nef_partition(polys(Z2, two_segment_parts()))
    return build_cone(np_)


class TestBuildCone:
    def test_two_segment(self, two_segment_pair):
        pair = two_segment_pair
        assert pair.index == 2
        # spec's listed generating set spans the same cone as ours
        listed = [
            (1, 0, 1, 0),
            (1, 0, -1, 0),
            (1, 0, 0, 0),
            (0, 1, 0, 1),
            (0, 1, 0, -1),
            (0, 1, 0, 0),
        ]
        assert set(pair.k_generators) <= set(listed)
        for g in listed:
            assert cone_contains(g, list(pair.k_generators))
        for g in pair.k_generators:
            assert cone_contains(g, listed)

    def test_length_one_square(self):
        np_ = validate_nef_partition(polys(Z2, square_part()))
        pair = build_cone(np_)
        assert pair.index == 1
        assert len(pair.k_generators) == 4

    def test_dual_generators_two_segment(self, two_segment_pair):
        expected = {
            (1, 0, 1, 0),
            (1, 0, -1, 0),
            (0, 1, 0, 1),
            (0, 1, 0, -1),
            (1, 0, 0, 0),
            (0, 1, 0, 0),
        }
        assert set(two_segment_pair.k_dual_generators) == expected

    def test_dual_generators_square(self):
        np_ = validate_nef_partition(polys(Z2, square_part()))
        gens = dual_generators(np_)
        assert (1, 0, 0) in gens
        # cross-polytope vertices at first coordinate one
        assert set(gens) == {(1, 0, 0), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)}

    def test_cross_generation(self, two_segment_pair):
        # the symmetric description (b ; sum b_i nabla_i) generates the same dual cone
        pair = two_segment_pair
        symmetric = []
        for j, nabla in enumerate(pair.dual_parts.parts):
            for w in nabla.vertices:
                symmetric.append(
                    tuple(1 if k == j else 0 for k in range(pair.s))
                    + tuple(int(x) for x in w)
                )
        for g in symmetric:
            assert cone_contains(g, list(pair.k_dual_generators))
        for g in pair.k_dual_generators:
            assert cone_contains(g, symmetric)


class TestVerify:
    def test_two_segment_true(self, two_segment_pair):
        assert verify_reflexive_gorenstein(two_segment_pair) == (True, 2)

    def test_non_reflexive_cone_false(self):
        # cone over the flat diamond: Gorenstein but not reflexive Gorenstein
        verts = [(2, 0), (-2, 0), (0, 1), (0, -1)]
        gens = [(1,) + v for v in verts]
        rays = extreme_rays(gens)
        deg_dual = (1, 0, 0)
        # rays are not all at height one against any integral deg
        ok, _ = verify_reflexive_gorenstein_data(gens, rays, (1, 0, 0), deg_dual)
        assert not ok


class TestConeToNefPartition:
    def test_trivial_decomposition_identity(self, two_segment_pair):
        pair = two_segment_pair
        e = [(1, 0, 0, 0), (0, 1, 0, 0)]
        np_new = cone_to_nef_partition(pair, e)
        for old, new in zip(pair.parts.parts, np_new.parts):
            assert old.vertex_set() == new.vertex_set()

    def test_bad_sum_rejected(self, two_segment_pair):
        with pytest.raises(DecompositionError):
            cone_to_nef_partition(two_segment_pair, [(1, 0, 0, 0), (1, 0, 0, 0)])

    def test_zero_summand_rejected(self, two_segment_pair):
        with pytest.raises(DecompositionError):
            cone_to_nef_partition(two_segment_pair, [(1, 1, 0, 0), (0, 0, 0, 0)])

    def test_outside_cone_rejected(self, two_segment_pair):
        with pytest.raises(DecompositionError):
            cone_to_nef_partition(two_segment_pair, [(2, 0, 3, 0), (-1, 1, -3, 0)])


class TestNormalizeCone:
    @pytest.mark.parametrize("n,t,rank,gens", [(2, 2, 3, 4), (3, 3, 7, 27)])
    def test_product_projective(self, n, t, rank, gens):
        lattice, gvecs, deg, deg_dual = product_projective_lattice(n, t)
        assert lattice.rank == rank
        assert len(gvecs) == gens
        pair, info = normalize_cone(lattice, gvecs, deg, deg_dual)
        assert verify_reflexive_gorenstein(pair) == (True, n)
        assert pair.d == (n - 1) * (t - 1)
        assert info["generator_count"] == gens
        # the coordinate change sends the slot points back into the cone slice
        for i in range(pair.s):
            root = pair.point_to_root(pair.slot_point(i, (0,) * pair.d))
            assert dot(root, deg_dual) == 1

    def test_computed_degrees_match(self):
        lattice, gvecs, deg, deg_dual = product_projective_lattice(2, 2)
        pair, info = normalize_cone(lattice, gvecs)
        assert info["deg_root"] == deg
        assert info["deg_dual_root"] == deg_dual

    def test_index_one_cone_over_square(self):
        # s = 1: the reference decomposition is deg_dual itself and the
        # section is deg, an interior slice point rather than a vertex
        lattice = LatticeEmbedding.full(3)
        gens = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]
        pair, info = normalize_cone(lattice, gens)
        assert pair.s == 1 and pair.d == 2
        assert verify_reflexive_gorenstein(pair) == (True, 1)
        assert len(pair.parts.parts[0].vertices) == 4

    def test_hull_preserved(self):
        lattice, gvecs, _, _ = product_projective_lattice(3, 3)
        pair, info = normalize_cone(lattice, gvecs)
        # root images of the split generators are cone generators
        root_gens = {pair.point_to_root(g) for g in pair.k_generators}
        for g in root_gens:
            assert cone_contains(g, gvecs)
        for g in gvecs:
            assert cone_contains(g, sorted(root_gens))


class TestSingularities:
    def test_smooth_quadrant(self):
        fc = classify_singularity([(1, 0), (0, 1)], 2)
        assert fc.smooth and fc.gorenstein and fc.canonical and fc.terminal

    def test_non_terminal_gorenstein(self):
        fc = classify_singularity([(1, 0), (1, 2)], 2)
        assert fc.gorenstein
        assert fc.gorenstein_functional is not None
        assert all(dot(fc.gorenstein_functional, g) == 1 for g in fc.generators)
        assert fc.canonical
        assert not fc.terminal
        assert not fc.smooth

    def test_reflexive_fan_rays(self, two_segment_pair):
        # 1-dimensional cones of the face fan of a reflexive polytope are
        # gorenstein and canonical
        nabla_vertices = hull_vertices(
            [v for p in two_segment_pair.dual_parts.parts for v in p.vertices]
        )
        for v in nabla_vertices:
            fc = classify_singularity([tuple(int(x) for x in v)], 2)
            assert fc.gorenstein and fc.canonical

    def test_non_primitive_rejected(self):
        from doublemirror.errors import InputError

        with pytest.raises(InputError):
            classify_singularity([(2, 0)], 2)
