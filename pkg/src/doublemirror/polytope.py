"""Exact rational polytopes: hulls, duality, reflexivity, lattice points.

Vertices are tuples of ``Fraction`` in lattice basis coordinates.  Facets are
pairs ``(normal, offset)`` of integers, jointly primitive, meaning the
halfspace ``<x, normal> >= -offset``.  All vertex and facet lists are sorted
lexicographically so every derived report is byte-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, lcm

from .dd import NotPointedError, extreme_rays, solve_rational
from .errors import (
    InputError,
    InternalError,
    LatticeMismatchError,
    LowerDimensionalError,
    OriginNotInteriorError,
    UnboundedSliceError,
)
from .intmat import IntMatrix, hnf, kernel_basis, saturate, solve_linear_integer, vprimitive
from .lattices import LatticeEmbedding


def _as_fraction_tuple(point):
    return tuple(Fraction(x) for x in point)


def _scale_to_int(row):
    """Clear denominators and divide by the content; keeps the ray direction."""
    denom = 1
    for x in row:
        denom = lcm(denom, Fraction(x).denominator)
    ints = tuple(int(Fraction(x) * denom) for x in row)
    return vprimitive(ints)


def affine_basis(points):
    """Base point plus an integer basis of the saturated direction lattice.

    Returns ``(x0, W)`` where ``W`` is an ``IntMatrix`` whose rows span the
    direction space; ``W`` has zero rows removed and is saturated, so integer
    points of the affine hull have integer coordinates over it.
    """
    pts = [_as_fraction_tuple(p) for p in points]
    x0 = pts[0]
    dir_rows = []
    for p in pts[1:]:
        d = tuple(a - b for a, b in zip(p, x0))
        if any(x != 0 for x in d):
            dir_rows.append(_scale_to_int(d))
    if not dir_rows:
        return x0, IntMatrix(())
    h, _ = hnf(IntMatrix(tuple(dir_rows)))
    rows = tuple(r for r in h.data if any(x != 0 for x in r))
    sat, _ = saturate(IntMatrix(rows))
    return x0, sat


def _to_affine_coords(points, x0, w: IntMatrix):
    """Coordinates of each point over the affine basis, exact."""
    coords = []
    for p in points:
        d = tuple(Fraction(a) - b for a, b in zip(p, x0))
        z = solve_rational([tuple(r) for r in w.data], d)
        if z is None:
            raise InternalError("point left its own affine hull")
        coords.append(z)
    return coords


def _from_affine_coords(z, x0, w: IntMatrix):
    return tuple(
        x0[j] + sum(Fraction(zi) * w.data[i][j] for i, zi in enumerate(z))
        for j in range(len(x0))
    )


def _facets_fulldim(points):
    """Facets of a full-dimensional point set, via double description."""
    constraints = [_scale_to_int((1,) + tuple(p)) for p in points]
    rays = extreme_rays(constraints)
    facets = []
    for ray in rays:
        normal = ray[1:]
        if all(x == 0 for x in normal):
            continue
        facets.append((normal, ray[0]))
    return sorted(facets)


def _vertices_from_facets(facets, dim):
    """Vertex enumeration of a bounded H-polytope; raises when unbounded."""
    constraints = [(off,) + tuple(normal) for normal, off in facets]
    constraints.append((1,) + (0,) * dim)
    rays = extreme_rays(constraints)
    vertices = []
    for ray in rays:
        t = ray[0]
        if t == 0:
            raise UnboundedSliceError("polyhedron has a nonzero recession ray")
        vertices.append(tuple(Fraction(x, t) for x in ray[1:]))
    return sorted(set(vertices))


def hull_vertices(points):
    """Extreme points of a finite rational point set, any dimension."""
    pts = sorted(set(_as_fraction_tuple(p) for p in points))
    if not pts:
        raise InputError("empty point set")
    if len(pts) == 1:
        return tuple(pts)
    x0, w = affine_basis(pts)
    if w.rows == 0:
        return (pts[0],)
    zs = _to_affine_coords(pts, x0, w)
    facets = _facets_fulldim(zs)
    z_vertices = _vertices_from_facets(facets, w.rows)
    return tuple(sorted(_from_affine_coords(z, x0, w) for z in z_vertices))


def facet_enumeration(vertices):
    """Irredundant facets of a full-dimensional vertex set.

    Raises ``LowerDimensionalError`` (carrying the affine hull dimension)
    when the points do not span the ambient space.
    """
    pts = [_as_fraction_tuple(p) for p in vertices]
    if not pts:
        raise InputError("empty vertex set")
    dim = len(pts[0])
    _, w = affine_basis(pts)
    if w.rows < dim:
        raise LowerDimensionalError(
            f"polytope has affine dimension {w.rows} < {dim}", affine_dim=w.rows
        )
    return _facets_fulldim(pts)


@dataclass(frozen=True)
class Polytope:
    """Rational polytope with exact vertex (and cached facet) data."""

    lattice: LatticeEmbedding
    vertices: tuple
    _facets: list = field(default=None, compare=False, repr=False)

    @staticmethod
    def from_points(lattice: LatticeEmbedding, points) -> "Polytope":
        verts = hull_vertices(points)
        if len(verts[0]) != lattice.rank:
            raise InputError("point dimension does not match lattice rank")
        return Polytope(lattice, verts)

    @property
    def ambient_dim(self):
        return self.lattice.rank

    def affine_dim(self):
        _, w = affine_basis(self.vertices)
        return w.rows

    def is_full_dimensional(self):
        return self.affine_dim() == self.ambient_dim

    def facets(self):
        """Facet list, computed at most once."""
        if self._facets is None:
            object.__setattr__(self, "_facets", facet_enumeration(self.vertices))
        return self._facets

    def contains(self, point):
        """Exact membership test, valid in any dimension."""
        p = _as_fraction_tuple(point)
        if self.is_full_dimensional():
            return all(
                sum(c * x for c, x in zip(normal, p)) >= -off for normal, off in self.facets()
            )
        x0, w = affine_basis(self.vertices)
        d = tuple(a - b for a, b in zip(p, x0))
        z = solve_rational([tuple(r) for r in w.data], d) if w.rows else (
            () if all(x == 0 for x in d) else None
        )
        if z is None:
            return False
        if w.rows == 0:
            return True
        zs = _to_affine_coords(self.vertices, x0, w)
        facets = _facets_fulldim(zs)
        return all(sum(c * x for c, x in zip(normal, z)) >= -off for normal, off in facets)

    def is_lattice_polytope(self):
        return all(all(x.denominator == 1 for x in v) for v in self.vertices)

    def vertex_set(self):
        return set(self.vertices)

    def translate(self, shift):
        shift = _as_fraction_tuple(shift)
        return Polytope(
            self.lattice, tuple(sorted(tuple(a + b for a, b in zip(v, shift)) for v in self.vertices))
        )


@dataclass(frozen=True)
class ReflexivityCertificate:
    is_reflexive: bool
    dual_vertices: tuple | None
    witness: tuple | None
    interior_witness: bool


def dual_polytope(p: Polytope) -> Polytope:
    """Polar dual ``{y : <x, y> >= -1 for all x in p}``.

    Requires the origin strictly interior (hence ``p`` full-dimensional).
    """
    if not p.is_full_dimensional():
        raise OriginNotInteriorError("polytope is not full-dimensional")
    facets = p.facets()
    if any(off <= 0 for _, off in facets):
        raise OriginNotInteriorError("origin is not strictly interior")
    dual_vertices = tuple(
        sorted(tuple(Fraction(c, off) for c in normal) for normal, off in facets)
    )
    dual = Polytope(p.lattice.dual(), dual_vertices)
    # facets of the dual are the vertices of p, supporting at -1
    dual_facets = sorted(_split_offset(_scale_to_int(tuple(v) + (1,))) for v in p.vertices)
    object.__setattr__(dual, "_facets", dual_facets)
    return dual


def _split_offset(row):
    return (row[:-1], row[-1])


def is_reflexive(p: Polytope) -> ReflexivityCertificate:
    """Reflexivity certificate: origin interior and all dual vertices integral."""
    try:
        dual = dual_polytope(p)
    except OriginNotInteriorError:
        return ReflexivityCertificate(False, None, None, interior_witness=False)
    if not p.is_lattice_polytope():
        return ReflexivityCertificate(False, None, None, interior_witness=True)
    for v in dual.vertices:
        if any(x.denominator != 1 for x in v):
            return ReflexivityCertificate(False, None, witness=v, interior_witness=True)
    return ReflexivityCertificate(True, dual.vertices, None, interior_witness=True)


def lattice_points(p: Polytope):
    """All lattice points of ``p``, sorted lexicographically.

    Works for lower-dimensional polytopes by enumerating inside the affine
    lattice of the hull.
    """
    if len(p.vertices) == 1:
        v = p.vertices[0]
        return [tuple(int(x) for x in v)] if all(x.denominator == 1 for x in v) else []
    x0, w = affine_basis(p.vertices)
    base = _integral_point_in_affine_hull(x0, w)
    if base is None:
        return []
    zs = _to_affine_coords(list(p.vertices), base, w)
    facets = _facets_fulldim(zs)
    z_points = _enumerate_integer_points(zs, facets)
    result = [
        tuple(int(base[j] + sum(z[i] * w.data[i][j] for i in range(w.rows))) for j in range(len(base)))
        for z in z_points
    ]
    return sorted(result)


def _integral_point_in_affine_hull(x0, w: IntMatrix):
    """A lattice point on ``x0 + span(w)``, or None."""
    if all(x.denominator == 1 for x in x0):
        return tuple(Fraction(int(x)) for x in x0)
    n = len(x0)
    normals = kernel_basis(w) if w.rows else IntMatrix.identity(n)
    if normals.rows == 0:
        return tuple(Fraction(floor(x)) for x in x0)
    rows = []
    rhs = []
    for normal in normals.data:
        val = sum(Fraction(c) * x for c, x in zip(normal, x0))
        rows.append(tuple(c * val.denominator for c in normal))
        rhs.append(int(val.numerator))
    sol = solve_linear_integer(IntMatrix(tuple(rows)), tuple(rhs))
    if sol is None:
        return None
    return tuple(Fraction(x) for x in sol)


def _enumerate_integer_points(z_vertices, facets):
    """Integer points of a full-dimensional polytope given vertices + facets.

    Depth-first over coordinates with per-facet suffix bounds derived from the
    vertices; candidates are confirmed against the exact H-representation.
    """
    dim = len(z_vertices[0])
    lo = [ceil(min(v[j] for v in z_vertices)) for j in range(dim)]
    hi = [floor(max(v[j] for v in z_vertices)) for j in range(dim)]
    suffix_max = []
    for normal, _off in facets:
        sm = [Fraction(0)] * (dim + 1)
        for k in range(dim - 1, -1, -1):
            sm[k] = max(
                sum(Fraction(normal[j]) * v[j] for j in range(k, dim)) for v in z_vertices
            )
        suffix_max.append(sm)
    out = []
    point = [0] * dim

    def rec(k, partials):
        if k == dim:
            out.append(tuple(point))
            return
        for val in range(lo[k], hi[k] + 1):
            point[k] = val
            ok = True
            new_partials = []
            for f_idx, (normal, off) in enumerate(facets):
                pd = partials[f_idx] + normal[k] * val
                if pd + suffix_max[f_idx][k + 1] < -off:
                    ok = False
                    break
                new_partials.append(pd)
            if ok:
                rec(k + 1, new_partials)

    rec(0, [0] * len(facets))
    return [
        z
        for z in out
        if all(sum(c * x for c, x in zip(normal, z)) >= -off for normal, off in facets)
    ]


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    """Minkowski sum, as the hull of pairwise vertex sums."""
    if p.lattice != q.lattice:
        raise LatticeMismatchError("operands live in different lattices")
    candidates = [tuple(a + b for a, b in zip(u, v)) for u, v in itertools.product(p.vertices, q.vertices)]
    return Polytope(p.lattice, hull_vertices(candidates))


def minkowski_sum_all(polys):
    total = polys[0]
    for q in polys[1:]:
        total = minkowski_sum(total, q)
    return total


def slice_cone(cone_generators, level_functionals, lattice: LatticeEmbedding) -> Polytope:
    """The polytope ``{x in cone : <x, f> = t for each (f, t)}``.

    The cone must be full-dimensional; an unbounded slice raises
    ``UnboundedSliceError``.
    """
    gens = [tuple(int(x) for x in g) for g in cone_generators]
    dim = len(gens[0])
    try:
        cone_facets = extreme_rays(gens)
    except NotPointedError as exc:
        raise InputError("cone is not full-dimensional") from exc
    phi_rows = [tuple(int(x) for x in f) for f, _t in level_functionals]
    targets = [Fraction(t) for _f, t in level_functionals]
    x0 = solve_rational([tuple(col) for col in zip(*phi_rows)], targets)
    if x0 is None:
        return Polytope(lattice, ())
    w = kernel_basis(IntMatrix(tuple(phi_rows)))
    if w.rows == 0:
        point = tuple(x0)
        if all(sum(f * x for f, x in zip(facet, point)) >= 0 for facet in cone_facets):
            return Polytope(lattice, (point,))
        return Polytope(lattice, ())
    reduced = []
    for facet in cone_facets:
        coeffs = tuple(sum(facet[j] * w.data[i][j] for j in range(dim)) for i in range(w.rows))
        off = sum(Fraction(facet[j]) * x0[j] for j in range(dim))
        # <x0 + z.W, facet> >= 0  <=>  <coeffs, z> >= -off
        if all(c == 0 for c in coeffs):
            if off < 0:
                return Polytope(lattice, ())
            continue
        row = _scale_to_int(coeffs + (off,))
        reduced.append((row[:-1], row[-1]))
    try:
        z_vertices = _vertices_from_facets(sorted(set(reduced)), w.rows)
    except UnboundedSliceError:
        raise UnboundedSliceError("functionals do not cut the cone to a bounded slice")
    except NotPointedError as exc:
        raise UnboundedSliceError("functionals do not cut the cone to a bounded slice") from exc
    verts = [
        tuple(x0[j] + sum(z[i] * w.data[i][j] for i in range(w.rows)) for j in range(dim))
        for z in z_vertices
    ]
    if not verts:
        return Polytope(lattice, ())
    return Polytope(lattice, hull_vertices(verts))
