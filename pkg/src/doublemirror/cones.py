"""Reflexive Gorenstein cone pairs and their nef-partition conversions.

A nef-partition of length s in a rank-d lattice M gives a cone pair in
``Mbar = Z^s (+) M`` and its dual ``Nbar``:

* ``K`` is generated by ``(delta_i ; v)`` over the vertices of the parts;
* ``K-dual`` by ``(m_1j, ..., m_sj ; w_j)`` over the dual-sum vertices plus
  the unit summands ``(delta_i ; 0)``;
* ``deg = deg_dual = (1, ..., 1 ; 0)`` and the index is s.

Cones can also be entered directly as generator lists in any lattice
presentation; ``normalize_cone`` finds a reference decomposition of the dual
degree element and rewrites the cone in the split form above, recording the
change of coordinates back to the input frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .dd import extreme_rays, solve_rational
from .errors import (
    DecompositionError,
    InputError,
    InternalError,
    NotGorensteinError,
)
from .intmat import (
    IntMatrix,
    dot,
    kernel_basis,
    solve_linear_integer,
    vadd,
    vprimitive,
    vsub,
)
from .lattices import LatticeEmbedding
from .nefpart import NefPartition, dual_nef_partition, validate_nef_partition
from .polytope import Polytope, dual_polytope, hull_vertices, lattice_points


@dataclass(frozen=True)
class GorensteinConePair:
    """Generators of K and K-dual with degree elements, in split coordinates."""

    lattice_bar_m: LatticeEmbedding
    lattice_bar_n: LatticeEmbedding
    k_generators: tuple
    k_dual_generators: tuple
    deg: tuple
    deg_dual: tuple
    index: int
    parts: NefPartition
    dual_parts: tuple  # DualNefPartition
    to_root: IntMatrix  # rows: images of Mbar basis vectors in root coordinates
    root_lattice: LatticeEmbedding
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def s(self):
        return self.index

    @property
    def d(self):
        return self.lattice_bar_m.rank - self.index

    def point_to_root(self, v):
        return tuple(
            sum(v[i] * self.to_root.data[i][j] for i in range(len(v)))
            for j in range(self.to_root.cols)
        )

    def s_vertices(self):
        """Vertices of the degree-one slice S of K."""
        if "s_vertices" not in self._cache:
            pts = [self.slot_point(i, tuple(int(x) for x in v)) for i, part in
                   enumerate(self.parts.parts) for v in part.vertices]
            self._cache["s_vertices"] = tuple(
                tuple(int(x) for x in v) for v in hull_vertices(pts)
            )
        return self._cache["s_vertices"]

    def part_points(self):
        """Lattice points of each part."""
        if "part_points" not in self._cache:
            self._cache["part_points"] = tuple(
                tuple(lattice_points(p)) for p in self.parts.parts
            )
        return self._cache["part_points"]

    def dual_part_points(self):
        if "dual_part_points" not in self._cache:
            self._cache["dual_part_points"] = tuple(
                tuple(lattice_points(p)) for p in self.dual_parts.parts
            )
        return self._cache["dual_part_points"]

    def slice_points(self):
        """Lattice points of S, grouped by slot: slot i holds (delta_i ; m)."""
        return tuple(
            tuple(self.slot_point(i, m) for m in pts) for i, pts in enumerate(self.part_points())
        )

    def slot_point(self, i, m):
        return tuple(1 if k == i else 0 for k in range(self.s)) + tuple(m)


def build_cone(
    np: NefPartition,
    dual_np=None,
    to_root: IntMatrix | None = None,
    root_lattice: LatticeEmbedding | None = None,
) -> GorensteinConePair:
    """Cone pair of a nef-partition whose sum has the origin interior."""
    s = np.length
    d = np.lattice.rank
    origin_cert = np.sum.contains((0,) * d)
    if not origin_cert:
        raise InputError("partition sum must contain the origin")
    if dual_np is None:
        dual_np = dual_nef_partition(np)
    gens = set()
    for i, part in enumerate(np.parts):
        for v in part.vertices:
            gens.add(tuple(1 if k == i else 0 for k in range(s)) + tuple(int(x) for x in v))
    k_generators = tuple(sorted(gens))
    deg = (1,) * s + (0,) * d
    deg_dual = (1,) * s + (0,) * d
    k_dual_generators = dual_generators(np, dual_np)
    if to_root is None:
        to_root = IntMatrix.identity(s + d)
    if root_lattice is None:
        root_lattice = LatticeEmbedding.full(s + d)
    pair = GorensteinConePair(
        lattice_bar_m=LatticeEmbedding.full(s + d),
        lattice_bar_n=LatticeEmbedding.full(s + d),
        k_generators=k_generators,
        k_dual_generators=k_dual_generators,
        deg=deg,
        deg_dual=deg_dual,
        index=s,
        parts=np,
        dual_parts=dual_np,
        to_root=to_root,
        root_lattice=root_lattice,
    )
    ok, idx = verify_reflexive_gorenstein_data(k_generators, k_dual_generators, deg, deg_dual)
    if not ok or idx != s:
        raise InternalError("constructed cone failed the reflexive Gorenstein check")
    return pair


def dual_generators(np: NefPartition, dual_np=None):
    """Generators of the dual cone: minima rows over Ver(nabla) plus units."""
    if dual_np is None:
        dual_np = dual_nef_partition(np)
    s = np.length
    d = np.lattice.rank
    nabla = dual_polytope(np.sum)
    gens = set()
    from .nefpart import pairing_minima

    for w in nabla.vertices:
        w_int = tuple(int(x) for x in w)
        minima = pairing_minima(np, w_int)
        gens.add(tuple(minima) + w_int)
    for i in range(s):
        gens.add(tuple(1 if k == i else 0 for k in range(s)) + (0,) * d)
    result = tuple(sorted(gens))
    deg = (1,) * s + (0,) * d
    for g in result:
        if dot(deg, g) != 1:
            raise InternalError("dual generator off the degree-one hyperplane")
    return result


def verify_reflexive_gorenstein_data(k_generators, k_dual_generators, deg, deg_dual):
    """Both Gorenstein conditions plus interiority of the degree elements.

    Returns ``(flag, index)`` where ``index = <deg, deg_dual>``.
    """
    idx = dot(deg, deg_dual)
    n = len(deg)
    if any(dot(g, deg_dual) != 1 for g in k_generators):
        return False, idx
    if any(dot(deg, w) != 1 for w in k_dual_generators):
        return False, idx
    for g in k_generators:
        for w in k_dual_generators:
            if dot(g, w) < 0:
                return False, idx
    if IntMatrix(tuple(k_generators)).rank() != n:
        return False, idx
    if IntMatrix(tuple(k_dual_generators)).rank() != n:
        return False, idx
    return True, idx


def verify_reflexive_gorenstein(pair: GorensteinConePair):
    return verify_reflexive_gorenstein_data(
        pair.k_generators, pair.k_dual_generators, pair.deg, pair.deg_dual
    )


def in_dual_cone(pair: GorensteinConePair, y):
    """Membership of y in K-dual, tested against the primal generators."""
    return all(dot(g, y) >= 0 for g in pair.k_generators)


def cone_to_nef_partition(pair: GorensteinConePair, e_tilde) -> NefPartition:
    """Nef-partition of a decomposition ``deg_dual = sum e_tilde_i``.

    Slices ``S~_i`` are faces of the degree-one slice S; the projection that
    forgets the first s coordinates identifies their span with M and sends
    ``S~_i`` to the new parts.  The partition invariants are re-verified.
    """
    s = pair.s
    e_tilde = [tuple(int(x) for x in e) for e in e_tilde]
    if len(e_tilde) != s:
        raise DecompositionError(f"expected {s} summands, got {len(e_tilde)}")
    total = (0,) * len(pair.deg_dual)
    for idx, e in enumerate(e_tilde):
        if all(x == 0 for x in e):
            raise DecompositionError(f"summand {idx + 1} is zero")
        if not in_dual_cone(pair, e):
            raise DecompositionError(f"summand {idx + 1} is not in the dual cone")
        total = vadd(total, e)
    if total != pair.deg_dual:
        raise DecompositionError("summands do not add up to deg_dual")

    s_verts = pair.s_vertices()
    parts = []
    for i, e in enumerate(e_tilde):
        face = [v for v in s_verts if dot(v, e) == 1]
        if not face:
            raise InternalError("slice face of a valid decomposition is empty")
        projected = [v[s:] for v in face]
        parts.append(Polytope(pair.parts.lattice, tuple(sorted(
            tuple(Fraction(x) for x in p) for p in projected
        ))))
    np_new = validate_nef_partition(parts)
    old_hull = set(hull_vertices([v for p in pair.parts.parts for v in p.vertices]))
    new_hull = set(hull_vertices([v for p in np_new.parts for v in p.vertices]))
    if old_hull != new_hull:
        raise InternalError("Conv of the new parts differs from Conv of the old parts")
    return np_new


def normalize_cone(lattice: LatticeEmbedding, generators, deg=None, deg_dual=None):
    """Rewrite a directly-entered Gorenstein cone in split nef-partition form.

    Returns ``(pair, info)`` where ``info`` records the reference
    decomposition and section used for the coordinate change.  The returned
    pair's ``to_root`` maps split coordinates to the input lattice's basis
    coordinates.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    n = lattice.rank
    if IntMatrix(tuple(gens)).rank() != n:
        raise NotGorensteinError("cone is not full-dimensional")

    dd_cols = [tuple(col) for col in zip(*gens)]
    sol = solve_rational(dd_cols, (1,) * len(gens))
    if sol is None or any(f.denominator != 1 for f in sol):
        raise NotGorensteinError("generators do not lie on an integral height-one hyperplane")
    computed_deg_dual = tuple(int(f) for f in sol)
    if deg_dual is not None and tuple(deg_dual) != computed_deg_dual:
        raise InputError("supplied deg_dual does not support the generators at height one")
    deg_dual = computed_deg_dual

    rays = extreme_rays(gens)
    ray_cols = [tuple(col) for col in zip(*rays)]
    sol = solve_rational(ray_cols, (1,) * len(rays))
    if sol is None or any(f.denominator != 1 for f in sol):
        raise NotGorensteinError("dual cone is not Gorenstein (no integral degree element)")
    computed_deg = tuple(int(f) for f in sol)
    if deg is not None and tuple(deg) != computed_deg:
        raise InputError("supplied deg does not support the dual rays at height one")
    deg = computed_deg
    s = dot(deg, deg_dual)

    s_vertices = [tuple(int(x) for x in v) for v in hull_vertices(gens)]
    t_poly = Polytope.from_points(lattice.dual(), rays)
    t_points = lattice_points(t_poly)
    reference = _first_decomposition(t_points, deg_dual, s)
    if reference is None:
        raise NotGorensteinError("deg_dual admits no decomposition into dual slice points")
    if len(set(reference)) != s:
        raise InternalError("decomposition summands are not pairwise distinct")

    groups = []
    for e in reference:
        group = [v for v in s_vertices if dot(v, e) == 1]
        if not group:
            raise InternalError("reference summand supports no slice vertex")
        groups.append(sorted(group))
    assignment = {}
    for v in s_vertices:
        hits = [i for i, e in enumerate(reference) if dot(v, e) == 1]
        if len(hits) != 1:
            raise InternalError("slice vertex not in exactly one reference slot")
        assignment[v] = hits[0]

    section = _section_search(groups, deg)
    if section is None:
        point_groups = None
        slice_poly = Polytope.from_points(lattice, s_vertices)
        s_points = lattice_points(slice_poly)
        point_groups = []
        for e in reference:
            point_groups.append(sorted(v for v in s_points if dot(v, e) == 1))
        section = _section_search(point_groups, deg)
    if section is None:
        raise NotGorensteinError(
            "no lattice section of deg: the cone is not of nef-partition type "
            "for the reference decomposition"
        )

    ann_basis = kernel_basis(IntMatrix(tuple(reference)))
    d = ann_basis.rows
    if d != n - s:
        raise InternalError("annihilator lattice has unexpected rank")
    part_polys = []
    for i, group in enumerate(groups):
        verts = []
        for v in group:
            z = solve_linear_integer(ann_basis.transpose(), vsub(v, section[i]))
            if z is None:
                raise InternalError("slice vertex left the annihilator lattice")
            verts.append(z)
        part_polys.append(Polytope.from_points(LatticeEmbedding.full(d), verts))
    np_new = validate_nef_partition(part_polys)
    dual_np = dual_nef_partition(np_new)
    to_root = IntMatrix(tuple(list(section) + list(ann_basis.data)))
    pair = build_cone(np_new, dual_np, to_root=to_root, root_lattice=lattice)
    info = {
        "reference_decomposition": tuple(reference),
        "section": tuple(section),
        "deg_root": deg,
        "deg_dual_root": deg_dual,
        "generator_count": len(gens),
        "s_vertex_count": len(s_vertices),
    }
    return pair, info


def _first_decomposition(points, target, s):
    """Lexicographically first non-decreasing s-tuple of points summing to target."""
    pts = sorted(set(points))
    if not pts:
        return None
    n = len(target)
    mins = [min(p[j] for p in pts) for j in range(n)]
    maxs = [max(p[j] for p in pts) for j in range(n)]

    result = None

    def rec(start, chosen, partial):
        nonlocal result
        if result is not None:
            return
        k = len(chosen)
        if k == s:
            if partial == tuple(target):
                result = tuple(chosen)
            return
        rest = s - k
        for j in range(n):
            need = target[j] - partial[j]
            if need < rest * mins[j] or need > rest * maxs[j]:
                return
        for idx in range(start, len(pts)):
            chosen.append(pts[idx])
            rec(idx, chosen, vadd(partial, pts[idx]))
            chosen.pop()
            if result is not None:
                return

    rec(0, [], (0,) * n)
    return result


def _section_search(groups, target):
    """One point per group summing to target, lexicographically first."""
    n = len(target)
    suffix_min = [None] * (len(groups) + 1)
    suffix_max = [None] * (len(groups) + 1)
    suffix_min[len(groups)] = (0,) * n
    suffix_max[len(groups)] = (0,) * n
    for k in range(len(groups) - 1, -1, -1):
        gmin = tuple(min(p[j] for p in groups[k]) for j in range(n))
        gmax = tuple(max(p[j] for p in groups[k]) for j in range(n))
        suffix_min[k] = vadd(gmin, suffix_min[k + 1])
        suffix_max[k] = vadd(gmax, suffix_max[k + 1])

    chosen = []

    def rec(k, partial):
        if k == len(groups):
            return partial == tuple(target)
        for p in sorted(groups[k]):
            new_partial = vadd(partial, p)
            ok = True
            for j in range(n):
                rest = target[j] - new_partial[j]
                if rest < suffix_min[k + 1][j] or rest > suffix_max[k + 1][j]:
                    ok = False
                    break
            if ok:
                chosen.append(p)
                if rec(k + 1, new_partial):
                    return True
                chosen.pop()
        return False

    if rec(0, (0,) * n):
        return tuple(chosen)
    return None


@dataclass(frozen=True)
class FanCone:
    """A cone of a fan with Reid-style singularity classification flags."""

    generators: tuple
    gorenstein: bool
    canonical: bool | None
    terminal: bool | None
    smooth: bool
    gorenstein_functional: tuple | None


def classify_singularity(generators, rank: int) -> FanCone:
    """Classify the toric singularity of the cone over primitive generators.

    Gorenstein: an integral functional evaluates to one on every generator.
    Canonical / terminal (only meaningful in the Gorenstein case): no lattice
    point of the cone strictly below the generator hyperplane besides the
    origin; terminal additionally forbids non-generator points on it.
    Smooth: the generators extend to a basis of the lattice.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    for g in gens:
        if vprimitive(g) != g or all(x == 0 for x in g):
            raise InputError("generators must be primitive and nonzero")
    mat = IntMatrix(tuple(gens))
    k_sigma = solve_linear_integer(mat, (1,) * len(gens))
    gorenstein = k_sigma is not None
    canonical = None
    terminal = None
    if gorenstein:
        hull = Polytope.from_points(
            LatticeEmbedding.full(rank), [(0,) * rank] + gens
        )
        pts = lattice_points(hull)
        canonical = True
        terminal = True
        gen_set = set(gens)
        for p in pts:
            level = dot(p, k_sigma)
            if all(x == 0 for x in p):
                continue
            if level < 1:
                canonical = False
                terminal = False
            elif level == 1 and p not in gen_set:
                terminal = False
    smooth = False
    if mat.rank() == len(gens):
        from .errors import NotSaturatedError, RankDeficiencyError
        from .intmat import extend_to_basis

        try:
            extend_to_basis(mat, rank)
            smooth = True
        except (NotSaturatedError, RankDeficiencyError):
            smooth = False
    return FanCone(
        generators=tuple(gens),
        gorenstein=gorenstein,
        canonical=canonical,
        terminal=terminal,
        smooth=smooth,
        gorenstein_functional=k_sigma,
    )
