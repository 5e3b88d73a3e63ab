"""Nef-partitions, their duals, and the pairing minima they satisfy.

A nef-partition is a list of lattice polytopes, each containing the origin,
whose Minkowski sum is reflexive.  The dual partition consists of the
polytopes ``nabla_j = {y : <x, y> >= -delta_ij for all x in part_i}``; both
defining duality relations are verified exactly before a dual is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegeneratePartError,
    InternalError,
    LatticeMismatchError,
    OriginMissingError,
    SumNotFullDimensionalError,
    SumNotReflexiveError,
)
from .polytope import (
    Polytope,
    _vertices_from_facets,
    dual_polytope,
    hull_vertices,
    is_reflexive,
    minkowski_sum_all,
)


@dataclass(frozen=True)
class NefPartition:
    parts: tuple
    sum: Polytope

    @property
    def length(self):
        return len(self.parts)

    @property
    def lattice(self):
        return self.parts[0].lattice


@dataclass(frozen=True)
class DualNefPartition:
    parts: tuple

    @property
    def lattice(self):
        return self.parts[0].lattice


def validate_nef_partition(parts) -> NefPartition:
    """Check the nef-partition invariants, raising a distinct error per kind."""
    if not parts:
        raise OriginMissingError("empty partition")
    lattice = parts[0].lattice
    for p in parts:
        if p.lattice != lattice:
            raise LatticeMismatchError("parts live in different lattices")
    origin = (0,) * lattice.rank
    for idx, p in enumerate(parts):
        if not p.is_lattice_polytope():
            raise OriginMissingError(f"part {idx + 1} is not a lattice polytope")
        if not p.contains(origin):
            raise OriginMissingError(f"part {idx + 1} does not contain the origin")
        if p.vertex_set() == {tuple(Fraction(0) for _ in range(lattice.rank))}:
            raise DegeneratePartError(
                f"part {idx + 1} is the single point 0, giving a zero degree summand"
            )
    total = minkowski_sum_all(list(parts))
    if not total.is_full_dimensional():
        raise SumNotFullDimensionalError(
            f"Minkowski sum has dimension {total.affine_dim()} < {lattice.rank}"
        )
    cert = is_reflexive(total)
    if not cert.is_reflexive:
        raise SumNotReflexiveError("Minkowski sum of the parts is not reflexive")
    return NefPartition(tuple(parts), total)


def dual_nef_partition(np: NefPartition) -> DualNefPartition:
    """The dual nef-partition, verified against both duality relations."""
    lattice = np.lattice
    dual_lattice = lattice.dual()
    s = np.length
    duals = []
    for j in range(s):
        halfspaces = []
        for i, part in enumerate(np.parts):
            offset = 1 if i == j else 0
            for v in part.vertices:
                normal = tuple(int(x) for x in v)
                if any(x != 0 for x in normal):
                    halfspaces.append((normal, offset))
        verts = _vertices_from_facets(sorted(set(halfspaces)), lattice.rank)
        duals.append(Polytope(dual_lattice, tuple(sorted(verts))))

    for j, nabla in enumerate(duals):
        if not nabla.is_lattice_polytope():
            raise InternalError(f"dual part {j + 1} has a non-integral vertex")

    union_hull = set(hull_vertices([v for nabla in duals for v in nabla.vertices]))
    if union_hull != dual_polytope(np.sum).vertex_set():
        raise InternalError("Conv of dual parts differs from the dual of the sum")

    for i, part in enumerate(np.parts):
        for j, nabla in enumerate(duals):
            target = -1 if i == j else 0
            for w in nabla.vertices:
                m = min(sum(x * y for x, y in zip(v, w)) for v in part.vertices)
                if m < target:
                    raise InternalError("pairing minimum fell below -delta_ij")
                if any(x != 0 for x in w) and m != target:
                    raise InternalError("pairing minimum not attained at a dual vertex")
    return DualNefPartition(tuple(duals))


def pairing_minima(np: NefPartition, w):
    """``m_i = -min over the vertices of part i of <x, w>``."""
    w = tuple(w)
    return tuple(
        -min(sum(int(x) * y for x, y in zip(v, w)) for v in part.vertices)
        for part in np.parts
    )


def is_two_independent(np: NefPartition):
    """Check 2-independence: no subset of n parts spanning dimension <= n.

    Returns ``(flag, witness_subset_or_None)``.
    """
    import itertools

    s = np.length
    for size in range(1, s + 1):
        for subset in itertools.combinations(range(s), size):
            rows = []
            for i in subset:
                for v in np.parts[i].vertices:
                    rows.append(tuple(int(x) for x in v))
            from .intmat import IntMatrix

            dim = IntMatrix(tuple(rows)).rank() if rows else 0
            if dim <= size:
                return False, subset
    return True, None
