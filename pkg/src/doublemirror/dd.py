"""Double description method over exact integers.

``extreme_rays`` computes the extreme rays of a pointed polyhedral cone
``{x : <c, x> >= 0}`` from its constraint rows.  Everything stays in integer
arithmetic: rays are kept primitive, and the classic combinatorial adjacency
test runs on active-constraint bitsets.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InternalError, RankDeficiencyError
from .intmat import IntMatrix, vprimitive


def solve_rational(rows, rhs):
    """Solve ``x . rows = rhs`` exactly over the rationals, or return None.

    ``rows`` is a list of equal-length sequences (the equations' coefficient
    rows as *columns* of the system read the usual way round: we solve for a
    coefficient per row).  Used for expressing vectors in a spanning set.
    """
    m = len(rows)
    if m == 0:
        return () if all(x == 0 for x in rhs) else None
    n = len(rows[0])
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(rhs[j])] for j in range(n)]
    pivots = []
    r = 0
    for col in range(m):
        pivot = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if aug[i][m] != 0:
            return None
    x = [Fraction(0)] * m
    for row_idx, col in enumerate(pivots):
        x[col] = aug[row_idx][m]
    return tuple(x)


class NotPointedError(RankDeficiencyError):
    """The constraint rows do not have full column rank."""


def _independent_subset(constraints, n):
    """Indices of ``n`` constraints with full rank, greedily in input order."""
    chosen = []
    rows = []
    for idx, c in enumerate(constraints):
        candidate = IntMatrix(tuple(rows + [tuple(c)]))
        if candidate.rank() == len(rows) + 1:
            rows.append(tuple(c))
            chosen.append(idx)
            if len(chosen) == n:
                return chosen
    return None


def extreme_rays(constraints):
    """Extreme rays of the pointed cone ``{x : <c, x> >= 0 for all c}``.

    Returns primitive integer rays, lexicographically sorted.  Raises
    ``NotPointedError`` when the constraints do not force pointedness.
    """
    constraints = [tuple(int(x) for x in c) for c in constraints]
    if not constraints:
        raise NotPointedError("no constraints")
    n = len(constraints[0])
    chosen = _independent_subset(constraints, n)
    if chosen is None:
        raise NotPointedError("constraint matrix is rank deficient; cone contains a line")
    order = chosen + [i for i in range(len(constraints)) if i not in set(chosen)]
    ordered = [constraints[i] for i in order]

    base = IntMatrix(tuple(ordered[:n]))
    det = base.det()
    if det == 0:
        raise InternalError("independent subset produced singular matrix")
    rays = []
    activity = []
    for j in range(n):
        target = tuple((det if i == j else 0) for i in range(n))
        col = solve_rational([tuple(row) for row in zip(*base.data)], target)
        if col is None:
            raise InternalError("failed to invert initial cone basis")
        denom = 1
        for f in col:
            denom = denom * f.denominator // _gcd(denom, f.denominator)
        ray = tuple(int(f * denom) for f in col)
        if det < 0:
            ray = tuple(-x for x in ray)
        rays.append(vprimitive(ray))
        activity.append(((1 << n) - 1) ^ (1 << j))

    for k in range(n, len(ordered)):
        c = ordered[k]
        vals = [sum(a * b for a, b in zip(c, r)) for r in rays]
        if all(v >= 0 for v in vals):
            for i, v in enumerate(vals):
                if v == 0:
                    activity[i] |= 1 << k
            continue
        plus = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        new_rays = []
        new_act = []
        for ip in plus:
            for im in minus:
                common = activity[ip] & activity[im]
                adjacent = True
                for q in range(len(rays)):
                    if q != ip and q != im and (activity[q] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                combo = tuple(
                    vals[ip] * rm - vals[im] * rp for rp, rm in zip(rays[ip], rays[im])
                )
                new_rays.append(vprimitive(combo))
                new_act.append(common | (1 << k))
        keep_rays = [rays[i] for i in plus + zero]
        keep_act = [activity[i] for i in plus] + [activity[i] | (1 << k) for i in zero]
        rays = keep_rays + new_rays
        activity = keep_act + new_act
    unique = sorted(set(rays))
    return unique


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def cone_contains(point, generators):
    """Exact membership of a rational point in the cone over ``generators``."""
    facets = extreme_rays(generators)
    return all(sum(f * p for f, p in zip(facet, point)) >= 0 for facet in facets)
