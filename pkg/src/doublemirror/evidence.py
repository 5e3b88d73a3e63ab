"""Finite-field sampling evidence for birationality of toric double mirrors.

Points of the determinantal locus D are sampled by restricting det A_1 to
random coordinate lines (evaluation-interpolation on the matrix, then a full
root scan of F_p*), rejection-testing the remaining determinants.  Fibers of
both complete intersections over a sampled point are reconstructed from the
one-dimensional kernels of the evaluated bridge matrices, pushed to the
unprimed torus, and verified exactly against all defining equations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .bridge import BridgeData
from .errors import InputError, InternalError
from .fpkernels import scan_roots
from .laurent import SplitMix64, fp_inv, is_prime
from .nefpart import is_two_independent

MIN_PRIME = 101
LINE_TRIES = 12
SUCCESS_WARN_RATIO = Fraction(1, 2)
NON_GENERIC = "non_generic"


@dataclass(frozen=True)
class SamplePoint:
    y: tuple
    kernel_dims: tuple
    fibers_e: tuple = ()
    fibers_etilde: tuple = ()
    non_generic: bool = False


@dataclass(frozen=True)
class EvidenceReport:
    prime: int
    seed: int
    samples_requested: int
    samples_on_d: int
    fiber_histogram_e: dict
    fiber_histogram_etilde: dict
    delta_regular_pass_rate: str | None
    verdict: bool
    warnings: tuple

    def payload(self):
        return {
            "prime": self.prime,
            "seed": self.seed,
            "samples_requested": self.samples_requested,
            "samples_on_d": self.samples_on_d,
            "fiber_histogram_e": dict(sorted(self.fiber_histogram_e.items())),
            "fiber_histogram_etilde": dict(sorted(self.fiber_histogram_etilde.items())),
            "delta_regular_pass_rate": self.delta_regular_pass_rate,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
        }


def fp_det(rows, p):
    """Determinant of a square matrix over F_p."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = 1
    for k in range(n):
        pivot = next((i for i in range(k, n) if m[i][k] % p), None)
        if pivot is None:
            return 0
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det % p
        det = det * m[k][k] % p
        inv = fp_inv(m[k][k], p)
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[k])]
    return det % p


def fp_right_kernel(rows, p):
    """Basis of the right kernel of a matrix over F_p."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = fp_inv(m[r][col], p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [0] * ncols
        vec[fc] = 1
        for row_idx, pc in enumerate(pivots):
            vec[pc] = (-m[row_idx][fc]) % p
        basis.append(tuple(vec))
    return basis


def _entry_values(bridge: BridgeData, y, p):
    """Evaluate every bridge matrix at the torus point y."""
    return [
        [[poly.evaluate(y) for poly in row] for row in block] for block in bridge.matrices
    ]


def _lagrange_interpolate(ts, vals, p):
    """Coefficients (ascending) of the unique poly of degree < len(ts)."""
    m = len(ts)
    full = [1]
    for t in ts:
        nxt = [0] * (len(full) + 1)
        for i, c in enumerate(full):
            nxt[i] = (nxt[i] - c * t) % p
            nxt[i + 1] = (nxt[i + 1] + c) % p
        full = nxt
    coeffs = [0] * m
    for t, v in zip(ts, vals):
        # synthetic division of full by (x - t)
        quo = [0] * m
        carry = full[m]
        for i in range(m - 1, -1, -1):
            quo[i] = carry
            carry = (full[i] + carry * t) % p
        denom = 0
        power = 1
        for i in range(m):
            denom = (denom + quo[i] * power) % p
            power = power * t % p
        scale = v * fp_inv(denom, p) % p
        for i in range(m):
            coeffs[i] = (coeffs[i] + scale * quo[i]) % p
    return coeffs


def sample_determinantal_points(bridge: BridgeData, count, prime, seed):
    """Up to ``count`` torus points of D, deterministically from the seed.

    Returns ``(samples, stats)``; each sample carries its per-block kernel
    dimensions.  A low success rate attaches a dimension-excess warning in
    ``stats``.
    """
    p = int(prime)
    if p < MIN_PRIME or not is_prime(p):
        raise InputError(f"prime must be a prime >= {MIN_PRIME}")
    if bridge.coeffs.domain != p:
        raise InputError("bridge coefficients are not over the sampling prime")
    dd = bridge.torus_rank
    stats = {"requested": count, "found": 0, "line_tries": 0, "warnings": []}
    if dd == 0:
        if all(det.evaluate(()) != 0 for det in bridge.determinants):
            stats["warnings"].append("determinantal locus is empty (rank-zero torus)")
            return [], stats
        raise InternalError("zero determinant on a rank-zero torus should not build")

    restricted_cache = {}

    def restrictions(fixed, free):
        entries = []
        for block in bridge.matrices:
            rows = []
            for row in block:
                rows.append([poly.restrict_to_line(fixed, free) for poly in row])
            entries.append(rows)
        return entries

    samples = []
    for n in range(count):
        rng = SplitMix64(seed ^ n)
        found = None
        for _attempt in range(LINE_TRIES):
            stats["line_tries"] += 1
            free = rng.below(dd)
            fixed = tuple(
                rng.nonzero_mod(p) if i != free else 1 for i in range(dd)
            )
            entries = restrictions(fixed, free)
            block0 = entries[0]
            n0 = len(block0)
            lo_total = sum(min(e[0] for e in row) for row in block0)
            hi_total = sum(
                max(e[0] + max(len(e[1]) - 1, 0) for e in row) for row in block0
            )
            m = hi_total - lo_total + 1
            if m > p - 1:
                raise InputError("degree bound exceeds the field size; use a larger prime")
            ts = list(range(1, m + 1))
            vals = []
            for t in ts:
                inv_t = fp_inv(t, p)
                mat = []
                for row in block0:
                    mat_row = []
                    for off, cs in row:
                        acc = 0
                        for c in reversed(cs):
                            acc = (acc * t + c) % p
                        if off > 0:
                            acc = acc * pow(t, off, p) % p
                        elif off < 0:
                            acc = acc * pow(inv_t, -off, p) % p
                        mat_row.append(acc)
                    mat.append(mat_row)
                det_val = fp_det(mat, p)
                vals.append(det_val * pow(inv_t if lo_total > 0 else t, abs(lo_total), p) % p)
            if all(v == 0 for v in vals) and m >= 1:
                candidates = [rng.nonzero_mod(p)]
            else:
                coeffs = _lagrange_interpolate(ts, vals, p)
                candidates = scan_roots(coeffs, p)
            accepted = []
            for t in candidates:
                y = tuple(t if i == free else fixed[i] for i in range(dd))
                ok = True
                for k in range(1, len(bridge.matrices)):
                    mat = [[poly.evaluate(y) for poly in row] for row in bridge.matrices[k]]
                    if fp_det(mat, p) != 0:
                        ok = False
                        break
                if ok:
                    accepted.append(y)
            if accepted:
                found = accepted[rng.below(len(accepted))]
                break
        if found is None:
            continue
        dims = []
        for k, block in enumerate(bridge.matrices):
            mat = [[poly.evaluate(found) for poly in row] for row in block]
            dims.append(len(fp_right_kernel(mat, p)))
        samples.append(SamplePoint(y=found, kernel_dims=tuple(dims)))
        stats["found"] += 1
    if count and Fraction(stats["found"], count) < SUCCESS_WARN_RATIO:
        stats["warnings"].append(
            "sampling success rate below threshold: possible dimension excess of D"
        )
    return samples, stats


def fiber(bridge: BridgeData, y, prime, side="e"):
    """Fiber of the chosen complete intersection over a D point.

    Returns a list of torus points in M coordinates, or the string
    ``"non_generic"`` when some block kernel has dimension >= 2.
    """
    p = int(prime)
    if any(v % p == 0 for v in y):
        raise InputError("sample point is off the torus")
    if side not in ("e", "etilde"):
        raise InputError("side must be 'e' or 'etilde'")
    blocks = bridge.blocks
    omega = []
    for k, block in enumerate(bridge.matrices):
        mat = [[poly.evaluate(y) for poly in row] for row in block]
        if side == "etilde":
            mat = [list(col) for col in zip(*mat)]
        kern = fp_right_kernel(mat, p)
        if len(kern) == 0:
            return []
        if len(kern) > 1:
            return NON_GENERIC
        vec = kern[0]
        if vec[0] == 0 or any(v == 0 for v in vec):
            return []
        inv0 = fp_inv(vec[0], p)
        omega.extend(v * inv0 % p for v in vec[1:])
    l_coords = bridge.l_coords if side == "e" else bridge.lt_coords
    stack_inv = bridge.stack_e_inv if side == "e" else bridge.stack_et_inv
    l_values = []
    for c_row in (l_coords.data if l_coords.rows else ()):
        val = 1
        for c, w in zip(c_row, omega):
            if c > 0:
                val = val * pow(w, c, p) % p
            elif c < 0:
                val = val * pow(fp_inv(w, p), -c, p) % p
        l_values.append(val)
    basis_vals = list(y) + l_values
    d = len(basis_vals)
    point = []
    for j in range(d):
        val = 1
        for row_idx in range(d):
            e = stack_inv.data[j][row_idx]
            if e > 0:
                val = val * pow(basis_vals[row_idx], e, p) % p
            elif e < 0:
                val = val * pow(fp_inv(basis_vals[row_idx], p), -e, p) % p
        point.append(val)
    point = tuple(point)
    if any(v == 0 for v in point):
        return []
    equations = bridge.equations_e if side == "e" else bridge.equations_etilde
    for eq in equations:
        if eq.evaluate(point) != 0:
            raise InternalError("reconstructed fiber point violates a defining equation")
    for aq_row, y_val in zip(bridge.ann_basis.data, y):
        val = 1
        for x, e in zip(point, aq_row):
            if e > 0:
                val = val * pow(x, e, p) % p
            elif e < 0:
                val = val * pow(fp_inv(x, p), -e, p) % p
        if val != y_val % p:
            raise InternalError("projection of the fiber point disagrees with the sample")
    return [point]


def delta_regularity_probe(bridge: BridgeData, points, prime, side="e"):
    """Fraction of points where the logarithmic Jacobian has full rank s."""
    p = int(prime)
    equations = bridge.equations_e if side == "e" else bridge.equations_etilde
    s = len(equations)
    d = bridge.pair.d
    passes = 0
    for x in points:
        rows = [
            [eq.log_derivative_eval(x, j) % p for j in range(d)] for eq in equations
        ]
        if _fp_rank(rows, p) == s:
            passes += 1
    return Fraction(passes, len(points)) if points else None


def _fp_rank(rows, p):
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    m = [[x % p for x in r] for r in rows]
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = fp_inv(m[rank][col], p)
        for i in range(rank + 1, nrows):
            if m[i][col]:
                f = m[i][col] * inv % p
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def birationality_evidence(bridge: BridgeData, count, prime, seed) -> EvidenceReport:
    """Sampling report: fiber histograms, regularity rate, verdict, caveats."""
    p = int(prime)
    samples, stats = sample_determinantal_points(bridge, count, p, seed)
    hist_e = {}
    hist_et = {}
    completed = []
    generic = 0
    good = 0
    fiber_points_e = []
    fiber_points_et = []
    for sp in samples:
        fe = fiber(bridge, sp.y, p, side="e")
        fet = fiber(bridge, sp.y, p, side="etilde")
        non_generic = fe == NON_GENERIC or fet == NON_GENERIC
        key_e = NON_GENERIC if fe == NON_GENERIC else str(len(fe))
        key_et = NON_GENERIC if fet == NON_GENERIC else str(len(fet))
        hist_e[key_e] = hist_e.get(key_e, 0) + 1
        hist_et[key_et] = hist_et.get(key_et, 0) + 1
        if not non_generic:
            generic += 1
            if len(fe) == 1 and len(fet) == 1:
                good += 1
            fiber_points_e.extend(fe)
            fiber_points_et.extend(fet)
        completed.append(
            replace(
                sp,
                fibers_e=() if fe == NON_GENERIC else tuple(fe),
                fibers_etilde=() if fet == NON_GENERIC else tuple(fet),
                non_generic=non_generic,
            )
        )
    rate_e = delta_regularity_probe(bridge, fiber_points_e, p, side="e")
    rate_et = delta_regularity_probe(bridge, fiber_points_et, p, side="etilde")
    total_pts = len(fiber_points_e) + len(fiber_points_et)
    if total_pts:
        passes = (rate_e or 0) * len(fiber_points_e) + (rate_et or 0) * len(fiber_points_et)
        rate = Fraction(passes, total_pts)
        rate_str = f"{rate.numerator}/{rate.denominator}"
    else:
        rate_str = None
    warnings = list(bridge.warnings) + list(stats["warnings"])
    flag, witness = is_two_independent(bridge.pair.parts)
    if not flag:
        warnings.append(
            "nef-partition is not 2-independent (subset "
            + ",".join(str(i + 1) for i in witness)
            + "): irreducibility of the intersections is not guaranteed"
        )
    if any(sp.non_generic for sp in completed):
        warnings.append("non-generic samples excluded from the birationality verdict")
    warnings.append("irreducibility and dimension hypotheses sampled, not proven")
    verdict = generic > 0 and 20 * good >= 19 * generic
    return EvidenceReport(
        prime=p,
        seed=seed,
        samples_requested=count,
        samples_on_d=len(samples),
        fiber_histogram_e=hist_e,
        fiber_histogram_etilde=hist_et,
        delta_regular_pass_rate=rate_str,
        verdict=verdict,
        warnings=tuple(warnings),
    )
