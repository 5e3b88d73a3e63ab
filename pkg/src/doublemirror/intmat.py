"""Exact integer matrix algebra: HNF, SNF, kernels, saturation, solving.

All arithmetic uses Python's arbitrary-precision integers; nothing here ever
touches floating point.  Conventions:

* Matrices are row-major and immutable (``IntMatrix``).
* Row Hermite normal form: pivot entries positive, entries above each pivot
  reduced into ``[0, pivot)``, pivot columns strictly increasing, zero rows
  at the bottom.
* Smith normal form: ``u * a * v`` diagonal with ``d1 | d2 | ...`` and
  ``di >= 0``; ``u`` and ``v`` unimodular.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotSaturatedError, RankDeficiencyError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    data: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        object.__setattr__(self, "data", rows)

    @property
    def rows(self):
        return len(self.data)

    @property
    def cols(self):
        return len(self.data[0]) if self.data else 0

    @staticmethod
    def identity(n):
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(m, n):
        return IntMatrix(tuple((0,) * n for _ in range(m)))

    def transpose(self):
        return IntMatrix(tuple(zip(*self.data))) if self.data else IntMatrix(())

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = tuple(zip(*other.data)) if other.data else ()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.data)
        )

    def mul_vec(self, v):
        if self.cols != len(v):
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def row(self, i):
        return self.data[i]

    def __iter__(self):
        return iter(self.data)

    def det(self):
        """Exact determinant via fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return 1
        m = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def rank(self):
        """Rank over the rationals, fraction-free."""
        m = [list(r) for r in self.data]
        nrows, ncols = self.rows, self.cols
        r = 0
        for col in range(ncols):
            pivot = next((i for i in range(r, nrows) if m[i][col] != 0), None)
            if pivot is None:
                continue
            m[r], m[pivot] = m[pivot], m[r]
            for i in range(r + 1, nrows):
                if m[i][col] != 0:
                    a, b = m[r][col], m[i][col]
                    m[i] = [a * y - b * x for x, y in zip(m[r], m[i])]
            r += 1
            if r == nrows:
                break
        return r

    def is_unimodular(self):
        return self.rows == self.cols and self.det() in (1, -1)


def _row_sub(m, i, j, q):
    """rows[i] -= q * rows[j] in place."""
    if q:
        m[i] = [a - q * b for a, b in zip(m[i], m[j])]


def hnf(a: IntMatrix):
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h = u * a`` in the
    canonical form described in the module docstring.
    """
    m, n = a.rows, a.cols
    h = [list(r) for r in a.data]
    u = [list(r) for r in IntMatrix.identity(m).data]
    pivot_row = 0
    for col in range(n):
        while True:
            nz = [i for i in range(pivot_row, m) if h[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: (abs(h[i][col]), i))
            base = nz[0]
            for i in nz[1:]:
                q = h[i][col] // h[base][col]
                _row_sub(h, i, base, q)
                _row_sub(u, i, base, q)
        if not nz:
            continue
        base = nz[0]
        if base != pivot_row:
            h[base], h[pivot_row] = h[pivot_row], h[base]
            u[base], u[pivot_row] = u[pivot_row], u[base]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        p = h[pivot_row][col]
        for i in range(pivot_row):
            q = h[i][col] // p
            _row_sub(h, i, pivot_row, q)
            _row_sub(u, i, pivot_row, q)
        pivot_row += 1
        if pivot_row == m:
            break
    return IntMatrix(h), IntMatrix(u)


def _snf_ext(a: IntMatrix):
    """Smith normal form with both transforms and their inverses.

    Returns ``(s, u, v, uinv, vinv)`` with ``s = u * a * v``.
    """
    m, n = a.rows, a.cols
    s = [list(r) for r in a.data]
    u = [list(r) for r in IntMatrix.identity(m).data]
    uinv = [list(r) for r in IntMatrix.identity(m).data]
    v = [list(r) for r in IntMatrix.identity(n).data]
    vinv = [list(r) for r in IntMatrix.identity(n).data]

    def row_op(i, j, q):
        # row i -= q * row j  (left multiplication); uinv gets the inverse op
        _row_sub(s, i, j, q)
        _row_sub(u, i, j, q)
        if q:
            uinv_col = [row[i] for row in uinv]
            for r_, c_ in zip(uinv, uinv_col):
                r_[j] += q * c_

    def col_op(i, j, q):
        # col i -= q * col j; vinv gets the inverse op (row j += q * row i)
        if q:
            for row in s:
                row[i] -= q * row[j]
            for row in v:
                row[i] -= q * row[j]
            vinv[j] = [a_ + q * b_ for a_, b_ in zip(vinv[j], vinv[i])]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_negate(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        while True:
            cleared = True
            for i in range(t + 1, m):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_op(i, t, q)
                    if s[i][t] != 0:
                        row_swap(t, i)
                        cleared = False
            if not cleared:
                continue
            for j in range(t + 1, n):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_op(j, t, q)
                    if s[t][j] != 0:
                        col_swap(t, j)
                        cleared = False
            if cleared and all(s[i][t] == 0 for i in range(t + 1, m)):
                break
        # enforce that the pivot divides the rest of the submatrix
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % s[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)
            continue
        if s[t][t] < 0:
            row_negate(t)
        t += 1
    return IntMatrix(s), IntMatrix(u), IntMatrix(v), IntMatrix(uinv), IntMatrix(vinv)


def snf(a: IntMatrix):
    """Smith normal form ``(s, u, v)`` with ``s = u * a * v``."""
    s, u, v, _, _ = _snf_ext(a)
    return s, u, v


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """HNF-canonical basis of the saturated right kernel ``{x : a.x = 0}``.

    Basis vectors are returned as rows.
    """
    at = a.transpose()
    h, u = hnf(at)
    rows = [u.data[i] for i in range(h.rows) if all(x == 0 for x in h.data[i])]
    if not rows:
        return IntMatrix(())
    canon, _ = hnf(IntMatrix(tuple(rows)))
    return canon


def saturate(b: IntMatrix):
    """Saturation of the row span of ``b`` inside the ambient lattice.

    Returns ``(sat, index)`` where ``index`` is the group order of the
    torsion quotient, i.e. the product of the nontrivial elementary divisors.
    Raises ``RankDeficiencyError`` if the rows are dependent.
    """
    k = b.rows
    s, _, _, _, vinv = _snf_ext(b)
    divisors = [s.data[i][i] for i in range(min(s.rows, s.cols))]
    if any(d == 0 for d in divisors[:k]) or len(divisors) < k:
        raise RankDeficiencyError("rows are linearly dependent over the rationals")
    index = 1
    for d in divisors[:k]:
        index *= d
    sat_rows = vinv.data[:k]
    canon, _ = hnf(IntMatrix(sat_rows))
    return canon, index


def extend_to_basis(vs: IntMatrix, ambient_rank: int) -> IntMatrix:
    """Complete primitive, saturated, independent rows to a unimodular matrix.

    The first ``vs.rows`` rows of the result equal ``vs``.
    """
    if vs.cols != ambient_rank:
        raise ValueError("column count must equal the ambient rank")
    k = vs.rows
    s, _, _, _, vinv = _snf_ext(vs)
    divisors = [s.data[i][i] for i in range(min(s.rows, s.cols))]
    if any(d == 0 for d in divisors[:k]) or len(divisors) < k:
        raise RankDeficiencyError("rows are linearly dependent over the rationals")
    index = 1
    for d in divisors[:k]:
        index *= d
    if index != 1:
        raise NotSaturatedError(
            f"rows span a non-saturated sublattice (index {index})", index=index
        )
    completion = vs.data + vinv.data[k:]
    result = IntMatrix(completion)
    if not result.is_unimodular():
        raise RankDeficiencyError("completion failed to be unimodular")
    return result


def solve_linear_integer(a: IntMatrix, b):
    """One integer solution of ``a.x = b`` or ``None`` when none exists."""
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    s, u, v, _, _ = _snf_ext(a)
    c = u.mul_vec(tuple(b))
    y = [0] * a.cols
    r = min(a.rows, a.cols)
    for i in range(a.rows):
        d = s.data[i][i] if i < r else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    x = tuple(sum(v.data[i][j] * y[j] for j in range(a.cols)) for i in range(a.cols))
    return x


def integral_preimage_lattice(num: IntMatrix, den: int) -> IntMatrix:
    """Basis of ``{c : c * num / den  is an integer vector}``.

    ``num`` is ``k x n`` integral and ``den`` a positive integer; the result
    rows form an HNF-canonical basis of the finite-index sublattice of Z^k.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    k = num.rows
    if den == 1 or k == 0:
        return IntMatrix.identity(k)
    s, u, _, _, _ = _snf_ext(num)
    # c * num integral mod den  <=>  (c * uinv-basis) picks up diagonal divisors;
    # writing c = y * u, the condition becomes y_i * d_i = 0 mod den.
    rows = []
    for i in range(k):
        d = s.data[i][i] if i < min(s.rows, s.cols) else 0
        g = gcd(d, den)
        scale = den // g
        rows.append(tuple(scale * x for x in u.data[i]))
    canon, _ = hnf(IntMatrix(tuple(rows)))
    return canon


def reduce_mod_rows(x, basis: IntMatrix):
    """Canonical representative of ``x`` modulo the row lattice of ``basis``.

    ``basis`` must be in row HNF; each pivot coordinate of the result lies in
    ``[0, pivot)``.
    """
    x = list(x)
    for row in basis.data:
        pivot_col = next((j for j, val in enumerate(row) if val != 0), None)
        if pivot_col is None:
            continue
        q = x[pivot_col] // row[pivot_col]
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    return tuple(x)


# -- small vector helpers used throughout the package ------------------------


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vneg(a):
    return tuple(-x for x in a)


def vscale(k, a):
    return tuple(k * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def gcd_list(values):
    g = 0
    for x in values:
        g = gcd(g, x)
    return g


def vprimitive(a):
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = gcd_list(a)
    if g in (0, 1):
        return tuple(a)
    return tuple(x // g for x in a)
