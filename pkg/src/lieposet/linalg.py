"""Exact linear algebra over the rationals.

Everything here is deterministic and division-safe: ranks and kernels use
Gaussian elimination with exact arithmetic (integer fraction-free Bareiss
when the input is integral), characteristic polynomials use the
division-free Berkowitz expansion or fraction-free determinant evaluation
plus interpolation.  Polynomials are coefficient lists in descending degree
with a leading 1 for monic results.
"""
from __future__ import annotations

from fractions import Fraction


def _to_int_rows(rows):
    """Row-scale a rational matrix to integers (row scaling preserves rank)."""
    out = []
    for row in rows:
        if all(isinstance(x, int) for x in row):
            out.append(list(row))
            continue
        frs = [Fraction(x) for x in row]
        scale = 1
        for f in frs:
            d = f.denominator
            scale = scale * d // _gcd(scale, d)
        out.append([int(f * scale) for f in frs])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def mat_rank(rows):
    """Exact rank over the rationals via fraction-free Bareiss elimination.

    Pivots are chosen by smallest bit length to slow coefficient growth.
    """
    if not rows:
        return 0
    m = _to_int_rows(rows)
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        pivot_row = -1
        pivot_bits = None
        for i in range(r, n_rows):
            v = m[i][c]
            if v:
                bits = abs(v).bit_length()
                if pivot_bits is None or bits < pivot_bits:
                    pivot_row, pivot_bits = i, bits
        if pivot_row < 0:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        piv = m[r][c]
        for i in range(r + 1, n_rows):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, n_cols):
                row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        rank += 1
        r += 1
    return rank


def det_bareiss(rows):
    """Exact determinant of an integer matrix, fraction-free with row pivoting."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for c in range(n):
        pivot_row = -1
        for i in range(c, n):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row < 0:
            return 0
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        piv = m[c][c]
        for i in range(c + 1, n):
            mic = m[i][c]
            row_i = m[i]
            row_c = m[c]
            for j in range(c + 1, n):
                row_i[j] = (piv * row_i[j] - mic * row_c[j]) // prev
            row_i[c] = 0
        prev = piv
    return sign * m[n - 1][n - 1]


def rref(rows):
    """Reduced row echelon form over Fractions; returns (matrix, pivot columns).

    Pivot rows are chosen by smallest numerator bit length among candidates.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        best = -1
        best_bits = None
        for i in range(r, n_rows):
            v = m[i][c]
            if v:
                bits = v.numerator.bit_length() + v.denominator.bit_length()
                if best_bits is None or bits < best_bits:
                    best, best_bits = i, bits
        if best < 0:
            continue
        m[r], m[best] = m[best], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(rows, n_cols=None):
    """Basis of the right kernel as lists of Fractions (RREF-normalized)."""
    if not rows:
        if n_cols is None:
            return []
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    n_cols = len(rows[0]) if n_cols is None else n_cols
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve_unique(rows, rhs):
    """Solve A x = b when the solution is unique; returns None otherwise."""
    if not rows:
        return None
    n_cols = len(rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if len(pivots) and pivots[-1] == n_cols:
        return None  # inconsistent
    if len(pivots) != n_cols:
        return None  # underdetermined
    sol = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        sol[pc] = red[r][n_cols]
    return sol


def same_subspace(basis_a, basis_b):
    """Row-space equality test for two lists of vectors."""
    ra, _ = rref(basis_a) if basis_a else ([], [])
    rb, _ = rref(basis_b) if basis_b else ([], [])
    norm = lambda m: [tuple(row) for row in m if any(row)]
    return norm(ra) == norm(rb)


# -- polynomials (descending coefficient lists) --------------------------------

def poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_from_roots(roots):
    """Monic polynomial with the given roots, exact."""
    poly = [Fraction(1)]
    for r in roots:
        poly = poly_mul(poly, [Fraction(1), -Fraction(r)])
    return poly


def poly_eval(poly, x):
    acc = Fraction(0)
    for c in poly:
        acc = acc * x + c
    return acc


def berkowitz_charpoly(rows):
    """Characteristic polynomial det(λI − M) by the Berkowitz expansion.

    Division-free, so it is exact over any ring of Fractions or ints.
    Coefficients returned in descending degree, leading 1.
    """
    n = len(rows)
    coeffs = [Fraction(1)]
    for start in range(n - 1, -1, -1):
        a = rows[start][start]
        k = n - start - 1
        R = rows[start][start + 1:]
        C = [rows[i][start] for i in range(start + 1, n)]
        B = [rows[i][start + 1:] for i in range(start + 1, n)]
        t = [Fraction(1), -Fraction(a)]
        v = list(C)
        for i in range(k):
            t.append(-Fraction(sum(R[j] * v[j] for j in range(k))))
            if i < k - 1:
                v = [sum(B[r][j] * v[j] for j in range(k)) for r in range(k)]
        new = [Fraction(0)] * (k + 2)
        for i in range(k + 2):
            lo = max(0, i - (len(t) - 1))
            hi = min(i, len(coeffs) - 1)
            s = Fraction(0)
            for j in range(lo, hi + 1):
                s += t[i - j] * coeffs[j]
            new[i] = s
        coeffs = new
    return coeffs


def charpoly_by_interpolation(rows):
    """det(λI − M) for a rational matrix via fraction-free determinants.

    Scales to an integer matrix, evaluates det(xI − N) at n+1 integer points
    with Bareiss, and interpolates; exact, and much faster than Berkowitz
    when entries are small integers.
    """
    n = len(rows)
    if n == 0:
        return [Fraction(1)]
    scale = 1
    for row in rows:
        for x in row:
            d = Fraction(x).denominator
            scale = scale * d // _gcd(scale, d)
    N = [[int(Fraction(x) * scale) for x in row] for row in rows]
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        shifted = [[(x if i == j else 0) - N[i][j] for j in range(n)] for i in range(n)]
        # det(xI − N), computed without fractions
        ys.append(det_bareiss(shifted))
    q = _interpolate(xs, ys)  # descending coeffs of det(xI − N), degree n
    return [q[i] / (Fraction(scale) ** i) for i in range(n + 1)]


def _interpolate(xs, ys):
    """Newton interpolation; returns descending coefficient list."""
    n = len(xs)
    divided = [Fraction(y) for y in ys]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level])
    # expand Newton form
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        poly = poly_mul(poly, [Fraction(1), -Fraction(xs[i])])
        poly[-1] += divided[i]
    # strip leading zeros but keep degree alignment
    while len(poly) > 1 and poly[0] == 0:
        poly.pop(0)
    return poly
