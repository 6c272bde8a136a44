"""Exact Gaussian elimination over field payloads.

Functions here operate on lists of payload rows (the raw values the
field kernels understand), not on Matrix objects; the matrix layer
wraps them.  Everything is division-based elimination, exact in all
three supported fields.
"""

from __future__ import annotations

from .errors import SingularMatrixError


def rref_in_place(field, rows, ncols):
    """Reduce rows to reduced row echelon form; return pivot columns."""
    is0 = field.k_is0
    mul = field.k_mul
    sub = field.k_sub
    div = field.k_div
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pivot = None
        for rr in range(r, nrows):
            if not is0(rows[rr][c]):
                pivot = rr
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow = rows[r]
        pval = prow[c]
        if pval != field.p_one:
            rows[r] = prow = [div(x, pval) for x in prow]
        for rr in range(nrows):
            if rr == r:
                continue
            factor = rows[rr][c]
            if is0(factor):
                continue
            row = rows[rr]
            rows[rr] = [sub(row[k], mul(factor, prow[k]))
                        for k in range(len(row))]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(field, rows, ncols) -> int:
    work = [list(r) for r in rows]
    return len(rref_in_place(field, work, ncols))


def det(field, rows):
    """Exact determinant payload of a square payload matrix."""
    n = len(rows)
    work = [list(r) for r in rows]
    is0 = field.k_is0
    mul = field.k_mul
    sub = field.k_sub
    div = field.k_div
    result = field.p_one
    sign = 1
    for c in range(n):
        pivot = None
        for rr in range(c, n):
            if not is0(work[rr][c]):
                pivot = rr
                break
        if pivot is None:
            return field.p_zero
        if pivot != c:
            work[c], work[pivot] = work[pivot], work[c]
            sign = -sign
        pval = work[c][c]
        result = mul(result, pval)
        prow = work[c]
        for rr in range(c + 1, n):
            factor = work[rr][c]
            if is0(factor):
                continue
            factor = div(factor, pval)
            row = work[rr]
            work[rr] = [sub(row[k], mul(factor, prow[k]))
                        for k in range(n)]
    if sign < 0:
        result = field.k_neg(result)
    return result


def invert(field, rows):
    """Inverse of a square payload matrix, or SingularMatrixError."""
    n = len(rows)
    one = field.p_one
    zero = field.p_zero
    work = []
    for i, row in enumerate(rows):
        aug = list(row) + [zero] * n
        aug[n + i] = one
        work.append(aug)
    pivots = rref_in_place(field, work, n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in work]


def nullspace(field, rows, ncols):
    """Basis of the right kernel, one payload vector per free column."""
    work = [list(r) for r in rows]
    pivots = rref_in_place(field, work, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [field.p_zero] * ncols
        vec[f] = field.p_one
        for r, c in enumerate(pivots):
            vec[c] = field.k_neg(work[r][f])
        basis.append(vec)
    return basis
