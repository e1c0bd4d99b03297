"""Exact linear algebra over the rationals.

Matrices are lists of rows of ``fractions.Fraction``.  Everything here is
small and dense; pivoting order is fixed (leftmost column, topmost row)
so the reduced forms, and hence all derived bases, are deterministic.

Rank is also available through a Bareiss (integer, fraction-free)
elimination used as a cross-check against the rational pivoting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = list[Fraction]
Matrix = list[Row]

F0 = Fraction(0)
F1 = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def zeros(m: int, n: int) -> Matrix:
    return [[F0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = F1
    return mat


def copy(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    m, k, n = len(a), len(b), len(b[0])
    out = zeros(m, n)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(n):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def matvec(a: Matrix, v: Sequence[Fraction]) -> Row:
    return [sum((c * x for c, x in zip(row, v) if c and x), F0) for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns (R, pivot column indices)."""
    mat = copy(a)
    if not mat:
        return mat, []
    nrows, ncols = len(mat), len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][c]
        if pv != F1:
            mat[r] = [x / pv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def rank_bareiss(a: Matrix) -> int:
    """Rank by fraction-free integer elimination (independent of rref)."""
    if not a or not a[0]:
        return 0
    # clear denominators row by row
    mat: list[list[int]] = []
    for row in a:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        mat.append([int(x * den) for x in row])
    nrows, ncols = len(mat), len(mat[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                mat[i][j] = (mat[r][c] * mat[i][j] - mat[i][c] * mat[r][j]) // prev
            mat[i][c] = 0
        prev = mat[r][c]
        r += 1
        if r == nrows:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def nullspace(a: Matrix, ncols: int | None = None) -> list[Row]:
    """Basis of the right kernel, deterministic (one vector per free column)."""
    if not a:
        return [] if not ncols else [unit_vector(ncols, i) for i in range(ncols)]
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [F0] * n
        v[fc] = F1
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def unit_vector(n: int, i: int) -> Row:
    v = [F0] * n
    v[i] = F1
    return v


def solve(a: Matrix, b: Sequence[Fraction]) -> Row | None:
    """One solution of A x = b, or None.  Free variables are set to zero."""
    if not a:
        return [] if not any(b) else None
    n = len(a[0])
    aug = [row[:] + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [F0] * n
    for r, pc in enumerate(pivots):
        x[pc] = red[r][n]
    return x

def inverse(a: Matrix) -> Matrix | None:
    n = len(a)
    if n == 0:
        return []
    aug = [row[:] + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return F1
    mat = copy(a)
    sign = 1
    d = F1
    for c in range(n):
        pr = None
        for i in range(c, n):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            return F0
        if pr != c:
            mat[c], mat[pr] = mat[pr], mat[c]
            sign = -sign
        pv = mat[c][c]
        d *= pv
        for i in range(c + 1, n):
            if mat[i][c]:
                f = mat[i][c] / pv
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return d * sign


def row_space_reduce(rows: Iterable[Row]) -> Matrix:
    """RREF basis of the span of the given rows (zero rows dropped)."""
    mat = [r[:] for r in rows]
    red, pivots = rref(mat)
    return red[: len(pivots)]


def in_span(rows: Matrix, v: Sequence[Fraction]) -> bool:
    if not any(v):
        return True
    if not rows:
        return False
    return rank(rows) == rank(rows + [list(v)])


def quotient_dim(ambient_dim: int, subspace_rows: Matrix) -> int:
    if not subspace_rows:
        return ambient_dim
    return ambient_dim - rank(subspace_rows)


def solve_sparse(rows: list[dict[int, Fraction]], rhs: Sequence[Fraction], nvars: int) -> Row | None:
    """Particular solution of a sparse system; free variables set to zero.

    Augments each row with the right-hand side at column nvars and runs the
    usual elimination with smallest-column pivots so the rhs column is never
    chosen as a pivot unless the system is inconsistent.
    """
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for row, b in zip(rows, rhs):
        work = {c: v for c, v in row.items() if v}
        if b:
            work[nvars] = b
        while work:
            p = min(work)
            if p == nvars:
                return None  # 0 = nonzero
            if p in pivot_rows:
                f = work[p]
                for c, v in pivot_rows[p].items():
                    work[c] = work.get(c, F0) - f * v
                    if not work[c]:
                        del work[c]
            else:
                pv = work[p]
                pivot_rows[p] = {c: v / pv for c, v in work.items()}
                break
    # back substitute
    for p in sorted(pivot_rows, reverse=True):
        row = pivot_rows[p]
        for c in [c for c in row if c != p and c != nvars]:
            if c in pivot_rows:
                f = row[c]
                del row[c]
                for c2, v in pivot_rows[c].items():
                    if c2 != c:
                        row[c2] = row.get(c2, F0) - f * v
                        if not row[c2]:
                            del row[c2]
    sol = [F0] * nvars
    for p, row in pivot_rows.items():
        sol[p] = row.get(nvars, F0)
    return sol
