"""Exact matrix helpers over commutative rings (rational functions, mu-polynomials).

Matrices are tuples of row tuples.  Nothing here assumes a particular element
type beyond ``+``, ``-``, ``*`` (and ``/`` for field routines).
"""

from __future__ import annotations

from typing import Callable, Sequence

from starmul.poly import MultiPoly
from starmul.ratfunc import RationalFunction, normalize

Matrix = tuple


def as_matrix(rows) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int, zero, one) -> Matrix:
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int, zero) -> Matrix:
    return tuple(tuple(zero for _ in range(cols)) for _ in range(rows))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} vs {shape(b)}")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} vs {shape(b)}")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = None
            for x, y in zip(row, col):
                if _is_zero(x) or _is_zero(y):
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            new.append(acc if acc is not None else _zero_like(row[0]))
        out.append(tuple(new))
    return tuple(out)


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(r[0] for r in matmul(a, tuple((x,) for x in v)))


def is_zero_matrix(a: Matrix) -> bool:
    return all(_is_zero(x) for row in a for x in row)


def _is_zero(x) -> bool:
    z = getattr(x, "is_zero", None)
    return z() if z is not None else x == 0


def _zero_like(x):
    return x - x


def det(a: Matrix):
    """Determinant by Laplace expansion over column subsets (any commutative ring)."""
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    # minors[S] = det of rows 0..|S|-1 restricted to the columns in S
    minors = {(j,): a[0][j] for j in range(n)}
    for row in range(1, n):
        nxt = {}
        for cols, val in minors.items():
            for j in range(n):
                if j in cols:
                    continue
                new = tuple(sorted(cols + (j,)))
                # sign of inserting column j as the last of the new set
                pos = new.index(j)
                sign = -1 if (len(new) - 1 - pos) % 2 else 1
                if _is_zero(a[row][j]) or _is_zero(val):
                    term = None
                else:
                    term = val * a[row][j]
                    if sign < 0:
                        term = -term
                if term is None:
                    nxt.setdefault(new, _zero_like(val))
                elif new in nxt:
                    nxt[new] = nxt[new] + term
                else:
                    nxt[new] = term
        minors = nxt
    return minors[tuple(range(n))]


def minor(a: Matrix, i: int, j: int) -> Matrix:
    return tuple(tuple(x for c, x in enumerate(row) if c != j) for r, row in enumerate(a) if r != i)


def adjugate(a: Matrix) -> Matrix:
    """Transposed cofactor matrix: adj(A) A = det(A) I."""
    n, _ = shape(a)
    if n == 1:
        return ((_zero_like(a[0][0]) + 1,),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            d = det(minor(a, i, j))
            row.append(d if (i + j) % 2 == 0 else -d)
        cof.append(tuple(row))
    return transpose(tuple(cof))


def inverse(a: Matrix) -> Matrix:
    """Inverse over a field via the adjugate; raises on a singular matrix."""
    d = det(a)
    if _is_zero(d):
        raise ZeroDivisionError("singular matrix")
    return scale(adjugate(a), 1 / d)


def map_entries(a: Matrix, fn: Callable) -> Matrix:
    return tuple(tuple(fn(x) for x in row) for row in a)


# -- fraction-free elimination over the rational-function field ----------


def _clear_row(row: Sequence[RationalFunction]) -> list:
    """Scale a row of rational functions to polynomial entries."""
    from starmul.poly import lcm_of

    dens = [x.den for x in row if not x.is_zero()]
    if not dens:
        return [x.num for x in row]
    m = lcm_of(dens)
    return [(x.num * m.exquo(x.den)) if not x.is_zero() else x.num for x in row]


def fraction_free_echelon(rows: Sequence[Sequence[RationalFunction]]):
    """Bareiss row echelon form over the polynomial ring.

    Rows are first cleared of denominators.  Pivots are chosen column by
    column as the nonzero entry of least total degree (ties: first row).
    Returns ``(echelon_rows, pivot_columns)`` with MultiPoly entries.
    """
    work = [_clear_row(r) for r in rows]
    if not work:
        return [], []
    ncols = len(work[0])
    vars = work[0][0].vars
    one = MultiPoly.const(vars, 1)
    prev = one
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(work):
            break
        cands = [i for i in range(r, len(work)) if not work[i][c].is_zero()]
        if not cands:
            continue
        best = min(cands, key=lambda i: (work[i][c].total_degree(), len(work[i][c].terms), i))
        work[r], work[best] = work[best], work[r]
        p = work[r][c]
        for i in range(r + 1, len(work)):
            a_ic = work[i][c]
            new = []
            for j in range(ncols):
                if j < c:
                    new.append(work[i][j])
                    continue
                val = p * work[i][j] - a_ic * work[r][j]
                new.append(val.exquo(prev) if prev != one else val)
            work[i] = new
        # rows above the pivot keep their scale; Bareiss tracks only below
        prev = p
        pivots.append(c)
        r += 1
    return work[: len(pivots)], pivots


def nullspace(rows: Sequence[Sequence[RationalFunction]], vars: Sequence[str]) -> list[tuple]:
    """Kernel basis of a matrix over the rational-function field.

    Each basis vector is scaled to primitive polynomial entries.
    """
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("nullspace of an empty matrix needs an explicit column count")
    ncols = len(rows[0])
    ech, pivots = fraction_free_echelon(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        basis.append(_back_substitute(ech, pivots, ncols, {f: 1}, vars))
    return basis


def solve_affine(rows, rhs, vars):
    """Solve ``M x = rhs``; returns (particular, kernel_basis) or None if inconsistent."""
    aug = [list(r) + [-b] for r, b in zip(rows, rhs)]
    ncols = len(aug[0])
    ech, pivots = fraction_free_echelon(aug)
    if ncols - 1 in pivots:
        return None
    free = [j for j in range(ncols - 1) if j not in pivots]
    particular = _back_substitute(ech, pivots, ncols, {ncols - 1: 1}, vars, scale_out=False)[:-1]
    kernel = [_back_substitute(ech, pivots, ncols, {f: 1}, vars)[:-1] for f in free]
    return particular, kernel


def _back_substitute(ech, pivots, ncols, fixed, vars, scale_out=True):
    zero = RationalFunction.const(vars, 0)
    x = [zero] * ncols
    for j, v in fixed.items():
        x[j] = RationalFunction.const(vars, v)
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        acc = zero
        for j in range(c + 1, ncols):
            if not ech[i][j].is_zero() and not x[j].is_zero():
                acc = acc + RationalFunction._make(ech[i][j], MultiPoly.const(vars, 1)) * x[j]
        x[c] = -acc / RationalFunction(ech[i][c])
    if scale_out:
        x = _primitive_vector(x, vars)
    return tuple(x)


def _primitive_vector(x, vars):
    from starmul.poly import lcm_of, poly_gcd

    dens = [v.den for v in x if not v.is_zero()]
    m = lcm_of(dens)
    nums = [v.num * m.exquo(v.den) if not v.is_zero() else v.num for v in x]
    g = None
    for p in nums:
        if p.is_zero():
            continue
        g = p if g is None else poly_gcd(g, p)
    out = []
    for p in nums:
        out.append(normalize(p, g) if not p.is_zero() else RationalFunction.const(vars, 0))
    return out
