"""Dense exact linear algebra on small matrices.

Matrices are lists of row lists. Values are Python ints wherever possible
and fractions.Fraction otherwise, so every operation is exact. Nothing here
knows about chain partitions; callers slice blocks out themselves.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def norm(v):
    """Collapse integral fractions to int so later arithmetic stays fast."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return v
    return v


def as_exact(v):
    """Coerce ints, Fractions and fraction strings to a normalized exact value."""
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return norm(v)
    if isinstance(v, str):
        return norm(Fraction(v))
    raise TypeError(f"not an exact value: {v!r}")


def exact_div(a, b):
    """a / b, an int when the division is exact over the integers."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return norm(Fraction(a) / Fraction(b))


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(n_rows, n_cols):
    return [[0] * n_cols for _ in range(n_rows)]


def copy_matrix(a):
    return [row[:] for row in a]


def freeze(a):
    return tuple(tuple(row) for row in a)


def thaw(a):
    return [list(row) for row in a]


def is_identity(a):
    for i, row in enumerate(a):
        for j, v in enumerate(row):
            if v != (1 if i == j else 0):
                return False
    return True


def is_zero_matrix(a):
    return all(not v for row in a for v in row)


def mat_eq(a, b):
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for va, vb in zip(ra, rb):
            if va != vb:
                return False
    return True


def mat_mul(a, b):
    """a @ b with zero-skipping; exact."""
    n = len(a)
    inner = len(b)
    p = len(b[0]) if inner else 0
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        row_a = a[i]
        out_i = out[i]
        for k in range(inner):
            aik = row_a[k]
            if aik:
                row_b = b[k]
                for j in range(p):
                    bkj = row_b[j]
                    if bkj:
                        out_i[j] += aik * bkj
    for row in out:
        for j, v in enumerate(row):
            row[j] = norm(v)
    return out


def mat_vec(a, x):
    out = []
    for row in a:
        s = 0
        for v, xv in zip(row, x):
            if v and xv:
                s += v * xv
        out.append(norm(s))
    return out


def transpose(a):
    return [list(col) for col in zip(*a)]


def invert_upper(u):
    """Inverse of an upper-triangular matrix with nonzero diagonal."""
    n = len(u)
    for i in range(n):
        if not u[i][i]:
            raise ValueError("zero diagonal entry in triangular inverse")
    inv = [[0] * n for _ in range(n)]
    for c in range(n):
        x = [0] * n
        x[c] = exact_div(1, u[c][c])
        for i in range(c - 1, -1, -1):
            s = 0
            row = u[i]
            for k in range(i + 1, c + 1):
                if row[k] and x[k]:
                    s += row[k] * x[k]
            if s:
                x[i] = norm(exact_div(-s, row[i]) if isinstance(s, int) and isinstance(row[i], int)
                            else -Fraction(s) / Fraction(row[i]))
        for i in range(c + 1):
            inv[i][c] = norm(x[i])
    return inv


def rank(a):
    """Exact rank via Gaussian elimination (input left untouched)."""
    if not a or not a[0]:
        return 0
    m = [row[:] for row in a]
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, n_rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(r + 1, n_rows):
            f = m[i][c]
            if f:
                factor = exact_div(f, pv)
                mi, mr = m[i], m[r]
                for k in range(c, n_cols):
                    if mr[k]:
                        mi[k] = norm(mi[k] - factor * mr[k])
        r += 1
        if r == n_rows:
            break
    return r


def bareiss_det(a):
    """Determinant of a square integer matrix, fraction-free."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def xgcd(a, b):
    """(g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def clear_denominators(rows):
    """Scale each row by the lcm of its denominators; returns integer rows."""
    out = []
    for row in rows:
        mult = 1
        for v in row:
            if isinstance(v, Fraction):
                d = v.denominator
                mult = mult * d // gcd(mult, d)
        out.append([int(v * mult) for v in row])
    return out


def integer_kernel_basis(rows, n_cols):
    """Basis of the lattice {x in Z^n : rows @ x == 0} for integer rows.

    Column elimination with unimodular two-column combinations; the returned
    vectors generate the full integer kernel, not merely a finite-index
    sublattice.
    """
    a_cols = [[row[j] for row in rows] for j in range(n_cols)]
    u_cols = [[1 if i == j else 0 for i in range(n_cols)] for j in range(n_cols)]
    free = list(range(n_cols))
    n_rows = len(rows)
    for i in range(n_rows):
        nz = [j for j in free if a_cols[j][i]]
        if not nz:
            continue
        j0 = nz[0]
        for j in nz[1:]:
            a0, aj = a_cols[j0][i], a_cols[j][i]
            g, x, y = xgcd(a0, aj)
            s, t = a0 // g, aj // g
            c0a, cja = a_cols[j0], a_cols[j]
            c0u, cju = u_cols[j0], u_cols[j]
            a_cols[j0] = [x * p + y * q for p, q in zip(c0a, cja)]
            a_cols[j] = [-t * p + s * q for p, q in zip(c0a, cja)]
            u_cols[j0] = [x * p + y * q for p, q in zip(c0u, cju)]
            u_cols[j] = [-t * p + s * q for p, q in zip(c0u, cju)]
        free.remove(j0)
    return [u_cols[j] for j in free]


def reduce_mod_lattice(v, basis):
    """Canonical coset representative of v modulo the lattice spanned by basis.

    The lattice basis is echelonized with pivots at the lowest (largest-index)
    nonzero coordinate; v is then reduced pivot by pivot to the symmetric
    residue range, which is a unique representative of the coset.
    """
    v = list(v)
    work = [list(b) for b in basis if any(b)]
    ech = {}
    for b in work:
        while True:
            p = None
            for k in range(len(b) - 1, -1, -1):
                if b[k]:
                    p = k
                    break
            if p is None:
                break
            if p not in ech:
                ech[p] = b if b[p] > 0 else [-x for x in b]
                break
            e = ech[p]
            g, x, y = xgcd(e[p], b[p])
            s, t = e[p] // g, b[p] // g
            new_e = [x * p1 + y * q1 for p1, q1 in zip(e, b)]
            new_b = [s * q1 - t * p1 for p1, q1 in zip(e, b)]
            ech[p] = new_e if new_e[p] > 0 else [-x1 for x1 in new_e]
            b = new_b
    for p in sorted(ech, reverse=True):
        e = ech[p]
        h = e[p]
        rem = v[p] % h
        if 2 * rem > h:
            rem -= h
        q = (v[p] - rem) // h
        if q:
            v = [vi - q * ei for vi, ei in zip(v, e)]
    return v
