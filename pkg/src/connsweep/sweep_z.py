"""Sweeping over the integers.

Same diagonal sweep and markup as the rational variants, but each
change-of-basis pivot is resolved by an integer minimization: replace the
pivot's basis column with an integer combination of columns of the same
chain index that zeroes the pivot and everything below it, choosing the
smallest possible positive leading coefficient. Intermediate matrices may
still be fractional; only the combination itself is integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import (PRIMARY, AlgorithmError, Mark, MarkRegistry,
                   SweepTrace, require_valid, scan_diagonal)
from .linalg import (clear_denominators, copy_matrix, freeze, identity,
                     integer_kernel_basis, invert_upper, mat_mul,
                     reduce_mod_lattice, xgcd)


@dataclass(frozen=True)
class KernelProblem:
    """Minimize the last coordinate over integer kernel vectors.

    a holds the relevant rows of the original matrix (rows from the chain
    group below, restricted to the eligible columns, in increasing column
    order); the last of the c columns is the one being replaced. Sought is
    an integral x with a @ x == 0 and minimal x[c-1] >= 1.
    """

    a: tuple
    c: int

    def __post_init__(self):
        object.__setattr__(self, "a", freeze(self.a))
        if self.a and len(self.a[0]) != self.c:
            raise AlgorithmError("kernel problem width disagrees with c")


def solve_min_leading(problem):
    """Optimal integer kernel vector with minimal positive last coordinate.

    The integer kernel lattice is computed exactly; the achievable last
    coordinates form g*Z for g the gcd of the basis last coordinates, and an
    extended-gcd combination realizes g. The remaining freedom (the
    sublattice with last coordinate zero) is fixed by reducing to the
    canonical symmetric-residue representative, so results are deterministic.
    """
    c = problem.c
    rows = clear_denominators([list(r) for r in problem.a])
    basis = integer_kernel_basis(rows, c)
    lasts = [vec[c - 1] for vec in basis]
    g = 0
    for v in lasts:
        g = gcd(g, v)
    if g == 0:
        raise AlgorithmError("no integer kernel vector with positive last coordinate")
    combo = None
    cur = 0
    for vec, last in zip(basis, lasts):
        if not last:
            continue
        if combo is None:
            combo, cur = list(vec), last
        else:
            _, x, y = xgcd(cur, last)
            combo = [x * p + y * q for p, q in zip(combo, vec)]
            cur = x * cur + y * last
    if combo[c - 1] < 0:
        combo = [-v for v in combo]
    sub = [[vec[k] - (vec[c - 1] // combo[c - 1]) * combo[k] for k in range(c)]
           for vec in basis]
    x = reduce_mod_lattice(combo, sub)
    return tuple(x)


def sweep_over_z(matrix):
    """Integer sweeping; the trace also records every kernel problem solved."""
    require_valid(matrix)
    m = matrix.m
    delta0 = matrix.to_dense()
    p_prev = identity(m)
    matrices = [freeze(delta0)]
    transitions = [freeze(p_prev)]  # P^0
    marks = []
    problems = []
    primary_cols = set()
    primary_rows = set()
    for r in range(1, m):
        dense = mat_mul(mat_mul(invert_upper(p_prev), delta0), p_prev)
        matrices.append(freeze(dense))
        cb = []
        for i, j, kind in scan_diagonal(dense, m, r, primary_cols, primary_rows):
            marks.append(Mark((i, j), kind, r, dense[i - 1][j - 1]))
            if kind == PRIMARY:
                primary_cols.add(j)
                primary_rows.add(i)
            else:
                cb.append((i, j))
        p_new = copy_matrix(p_prev)
        for (i, j) in cb:
            k = matrix.chain_index(j)
            rows_i = sorted(a for a in matrix.partition[k - 1] if a >= i)
            cols_j = sorted(col for col in matrix.partition[k] if col <= j)
            a = [[delta0[row - 1][col - 1] for col in cols_j] for row in rows_i]
            problem = KernelProblem(a, len(cols_j))
            problems.append(problem)
            x = solve_min_leading(problem)
            for row in p_new:
                row[j - 1] = 0
            for col, xv in zip(cols_j, x):
                p_new[col - 1][j - 1] = xv
        transitions.append(freeze(p_new))
        p_prev = p_new
    matrices.append(freeze(mat_mul(mat_mul(invert_upper(p_prev), delta0), p_prev)))
    return SweepTrace("z", matrix, tuple(matrices), tuple(transitions),
                      MarkRegistry(tuple(marks)), kernel_problems=tuple(problems))
