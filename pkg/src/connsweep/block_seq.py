"""Block-sequential sweeping and the revised one-block algorithm.

The block-sequential scheme runs the chosen one-block algorithm block by
block: the input for block k keeps only the entries of J_{k-1} x J_k, with
the rows of the previous block's pivot columns zeroed first. The revised
one-block algorithm picks pivots bottom-up instead of diagonal by diagonal
and cancels each pivot's whole row at once; it is column-echelon reduction
minus the column swaps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (PRIMARY, ConnectionMatrix, Mark, MarkRegistry,
                   PreconditionError, SweepTrace, require_valid)
from .linalg import exact_div, freeze, identity, norm
from .sweep_f import sweep_incremental


@dataclass(frozen=True)
class BlockRun:
    """One step of the block-sequential scheme.

    input_matrix is the one-block matrix actually swept; pivot_columns are
    the columns of its final matrix holding primary pivots (they feed the
    row zeroing of the next block).
    """

    k: int
    input_matrix: ConnectionMatrix
    trace: object
    pivot_columns: frozenset


def block_runs(matrix, runner):
    require_valid(matrix)
    runs = []
    prev_pivot_cols = frozenset()
    for k in range(1, matrix.b + 1):
        rows = matrix.partition[k - 1]
        cols = matrix.partition[k]
        entries = {(i, j): v for (i, j), v in matrix.entries.items()
                   if i in rows and j in cols and i not in prev_pivot_cols}
        block_matrix = matrix.with_entries(entries)
        trace = runner(block_matrix)
        pivot_cols = frozenset(pos[1] for pos in trace.registry.primary_positions())
        runs.append(BlockRun(k, block_matrix, trace, pivot_cols))
        prev_pivot_cols = pivot_cols
    return runs


def block_sequential_sweep(matrix):
    """Incremental sweeping applied blockwise, in block order."""
    return block_runs(matrix, sweep_incremental)


def _single_nonzero_block(matrix):
    blocks = set()
    for (i, j) in matrix.entries:
        blocks.add(matrix.chain_index(j))
    if len(blocks) > 1:
        raise PreconditionError(
            "more than one nonzero block: chain groups "
            f"{sorted(blocks)} all hold entries")


def revised_one_block(matrix):
    """Bottom-up one-block sweeping: repeatedly take the lowest nonzero row
    over the still-active columns, mark its leftmost nonzero as a primary
    pivot, and cancel the rest of that row out of the active columns.

    Requires the nonzero entries to sit in a single block; a zero matrix
    yields an empty run.
    """
    require_valid(matrix)
    _single_nonzero_block(matrix)
    m = matrix.m
    dense = matrix.to_dense()
    active = list(range(1, m + 1))
    matrices = [freeze(dense)]
    transitions = []
    marks = []
    while True:
        i_t = None
        for i in range(m, 0, -1):
            if any(dense[i - 1][j - 1] for j in active):
                i_t = i
                break
        if i_t is None:
            break
        j_t = min(j for j in active if dense[i_t - 1][j - 1])
        piv = dense[i_t - 1][j_t - 1]
        marks.append(Mark((i_t, j_t), PRIMARY, j_t - i_t, piv))
        t = identity(m)
        for j in active:
            if j > j_t and dense[i_t - 1][j - 1]:
                t[j_t - 1][j - 1] = norm(-exact_div(dense[i_t - 1][j - 1], piv))
        col_piv = [dense[i][j_t - 1] for i in range(m)]
        for j in active:
            coeff = t[j_t - 1][j - 1]
            if j != j_t and coeff:
                for i in range(m):
                    if col_piv[i]:
                        dense[i][j - 1] = norm(dense[i][j - 1] + coeff * col_piv[i])
        transitions.append(freeze(t))
        matrices.append(freeze(dense))
        active.remove(j_t)
    return SweepTrace("revised1", matrix, tuple(matrices), tuple(transitions),
                      MarkRegistry(tuple(marks)))
