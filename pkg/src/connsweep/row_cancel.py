"""Row cancellation: pivots commandeer their whole row at once.

The diagonal sweep and the primary-pivot criterion are the same as in the
incremental sweeping, but there are no change-of-basis pivots: as soon as a
primary pivot is marked, every entry to its right is zeroed by column
operations from the pivot column. The conjugation step also performs the
matching row operations, which only ever touch rows that end up zero.

Also here: the per-step reduced matrices obtained by deleting each
cancelled row/column pair, and the cancellation schedule read off a trace.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (PRIMARY, AlgorithmError, ConnectionMatrix, Mark,
                   MarkRegistry, PreconditionError, require_valid,
                   scan_diagonal)
from .linalg import exact_div, freeze, identity, norm
from .sweep_f import TransitionMatrix


@dataclass(frozen=True)
class RCTrace:
    """Row-cancellation record: one matrix per swept diagonal, no final step.

    factors holds, parallel to transitions, the per-pivot elementary
    matrices whose ordered product is the transition.
    """

    matrix: ConnectionMatrix
    matrices: tuple
    transitions: tuple
    factors: tuple
    registry: MarkRegistry

    def __post_init__(self):
        if len(self.matrices) != len(self.transitions) + 1:
            raise AlgorithmError("trace shape: need len(matrices) == len(transitions) + 1")

    @property
    def algorithm(self):
        return "rowcancel"

    @property
    def final(self):
        return self.matrices[-1]


def rc_transition(delta_r, pivots):
    """Unit-diagonal upper-triangular matrix zeroing everything right of the
    given pivots, as an ordered product of one factor per pivot.

    Off-diagonal support is confined to the rows indexed by the pivot
    columns. With no pivots the result is the identity (also the case on the
    last diagonal, where nothing sits to the right).
    """
    m = len(delta_r)
    pivots = sorted(pivots, key=lambda pos: pos[1])
    factors = []
    for (i, j) in pivots:
        piv = delta_r[i - 1][j - 1]
        if not piv:
            raise AlgorithmError(f"zero entry at pivot position ({i}, {j})")
        factor = identity(m)
        row = delta_r[i - 1]
        for col in range(j + 1, m + 1):
            if row[col - 1]:
                factor[j - 1][col - 1] = norm(-exact_div(row[col - 1], piv))
        factors.append(freeze(factor))
    t = identity(m)
    for factor in factors:
        _post_multiply(t, factor)
    return TransitionMatrix(freeze(t), "row_cancellation", tuple(factors))


def _factor_ops(factor):
    """(source_row, [(col, coeff), ...]) of a single elementary factor."""
    src = None
    ops = []
    for i, row in enumerate(factor):
        for j, v in enumerate(row):
            if i != j and v:
                src = i
                ops.append((j, v))
    return src, ops


def _post_multiply(dense, factor):
    """dense <- dense @ factor, exploiting the single nonzero row of factor."""
    src, ops = _factor_ops(factor)
    if src is None:
        return dense
    for row in dense:
        v = row[src]
        if v:
            for j, coeff in ops:
                row[j] = norm(row[j] + v * coeff)
    return dense


def _pre_multiply_inverse(dense, factor):
    """dense <- factor^{-1} @ dense; the factor inverse flips the row signs."""
    src, ops = _factor_ops(factor)
    if src is None:
        return dense
    target = dense[src]
    for j, coeff in ops:
        row_j = dense[j]
        if any(row_j):
            for c in range(len(target)):
                if row_j[c]:
                    target[c] = norm(target[c] - coeff * row_j[c])
    return dense


def _conjugate_by_factors(dense, factors):
    for factor in factors:
        _post_multiply(dense, factor)
    for factor in reversed(factors):
        _pre_multiply_inverse(dense, factor)
    return dense


def row_cancellation(matrix):
    """Row Cancellation run; returns matrices for diagonals 0..m-1."""
    require_valid(matrix)
    m = matrix.m
    dense = matrix.to_dense()
    matrices = [freeze(dense)]
    transitions = []
    factor_lists = []
    marks = []
    primary_cols = set()
    prev = TransitionMatrix(freeze(identity(m)), "row_cancellation", ())
    for r in range(1, m):
        transitions.append(prev.matrix)
        factor_lists.append(prev.factors)
        dense = _conjugate_by_factors(dense, prev.factors)
        matrices.append(freeze(dense))
        pivots = []
        for i, j, kind in scan_diagonal(dense, m, r, primary_cols, (),
                                        use_row_rule=False):
            marks.append(Mark((i, j), PRIMARY, r, dense[i - 1][j - 1]))
            primary_cols.add(j)
            pivots.append((i, j))
        if pivots and r < m - 1:
            prev = rc_transition(dense, pivots)
        else:
            prev = TransitionMatrix(freeze(identity(m)), "row_cancellation", ())
    return RCTrace(matrix, tuple(matrices), tuple(transitions),
                   tuple(factor_lists), MarkRegistry(tuple(marks)))


def cancellation_schedule(trace):
    """One entry per primary pivot, sorted by (page, column).

    A pivot at (j-r, j) found on diagonal r models the cancellation of the
    filtration pair (j-r-1, j-1) at page r.
    """
    out = [(mk.diagonal, mk.position)
           for mk in trace.registry.marks if mk.kind == PRIMARY]
    out.sort(key=lambda rec: (rec[0], rec[1][1]))
    return out


@dataclass(frozen=True)
class ReductionStep:
    """Reduced matrix at one stage, on the surviving original labels."""

    r: int
    surviving: tuple
    removed_pairs: tuple  # (row, col, diagonal) newly removed at this stage
    entries: dict

    def as_connection_matrix(self, partition):
        """Order-preserving relabel of the surviving indices to 1..m'."""
        relabel = {old: new for new, old in enumerate(self.surviving, start=1)}
        parts = [[relabel[i] for i in part if i in relabel] for part in partition]
        entries = {(relabel[i], relabel[j]): v for (i, j), v in self.entries.items()}
        return ConnectionMatrix(len(self.surviving), parts, entries)


@dataclass(frozen=True)
class ReductionTrace:
    matrix: ConnectionMatrix
    steps: tuple


def reduce_complex(trace):
    """Per-stage reduced matrices: each cancelled pair's row and column indices
    are deleted outright, keeping the original labels on the survivors.

    A pivot found on diagonal xi takes effect in the next matrix, so stage r
    deletes the pairs of every pivot with diagonal < r; the closing stage m
    deletes them all (the last diagonal's pivots have nothing to cancel, so
    the final matrix serves for it unchanged). Removals are cumulative.
    """
    m = trace.matrix.m
    pivots = sorted(((mk.position[0], mk.position[1], mk.diagonal)
                     for mk in trace.registry.marks if mk.kind == PRIMARY),
                    key=lambda rec: (rec[2], rec[1]))
    steps = []
    for r in range(m + 1):
        removed = set()
        new_pairs = []
        for (i, j, xi) in pivots:
            if xi < r:
                removed.add(i)
                removed.add(j)
                if xi == r - 1:
                    new_pairs.append((i, j, xi))
        surviving = tuple(idx for idx in range(1, m + 1) if idx not in removed)
        source = trace.matrices[min(r, m - 1)]
        entries = {}
        for i in surviving:
            row = source[i - 1]
            for j in surviving:
                v = row[j - 1]
                if v:
                    entries[(i, j)] = v
        steps.append(ReductionStep(r, surviving, tuple(new_pairs), entries))
    return ReductionTrace(trace.matrix, tuple(steps))


def smale_cancellation_sweep(matrix):
    """Row cancellation restricted to surface connection matrices.

    Partitions with fewer than three subsets are padded with empty groups
    first (a one-block matrix is a surface candidate with no sources).
    """
    from .tu import SurfaceRejection, is_surface_connection_matrix

    if len(matrix.partition) < 3:
        padded = list(matrix.partition) + [set()] * (3 - len(matrix.partition))
        matrix = ConnectionMatrix(matrix.m, padded, matrix.entries)
    result = is_surface_connection_matrix(matrix)
    if isinstance(result, SurfaceRejection):
        raise PreconditionError(
            f"not a surface connection matrix: property ({result.prop}) fails: "
            f"{result.message}")
    return row_cancellation(matrix)


def block_sequential_row_cancellation(matrix):
    """Blockwise row cancellation; see block_seq for the shared scheme."""
    from .block_seq import block_runs

    return block_runs(matrix, row_cancellation)
