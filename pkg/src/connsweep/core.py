"""Connection-matrix data model: exact entries, chain partition, marks, traces.

All indices visible here are 1-based; dense row lists used internally are
0-based and converted at the boundary. Every type is an immutable value and
every operation is pure, so everything is safe to share across tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import as_exact

Position = tuple[int, int]

PRIMARY = "primary"
CHANGE_OF_BASIS = "change_of_basis"


class ConnSweepError(Exception):
    """Base class for errors raised by this package."""


class CmxError(ConnSweepError):
    """Malformed CMX text; carries the offending line/column when known."""

    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


class InvalidMatrixError(ConnSweepError):
    def __init__(self, violations):
        violations = list(violations)
        super().__init__(
            "invalid connection matrix: " + "; ".join(str(v) for v in violations)
        )
        self.violations = violations


class PreconditionError(ConnSweepError):
    """An operation was called outside its contract."""


class AlgorithmError(ConnSweepError):
    """An internal invariant broke mid-run; indicates a bug, not bad input."""


@dataclass(frozen=True)
class Violation:
    invariant: str  # "partition" | "index" | "triangularity" | "pattern"
    position: Position | None
    message: str

    def __str__(self):
        if self.position is not None:
            return f"{self.invariant} at {self.position}: {self.message}"
        return f"{self.invariant}: {self.message}"


def _freeze_partition(partition):
    return tuple(frozenset(int(i) for i in part) for part in partition)


@dataclass(frozen=True)
class ConnectionMatrix:
    """Strictly-upper-triangular exact matrix with a chain-index partition.

    partition holds the index sets J_0..J_b; nonzero entries are only
    expected in the positions of allowable_pattern(partition, m). Violations
    are representable (validate reports them); algorithms reject them.
    """

    m: int
    partition: tuple[frozenset[int], ...]
    entries: dict[Position, Fraction | int]

    def __post_init__(self):
        object.__setattr__(self, "partition", _freeze_partition(self.partition))
        clean = {}
        for (i, j), v in self.entries.items():
            v = as_exact(v)
            if v:
                clean[(int(i), int(j))] = v
        object.__setattr__(self, "entries", clean)

    @property
    def b(self):
        return len(self.partition) - 1

    @cached_property
    def chain_index_map(self):
        out = {}
        for k, part in enumerate(self.partition):
            for idx in part:
                out[idx] = k
        return out

    def chain_index(self, idx):
        return self.chain_index_map.get(idx)

    def entry(self, i, j):
        return self.entries.get((i, j), 0)

    def to_dense(self):
        dense = [[0] * self.m for _ in range(self.m)]
        for (i, j), v in self.entries.items():
            dense[i - 1][j - 1] = v
        return dense

    def block(self, k):
        """Rows J_{k-1}, columns J_k (both sorted) and the dense block."""
        rows = sorted(self.partition[k - 1])
        cols = sorted(self.partition[k])
        dense = [[self.entry(i, j) for j in cols] for i in rows]
        return rows, cols, dense

    def with_entries(self, entries):
        return ConnectionMatrix(self.m, self.partition, dict(entries))

    def nonzero(self):
        return sorted(self.entries.items())


def allowable_pattern(partition, m):
    """Strictly-upper positions eligible for nonzero entries.

    These are the positions (i, j) with i in J_{k-1}, j in J_k for some k,
    and i < j; scattering the partition prunes the out-of-order positions.
    """
    partition = _freeze_partition(partition)
    positions = set()
    for k in range(1, len(partition)):
        for i in partition[k - 1]:
            for j in partition[k]:
                if i < j and j <= m and i >= 1:
                    positions.add((i, j))
    return frozenset(positions)


def validate(matrix):
    """All invariant violations of a ConnectionMatrix, as data (empty == valid)."""
    out = []
    seen = {}
    everything = set()
    for k, part in enumerate(matrix.partition):
        for idx in part:
            if not 1 <= idx <= matrix.m:
                out.append(Violation("partition", None,
                                     f"index {idx} in J_{k} outside 1..{matrix.m}"))
            if idx in seen:
                out.append(Violation("partition", None,
                                     f"index {idx} in both J_{seen[idx]} and J_{k}"))
            seen[idx] = k
            everything.add(idx)
    missing = set(range(1, matrix.m + 1)) - everything
    if missing:
        out.append(Violation("partition", None,
                             f"indices not covered: {sorted(missing)}"))
    pattern = allowable_pattern(matrix.partition, matrix.m)
    for (i, j), v in sorted(matrix.entries.items()):
        if not (1 <= i <= matrix.m and 1 <= j <= matrix.m):
            out.append(Violation("index", (i, j), "entry index outside 1..m"))
            continue
        if i >= j:
            out.append(Violation("triangularity", (i, j),
                                 "entry on or below the diagonal"))
            continue
        if (i, j) not in pattern:
            ki = matrix.chain_index(i)
            kj = matrix.chain_index(j)
            out.append(Violation("pattern", (i, j),
                                 f"position in J_{ki} x J_{kj} is not allowable"))
    return out


def require_valid(matrix):
    violations = validate(matrix)
    if violations:
        raise InvalidMatrixError(violations)


@dataclass(frozen=True)
class Mark:
    position: Position
    kind: str  # PRIMARY | CHANGE_OF_BASIS
    diagonal: int
    value: Fraction | int


@dataclass(frozen=True)
class MarkRegistry:
    """Every mark assigned during a run, with the diagonal it was assigned on.

    Change-of-basis marks are temporary per diagonal during the run; they are
    retained here for trace purposes. At most one primary pivot may sit in
    any column.
    """

    marks: tuple[Mark, ...]

    def __post_init__(self):
        cols = set()
        by_pos = {}
        for mk in self.marks:
            if mk.kind == PRIMARY:
                j = mk.position[1]
                if j in cols:
                    raise AlgorithmError(f"two primary pivots in column {j}")
                cols.add(j)
            prior = by_pos.get(mk.position)
            if prior is not None and prior != mk.kind:
                raise AlgorithmError(f"position {mk.position} carries both mark kinds")
            by_pos[mk.position] = mk.kind

    def primary_pivots(self):
        return {mk.position: mk for mk in self.marks if mk.kind == PRIMARY}

    def primary_positions(self):
        return frozenset(mk.position for mk in self.marks if mk.kind == PRIMARY)

    def on_diagonal(self, r):
        return sorted((mk for mk in self.marks if mk.diagonal == r),
                      key=lambda mk: mk.position[1])

    def change_of_basis_marks(self):
        return [mk for mk in self.marks if mk.kind == CHANGE_OF_BASIS]


@dataclass(frozen=True)
class SweepTrace:
    """Record of one sweeping run: matrices, transitions and marks.

    matrices holds one more matrix than transitions. For the accumulated
    variants the transitions are the running change-of-basis matrices; for
    the incremental variants they are the per-diagonal ones.
    """

    algorithm: str
    matrix: ConnectionMatrix
    matrices: tuple
    transitions: tuple
    registry: MarkRegistry
    kernel_problems: tuple = ()

    def __post_init__(self):
        if len(self.matrices) != len(self.transitions) + 1:
            raise AlgorithmError("trace shape: need len(matrices) == len(transitions) + 1")

    @property
    def final(self):
        return self.matrices[-1]


def scan_diagonal(dense, m, r, primary_cols, primary_rows, use_row_rule=True):
    """Markup rule for diagonal r, swept left to right.

    A nonzero entry at (j-r, j) is skipped when its column already holds a
    primary pivot; otherwise it becomes a change-of-basis pivot when its row
    holds a primary pivot (only if use_row_rule), and a primary pivot else.
    Returns (i, j, kind) triples in increasing j.
    """
    found = []
    for j in range(r + 1, m + 1):
        i = j - r
        if not dense[i - 1][j - 1]:
            continue
        if j in primary_cols:
            continue
        if use_row_rule and i in primary_rows:
            found.append((i, j, CHANGE_OF_BASIS))
        else:
            found.append((i, j, PRIMARY))
    return found


def marks_on_diagonal(trace, r):
    """Marks assigned on diagonal r, in increasing column order."""
    m = trace.matrix.m
    if not 1 <= r <= m - 1:
        raise PreconditionError(f"diagonal {r} outside 1..{m - 1}")
    return [(mk.position, mk.kind) for mk in trace.registry.on_diagonal(r)]


def accumulated_basis(trace):
    """Coefficient matrices expressing each basis element in the original one.

    Entry r is the change of basis taking the original basis to the one of
    matrix r+1; column j of it expands the j-th basis element. Accumulated
    traces store these directly, incremental ones multiply out lazily.
    """
    from .linalg import is_identity, mat_mul, thaw

    if trace.algorithm in ("z", "accumulated"):
        return [thaw(t) for t in trace.transitions]
    out = []
    acc = None
    for t in trace.transitions:
        if acc is None:
            acc = thaw(t)
        elif not is_identity(t):
            acc = mat_mul(acc, thaw(t))
        out.append(acc)
    return out
