import pytest

from connsweep import (CHANGE_OF_BASIS, PRIMARY, AlgorithmError,
                       InvalidMatrixError, KernelProblem, ConnectionMatrix,
                       marks_on_diagonal, solve_min_leading, sweep_over_z)
from connsweep.fixtures import FIX_CB, FIX_SPHERE, FIX_ZERO
from connsweep.linalg import is_identity, mat_mul, mat_vec, thaw
from connsweep.oracles import ilp_brute_force
from connsweep.verify import verify_sweep


def marks_of(trace):
    return [(mk.position, mk.kind, mk.diagonal, mk.value)
            for mk in trace.registry.marks]


def test_zero_matrix():
    trace = sweep_over_z(FIX_ZERO)
    assert marks_of(trace) == []
    assert all(all(not v for row in mat for v in row) for mat in trace.matrices)
    assert all(is_identity(thaw(p)) for p in trace.transitions)
    assert len(trace.matrices) == 4 and len(trace.transitions) == 3


def test_sphere_trace():
    trace = sweep_over_z(FIX_SPHERE)
    assert marks_of(trace) == [((2, 3), PRIMARY, 1, -1)]
    assert trace.matrices[-1] == trace.matrices[0]


def test_cb_trace():
    trace = sweep_over_z(FIX_CB)
    assert marks_of(trace) == [((2, 3), PRIMARY, 1, -2),
                               ((2, 4), CHANGE_OF_BASIS, 2, -3)]
    [problem] = trace.kernel_problems
    assert problem.a == ((-2, -3),) and problem.c == 2
    assert solve_min_leading(problem) == (-3, 2)
    final = trace.matrices[-1]
    nonzero = {(i + 1, j + 1): v for i, row in enumerate(final)
               for j, v in enumerate(row) if v}
    assert nonzero == {(1, 3): 2, (2, 3): -2}


@pytest.mark.parametrize("a, c, expected", [
    (((-2, -3),), 2, (-3, 2)),
    (((1, -1),), 2, (1, 1)),
    (((1, 0, 2), (0, 1, -1)), 3, (-2, 1, 1)),
])
def test_solve_min_leading_examples(a, c, expected):
    assert solve_min_leading(KernelProblem(a, c)) == expected


def test_solve_min_leading_properties(small_corpus):
    for cm in small_corpus:
        trace = sweep_over_z(cm)
        for problem in trace.kernel_problems:
            x = solve_min_leading(problem)
            assert all(v == 0 for v in mat_vec([list(r) for r in problem.a], list(x)))
            assert x[-1] >= 1
            if problem.c <= 5:
                witness = ilp_brute_force(problem, 6)
                if witness is not None:
                    assert witness.min_leading % x[-1] == 0
                    assert x[-1] <= witness.min_leading


def test_solve_min_leading_infeasible():
    with pytest.raises(AlgorithmError):
        solve_min_leading(KernelProblem(((1,),), 1))


def test_marks_on_diagonal():
    sphere = sweep_over_z(FIX_SPHERE)
    assert marks_on_diagonal(sphere, 1) == [((2, 3), PRIMARY)]
    assert marks_on_diagonal(sphere, 2) == []
    cb = sweep_over_z(FIX_CB)
    assert marks_on_diagonal(cb, 2) == [((2, 4), CHANGE_OF_BASIS)]
    from connsweep import PreconditionError
    with pytest.raises(PreconditionError):
        marks_on_diagonal(sphere, 4)


def test_basis_is_accumulated_change_of_basis():
    from connsweep import accumulated_basis
    from connsweep.linalg import thaw
    trace = sweep_over_z(FIX_CB)
    basis = accumulated_basis(trace)
    assert basis == [thaw(p) for p in trace.transitions]
    # column 4 of the final basis is the minimization solution on rows 3, 4
    assert [basis[-1][i][3] for i in range(4)] == [0, 0, -3, 2]


def test_rejects_invalid_matrix():
    bad = ConnectionMatrix(3, [{1}, {2}, {3}], {(1, 3): 1})
    with pytest.raises(InvalidMatrixError):
        sweep_over_z(bad)


def test_invariant_suite_on_random(small_corpus):
    for cm in small_corpus[:25]:
        for name, ok, detail in verify_sweep(sweep_over_z(cm)):
            assert ok, (name, detail)


def test_similarity_exact(small_corpus):
    for cm in small_corpus[:10]:
        trace = sweep_over_z(cm)
        delta0 = thaw(trace.matrices[0])
        for r in range(1, len(trace.matrices)):
            p = thaw(trace.transitions[r - 1])
            assert mat_mul(p, thaw(trace.matrices[r])) == mat_mul(delta0, p)
