"""Integer linear algebra helpers: exact solving, kernels, canonical picks."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from affkl._intlinalg import canonical_solution, smith_normal_form, solve_int

small_ints = st.integers(min_value=-4, max_value=4)


def test_solve_int_simple():
    x0, kernel = solve_int([[2, 0], [0, 3]], [4, 9])
    assert x0 == [2, 3]
    assert kernel == []


def test_solve_int_underdetermined_has_kernel():
    x0, kernel = solve_int([[1, 1]], [2])
    assert x0[0] + x0[1] == 2
    assert len(kernel) == 1
    k = kernel[0]
    assert k[0] + k[1] == 0 and k != [0, 0]


def test_solve_int_no_solution():
    assert solve_int([[2]], [3]) is None


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=2, max_size=2),
                min_size=2, max_size=2),
       st.lists(small_ints, min_size=2, max_size=2))
def test_solve_int_solutions_check_out(a, b):
    res = solve_int(a, b)
    if res is None:
        return
    x0, kernel = res
    for row, rhs in zip(a, b):
        assert sum(r * x for r, x in zip(row, x0)) == rhs
    for k in kernel:
        for row in a:
            assert sum(r * x for r, x in zip(row, k)) == 0


def test_smith_normal_form_membership():
    d, p = smith_normal_form([[2, 0], [0, 3]])
    vec = [4, 3]
    img = [sum(p[i][j] * vec[j] for j in range(2)) for i in range(2)]
    assert all(img[i] % d[i] == 0 for i in range(2))


def test_canonical_solution_minimizes_box_norm():
    # one equation x + y = 0: the zero solution beats every other one
    sol = canonical_solution([[1, 1]], [0])
    assert sol == [0, 0]


def test_canonical_solution_none_when_unsolvable():
    assert canonical_solution([[2]], [1]) is None


def test_canonical_solution_is_a_solution():
    a = [[1, 2], [0, 1]]
    sol = canonical_solution(a, [3, 1])
    assert sol is not None
    for row, rhs in zip(a, [3, 1]):
        assert sum(r * x for r, x in zip(row, sol)) == rhs
