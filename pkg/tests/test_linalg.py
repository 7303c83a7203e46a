import sympy
from hypothesis import given
from hypothesis import strategies as st

from app.models.linalg import column_hermite_form, hermite_coordinates, integer_solve, smith_normal_form

small_matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda rows: st.integers(min_value=1, max_value=4).flatmap(
        lambda columns: st.lists(
            st.lists(st.integers(min_value=-12, max_value=12), min_size=columns, max_size=columns),
            min_size=rows, max_size=rows,
        )
    )
)


def _product(*matrices):
    result = sympy.Matrix(matrices[0])
    for m in matrices[1:]:
        result = result * sympy.Matrix(m)
    return result


def test_smith_form_of_small_matrix():
    form = smith_normal_form([[2, 4], [6, 8]])
    assert form.diagonal == [2, 4]
    assert form.rank == 2


def test_smith_form_of_zero_rows():
    form = smith_normal_form([], columns=3)
    assert form.diagonal == []
    assert form.rank == 0
    assert form.v == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@given(small_matrices)
def test_transforms_are_unimodular_and_diagonalize(matrix):
    form = smith_normal_form(matrix)
    assert _product(form.u, matrix, form.v) == sympy.Matrix(form.d)
    assert abs(sympy.Matrix(form.u).det()) == 1
    assert abs(sympy.Matrix(form.v).det()) == 1
    assert _product(form.u, form.u_inv) == sympy.eye(form.rows)
    assert _product(form.v, form.v_inv) == sympy.eye(form.columns)


@given(small_matrices)
def test_divisor_chain(matrix):
    diagonal = smith_normal_form(matrix).diagonal
    assert all(d >= 0 for d in diagonal)
    nonzero = [d for d in diagonal if d]
    assert nonzero == diagonal[:len(nonzero)]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@given(small_matrices, st.data())
def test_integer_solve_finds_preimages(matrix, data):
    columns = len(matrix[0])
    x = data.draw(st.lists(st.integers(min_value=-5, max_value=5), min_size=columns, max_size=columns))
    b = list(sympy.Matrix(matrix) * sympy.Matrix(x))
    solution = integer_solve(matrix, b)
    assert solution is not None
    assert list(sympy.Matrix(matrix) * sympy.Matrix(solution)) == b


def test_integer_solve_detects_no_solution():
    assert integer_solve([[2, 4]], [3]) is None
    assert integer_solve([[0, 0]], [1]) is None


def test_column_hermite_form():
    columns = [(2, 3, 5), (7, 11, 13), (17, 19, 23), (29, 31, 37), (41, 43, 47)]
    basis = column_hermite_form(columns, 3)
    assert basis == [[1, 0, 0], [0, 2, 0], [0, 1, 1]]
    assert hermite_coordinates(basis, (0, 3, 1)) == (0, 1, 1)
    assert hermite_coordinates(basis, (0, 1, 0)) is None


def test_column_hermite_form_drops_dependent_vectors():
    assert column_hermite_form([(2, 0), (4, 0)], 2) == [[2, 0]]
    assert column_hermite_form([], 2) == []


@given(st.lists(st.lists(st.integers(min_value=-6, max_value=6), min_size=3, max_size=3), min_size=1, max_size=6))
def test_hermite_basis_spans_the_same_lattice(vectors):
    scaled = vectors + [[5, 0, 0], [0, 5, 0], [0, 0, 5]]
    basis = column_hermite_form(scaled, 3)
    assert len(basis) == 3
    for j, vector in enumerate(basis):
        assert vector[j] > 0
        assert not any(vector[j + 1:])
    for vector in scaled:
        coordinates = hermite_coordinates(basis, vector)
        assert coordinates is not None
        assert list(_product([list(col) for col in zip(*basis)], [[c] for c in coordinates])) == list(vector)

