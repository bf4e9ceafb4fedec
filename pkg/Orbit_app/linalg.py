# linalg.py
"""Exact rational linear algebra on sympy matrices.

Row reduction goes through ``DomainMatrix`` over ``QQ``; everything handed back
to callers is an ordinary sympy ``Matrix`` with ``Rational`` entries.
"""
from sympy import Matrix, Rational, zeros
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def as_matrix(rows) -> Matrix:
    """Builds a rational Matrix from nested rows, rejecting floats."""
    M = Matrix(rows)
    for entry in M:
        if not entry.is_Rational:
            raise ValueError(f"Matrix entry {entry!r} is not an exact rational.")
    return M


def _domain(M: Matrix) -> DomainMatrix:
    return DomainMatrix.from_Matrix(M).convert_to(QQ)


def rref(M: Matrix):
    """Reduced row echelon form with unit pivots, and the pivot columns."""
    if M.rows == 0 or M.cols == 0:
        return Matrix(M), ()
    reduced, pivots = _domain(M).rref()
    R = reduced.to_Matrix()
    for row, col in enumerate(pivots):
        lead = R[row, col]
        if lead != 1:
            R[row, :] = R[row, :] / lead
    return R, tuple(pivots)


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def solve(A: Matrix, b: Matrix):
    """A particular solution of A·x = b with every free variable set to 0.

    Returns None when the system is inconsistent.
    """
    R, pivots = rref(A.row_join(b))
    if A.cols in pivots:
        return None
    x = zeros(A.cols, 1)
    for row, col in enumerate(pivots):
        x[col, 0] = R[row, A.cols]
    return x


def nullspace(M: Matrix) -> list:
    """Basis of the right kernel, one column vector per free variable."""
    R, pivots = rref(M)
    free = [col for col in range(M.cols) if col not in pivots]
    basis = []
    for f in free:
        v = zeros(M.cols, 1)
        v[f, 0] = Rational(1)
        for row, col in enumerate(pivots):
            v[col, 0] = -R[row, f]
        basis.append(v)
    return basis


def in_row_space(rows: list, vector) -> bool:
    """True if ``vector`` is a rational combination of ``rows``."""
    if not rows:
        return all(c == 0 for c in vector)
    base = Matrix(rows)
    return rank(base.col_join(Matrix([list(vector)]))) == rank(base)


def flatten(M: Matrix) -> Matrix:
    """Column vector of the entries of M in row-major order."""
    return Matrix(M.rows * M.cols, 1, list(M))
