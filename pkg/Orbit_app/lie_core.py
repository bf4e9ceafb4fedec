# lie_core.py
"""Matrix Lie algebra utilities shared by SL_n and Sp_2n.

Brackets, sl2-triple checks, Jordan types and Jordan bases, a constructive
Jacobson-Morozov solver, and the model matrices J, H, Y of each Jordan type.
All arithmetic is exact; bracket relations are tested with ==.
"""
import logging
from dataclasses import dataclass

from sympy import ImmutableMatrix, Matrix, diag, eye, zeros

from .exceptions import LieAlgebraError
from .linalg import flatten, nullspace, rank, solve
from .partitions import Partition

logger = logging.getLogger(__name__)


def bracket(A: Matrix, B: Matrix) -> Matrix:
    if A.shape != B.shape or A.rows != A.cols:
        raise LieAlgebraError(f"Cannot bracket matrices of shapes {A.shape} and {B.shape}.")
    return A * B - B * A


def symplectic_form(n: int) -> Matrix:
    """J = [[0, I], [-I, 0]] of size 2n."""
    return Matrix.vstack(
        Matrix.hstack(zeros(n), eye(n)),
        Matrix.hstack(-eye(n), zeros(n)),
    )


def in_sl(A: Matrix) -> bool:
    return A.rows == A.cols and A.trace() == 0


def in_sp(A: Matrix) -> bool:
    if A.rows != A.cols or A.rows % 2:
        return False
    J = symplectic_form(A.rows // 2)
    return (A.T * J + J * A).is_zero_matrix


def is_nilpotent(X: Matrix) -> bool:
    return X.rows == X.cols and (X ** X.rows).is_zero_matrix


# --- Model matrices ---

def jordan_block(j: int) -> Matrix:
    return Matrix(j, j, lambda r, c: 1 if c == r + 1 else 0)


def h_block(j: int) -> Matrix:
    return diag(*[j - 1 - 2 * i for i in range(j)])


def y_block(j: int) -> Matrix:
    # J_j^T diag(j-1, 2(j-2), ..., j-1, 0): the subdiagonal entry below column c is (c+1)(j-c-1).
    return Matrix(j, j, lambda r, c: (c + 1) * (j - c - 1) if r == c + 1 else 0)


def standard_block_matrices(lam: Partition) -> tuple:
    """(J, H, Y) of Jordan type lam, blocks in decreasing order."""
    return (
        diag(*[jordan_block(j) for j in lam.parts]),
        diag(*[h_block(j) for j in lam.parts]),
        diag(*[y_block(j) for j in lam.parts]),
    )


@dataclass(frozen=True)
class LieTriple:
    """(Y, H, X) with [H, X] = 2X, [H, Y] = -2Y and [X, Y] = H."""

    Y: ImmutableMatrix
    H: ImmutableMatrix
    X: ImmutableMatrix

    @classmethod
    def of(cls, Y, H, X) -> "LieTriple":
        return cls(ImmutableMatrix(Y), ImmutableMatrix(H), ImmutableMatrix(X))

    @property
    def size(self) -> int:
        return self.X.rows

    def is_valid(self) -> bool:
        try:
            return (
                bracket(self.H, self.X) == 2 * self.X
                and bracket(self.H, self.Y) == -2 * self.Y
                and bracket(self.X, self.Y) == self.H
            )
        except LieAlgebraError:
            return False

    def in_sp(self) -> bool:
        return in_sp(self.Y) and in_sp(self.H) and in_sp(self.X)

    def check(self, symplectic: bool = False) -> "LieTriple":
        if not self.is_valid():
            raise LieAlgebraError("Matrices do not satisfy the sl2 bracket relations.")
        if symplectic and not self.in_sp():
            raise LieAlgebraError("Triple does not lie in the symplectic Lie algebra.")
        return self


# --- Jordan type and Jordan basis ---

def jordan_partition(X: Matrix) -> Partition:
    """Jordan type from the ranks r_i of X^i: m_j = r_{j-1} - 2 r_j + r_{j+1}."""
    if not is_nilpotent(X):
        raise LieAlgebraError("Matrix is not nilpotent.")
    n = X.rows
    ranks = [n]
    power = eye(n)
    for _ in range(n + 1):
        power = power * X
        ranks.append(rank(power))
    parts = []
    for j in range(1, n + 1):
        parts += [j] * (ranks[j - 1] - 2 * ranks[j] + ranks[j + 1])
    return Partition(tuple(parts))


def jordan_basis(X: Matrix) -> Matrix:
    """P with P^-1 X P = J_lam, built from Jordan chains over the rationals."""
    lam = jordan_partition(X)
    n = X.rows
    powers = [eye(n)]
    for _ in range(lam.parts[0]):
        powers.append(powers[-1] * X)
    columns = []
    for j, need in sorted(lam.multiplicities.items(), reverse=True):
        accepted = 0
        for b in nullspace(powers[j]):
            if accepted == need:
                break
            chain = [powers[j - 1 - k] * b for k in range(j)]
            candidate = columns + chain
            if rank(Matrix.hstack(*candidate)) == len(candidate):
                columns = candidate
                accepted += 1
        if accepted < need:
            raise LieAlgebraError(f"Could not complete Jordan chains of length {j}.")
    return Matrix.hstack(*columns)


# --- Jacobson-Morozov ---

def gl_basis(size: int) -> list:
    basis = []
    for i in range(size):
        for j in range(size):
            E = zeros(size)
            E[i, j] = 1
            basis.append(E)
    return basis


def sp_basis(n: int) -> list:
    """A basis of sp_2n adapted to the block form [[A, B], [C, -A^T]]."""
    size = 2 * n
    basis = []
    for i in range(n):
        for j in range(n):
            E = zeros(size)
            E[i, j] += 1
            E[n + j, n + i] -= 1
            basis.append(E)
    for i in range(n):
        for j in range(i, n):
            upper, lower = zeros(size), zeros(size)
            upper[i, n + j] = upper[j, n + i] = 1
            lower[n + i, j] = lower[n + j, i] = 1
            basis += [upper, lower]
    return basis


def _solve_in_span(basis: list, image, target: Matrix) -> Matrix:
    system = Matrix.hstack(*[image(B) for B in basis])
    coefficients = solve(system, target)
    if coefficients is None:
        raise LieAlgebraError("Jacobson-Morozov system has no solution.")
    result = zeros(basis[0].rows)
    for c, B in zip(coefficients, basis):
        if c != 0:
            result += c * B
    return result


def jacobson_morozov(X: Matrix, symplectic: bool = False) -> LieTriple:
    """An sl2-triple through X, with H and Y in sp when ``symplectic`` is set.

    H = [X, Z] with [[X, Z], X] = 2X, then Y from [X, Y] = H and [H, Y] = -2Y.
    Free parameters of both systems are set to zero.
    """
    X = Matrix(X)
    if not is_nilpotent(X):
        raise LieAlgebraError("Jacobson-Morozov needs a nilpotent matrix.")
    if symplectic and not in_sp(X):
        raise LieAlgebraError("Matrix is not in the symplectic Lie algebra.")
    size = X.rows
    if X.is_zero_matrix:
        return LieTriple.of(zeros(size), zeros(size), zeros(size))
    basis = sp_basis(size // 2) if symplectic else gl_basis(size)

    Z = _solve_in_span(basis, lambda B: flatten(bracket(bracket(X, B), X)), flatten(2 * X))
    H = bracket(X, Z)
    Y = _solve_in_span(
        basis,
        lambda B: flatten(bracket(X, B)).col_join(flatten(bracket(H, B) + 2 * B)),
        flatten(H).col_join(zeros(size * size, 1)),
    )
    return LieTriple.of(Y, H, X).check(symplectic)
