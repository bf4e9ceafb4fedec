# sp_orbits.py
"""Rational nilpotent orbits of Sp_2n(Q_p).

An orbit is a symplectic partition lam of 2n together with, for each even part
j, an isometry class of quadratic forms of dimension m_j. Coordinates are
p_1..p_n, q_1..q_n with <p_i, q_j> = delta_ij; the summand V(j) of part j takes
the indices s_j+1 .. s_j + j m_j / 2, smaller parts first.
"""
import logging
import random
from dataclasses import dataclass
from itertools import product

from sympy import Matrix, eye, zeros

from .exceptions import LieAlgebraError, QuadraticFormError
from .lie_core import (
    LieTriple,
    h_block,
    in_sp,
    jacobson_morozov,
    jordan_block,
    jordan_partition,
    symplectic_form,
    y_block,
)
from .linalg import nullspace
from .localfield import LocalField
from .partitions import Partition, symplectic_partitions
from .quadform import FormInvariants, diagonalize, enumerate_classes, invariants, minimal_representative

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpOrbit:
    lam: Partition
    forms: tuple = ()  # ((j, FormInvariants), ...) for even j with m_j > 0, j increasing

    def __post_init__(self):
        if not self.lam.is_symplectic():
            raise LieAlgebraError(f"{self.lam} is not a symplectic partition.")
        mult = self.lam.multiplicities
        for j, form in self.forms:
            if j % 2 or form.dim != mult.get(j, 0):
                raise LieAlgebraError(f"Form for part {j} has the wrong dimension.")

    @property
    def n(self) -> int:
        return self.lam.size // 2

    @property
    def forms_dict(self) -> dict:
        return dict(self.forms)

    @property
    def orbit_id(self) -> str:
        labels = [f"Q{j}=det:{inv.det_class},hasse:{inv.hasse:+d}" for j, inv in self.forms]
        return f"sp:{self.lam.label()}" + (":" + ";".join(labels) if labels else "")

    def class_data(self) -> dict:
        return {f"Q{j}": inv.as_dict() for j, inv in self.forms}


def enumerate_sp_orbits(field: LocalField, n: int) -> list:
    if n < 1:
        raise LieAlgebraError(f"Sp_2n needs n >= 1, got {n}.")
    orbits = []
    for lam in symplectic_partitions(2 * n):
        even = [(j, m) for j, m in lam.multiplicities.items() if j % 2 == 0]
        choices = [[(j, inv) for inv in enumerate_classes(field, m)] for j, m in even]
        for forms in product(*choices):
            orbits.append(SpOrbit(lam, tuple(forms)))
    return orbits


def block_offsets(lam: Partition) -> dict:
    """s_j = sum over parts j' < j of j' m_j' / 2."""
    offsets, total = {}, 0
    for j, m in sorted(lam.multiplicities.items()):
        offsets[j] = total
        total += j * m // 2
    return offsets


def _place(target: Matrix, local: Matrix, n: int, s: int):
    K = local.rows // 2

    def index(a):
        return s + a if a < K else n + s + a - K

    for a in range(local.rows):
        for b in range(local.cols):
            if local[a, b] != 0:
                target[index(a), index(b)] = local[a, b]


def _blocks(*parts) -> Matrix:
    return Matrix.vstack(Matrix.hstack(parts[0], parts[1]), Matrix.hstack(parts[2], parts[3]))


def _odd_summand(j: int, m: int) -> tuple:
    copies = m // 2
    Jm = Matrix.diag(*[jordan_block(j)] * copies)
    Hm = Matrix.diag(*[h_block(j)] * copies)
    Ym = Matrix.diag(*[y_block(j)] * copies)
    Z = zeros(Jm.rows)
    return (
        _blocks(Ym, Z, Z, -Ym.T),
        _blocks(Hm, Z, Z, -Hm),
        _blocks(Jm, Z, Z, -Jm.T),
    )


def _even_summand(j: int, m: int, Q: Matrix) -> tuple:
    N = j // 2
    K = N * m
    sign = (-1) ** N
    shift = Matrix(K, K, lambda r, c: 1 if c == r + m else 0)
    coeffs = [(g + 1) * (j - g - 1) for g in range(N - 1)]
    lower = Matrix(K, K, lambda r, c: coeffs[c // m] if r == c + m else 0)
    weights = Matrix.diag(*[j - 1 - 2 * (g // m) for g in range(K)])
    upper_right, lower_left = zeros(K), zeros(K)
    upper_right[K - m:, K - m:] = sign * Q
    lower_left[K - m:, K - m:] = sign * N * N * Q.inv()
    Z = zeros(K)
    return (
        _blocks(lower, Z, lower_left, -lower.T),
        _blocks(weights, Z, Z, -weights),
        _blocks(shift, upper_right, Z, -shift.T),
    )


def sp_lie_triple(field: LocalField, o: SpOrbit) -> LieTriple:
    """The explicit triple of the orbit; H is diagonal and all three lie in sp."""
    n = o.n
    Y, H, X = zeros(2 * n), zeros(2 * n), zeros(2 * n)
    forms = o.forms_dict
    for j, s in block_offsets(o.lam).items():
        m = o.lam.multiplicities[j]
        if j % 2:
            local = _odd_summand(j, m)
        else:
            local = _even_summand(j, m, minimal_representative(field, forms[j]))
        for target, block in zip((Y, H, X), local):
            _place(target, block, n, s)
    return LieTriple.of(Y, H, X)


def sp_representative(field: LocalField, o: SpOrbit) -> Matrix:
    return Matrix(sp_lie_triple(field, o).X)


def lowest_weight_space(triple: LieTriple, j: int) -> list:
    """Basis of {v : Hv = -(j-1)v, Yv = 0}."""
    size = triple.size
    system = (triple.H + (j - 1) * eye(size)).col_join(Matrix(triple.Y))
    return nullspace(system)


def recover_forms(field: LocalField, triple: LieTriple) -> dict:
    """Invariants of (v, w) -> <v, X^(j-1) w> on L(j), for each even j present."""
    triple.check(symplectic=True)
    size = triple.size
    J = symplectic_form(size // 2)
    forms = {}
    power = eye(size)
    for j in range(1, size + 1):
        if j > 1:
            power = power * triple.X
        basis = lowest_weight_space(triple, j)
        if not basis:
            continue
        L = Matrix.hstack(*basis)
        gram = L.T * J * power * L
        if j % 2:
            if gram + gram.T != zeros(gram.rows):
                raise QuadraticFormError(f"Induced form on L({j}) is not alternating.")
            continue
        if gram != gram.T:
            raise QuadraticFormError(f"Induced form on L({j}) is not symmetric.")
        forms[j] = invariants(field, diagonalize(gram))
    return forms


def classify_sp(field: LocalField, X) -> SpOrbit:
    X = Matrix(X)
    if not in_sp(X):
        raise LieAlgebraError("Matrix is not in the symplectic Lie algebra.")
    lam = jordan_partition(X)
    forms = recover_forms(field, jacobson_morozov(X, symplectic=True))
    return SpOrbit(lam, tuple(sorted(forms.items())))


def random_sp_conjugator(n: int, rng: random.Random, steps: int = 6, bound: int = 3) -> tuple:
    """(g, g^-1) for g a product of integer symplectic transvections I + cE, E^2 = 0."""
    size = 2 * n
    g, g_inv = eye(size), eye(size)
    for _ in range(steps):
        c = rng.choice([k for k in range(-bound, bound + 1) if k])
        E = zeros(size)
        kind = rng.choice(("short", "upper", "lower"))
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == "short" and i != j:
            E[i, j], E[n + j, n + i] = 1, -1
        elif kind == "upper":
            E[i, n + j] = E[j, n + i] = 1
        else:
            E[n + i, j] = E[n + j, i] = 1
        g, g_inv = g * (eye(size) + c * E), (eye(size) - c * E) * g_inv
    return g, g_inv
