# sl_orbits.py
"""Rational nilpotent orbits of SL_n(Q_p).

An orbit is a Jordan type lam together with a class d in k^x/(k^x)^gcd(lam);
its representative is J_lam D(d) with D(d) = diag(1, ..., 1, d).
"""
import logging
import random
from dataclasses import dataclass

from sympy import Integer, Matrix, Rational, diag, eye

from .exceptions import LieAlgebraError
from .lie_core import LieTriple, in_sl, jordan_basis, jordan_partition, standard_block_matrices
from .localfield import LocalField
from .partitions import Partition, enumerate_partitions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SLOrbit:
    lam: Partition
    d_class: tuple
    d: Integer

    @property
    def n(self) -> int:
        return self.lam.size

    @property
    def orbit_id(self) -> str:
        if self.lam.gcd == 1:
            return f"sl:{self.lam.label()}:d=1"
        a, i = self.d_class
        return f"sl:{self.lam.label()}:d=val:{a},unit:{i},rep:{self.d}"

    def class_data(self) -> dict:
        return {"val": self.d_class[0], "unit_class": self.d_class[1], "d": str(self.d)}


def enumerate_sl_orbits(field: LocalField, n: int) -> list:
    if n < 2:
        raise LieAlgebraError(f"SL_n needs n >= 2, got {n}.")
    orbits = []
    for lam in enumerate_partitions(n):
        for d_class, d in field.power_class_representatives(lam.gcd):
            orbits.append(SLOrbit(lam, d_class, d))
    return orbits


def d_matrix(n: int, d) -> Matrix:
    return diag(*([1] * (n - 1) + [d]))


def sl_representative(o: SLOrbit) -> Matrix:
    J, _, _ = standard_block_matrices(o.lam)
    return J * d_matrix(o.n, o.d)


def sl_lie_triple(o: SLOrbit) -> LieTriple:
    """(D^-1 Y_lam, H_lam, J_lam D)."""
    J, H, Y = standard_block_matrices(o.lam)
    D = d_matrix(o.n, o.d)
    return LieTriple.of(D.inv() * Y, H, J * D)


def classify_sl(field: LocalField, X) -> SLOrbit:
    """The SL_n(k)-orbit of a nilpotent trace-zero X.

    With g = P^-1 for a Jordan basis P, g X g^-1 = J_lam and X is SL-conjugate
    to J_lam D(det g).
    """
    X = Matrix(X)
    if not in_sl(X):
        raise LieAlgebraError("Matrix is not trace-free.")
    lam = jordan_partition(X)
    m = lam.gcd
    if m == 1:
        return SLOrbit(lam, (0, 0), Integer(1))
    det_g = Rational(1) / jordan_basis(X).det()
    d_class = field.power_class(det_g, m)
    d = dict(field.power_class_representatives(m))[d_class]
    return SLOrbit(lam, d_class, d)


def random_sl_conjugator(n: int, rng: random.Random, steps: int = 6, bound: int = 3) -> tuple:
    """(g, g^-1) for g a product of integer transvections, so det g = 1."""
    g, g_inv = eye(n), eye(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-bound, bound)
        t, t_inv = eye(n), eye(n)
        t[i, j], t_inv[i, j] = c, -c
        g, g_inv = g * t, t_inv * g_inv
    return g, g_inv
