# quadform.py
"""Nondegenerate quadratic forms over Q_p: invariants, Witt decomposition,
minimal representatives and enumeration of isometry classes.

Forms are stored diagonally. Dimension, determinant class and Hasse invariant
together decide isometry, so nothing is lost by keeping only the diagonal.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from sympy import Integer, Matrix, Rational, diag, zeros

from .exceptions import QuadraticFormError
from .localfield import LocalField, to_field_element

logger = logging.getLogger(__name__)

HYPERBOLIC_PLANE = Matrix([[0, 1], [1, 0]])


@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal Gram coefficients; the empty tuple is the zero form."""

    diag: tuple = ()

    def __post_init__(self):
        if any(a == 0 for a in self.diag):
            raise QuadraticFormError(f"Degenerate diagonal form {self.diag}.")

    @classmethod
    def from_entries(cls, entries) -> "QuadraticForm":
        return cls(tuple(to_field_element(a) for a in entries))

    @property
    def dim(self) -> int:
        return len(self.diag)

    def gram(self) -> Matrix:
        if not self.diag:
            return zeros(0, 0)
        return diag(*self.diag)

    def __str__(self):
        return "diag(" + ", ".join(str(a) for a in self.diag) + ")"


@dataclass(frozen=True)
class FormInvariants:
    dim: int
    det_class: Integer
    hasse: int

    def label(self) -> str:
        return f"dim:{self.dim},det:{self.det_class},hasse:{self.hasse:+d}"

    def as_dict(self) -> dict:
        return {"dim": self.dim, "det": str(self.det_class), "hasse": self.hasse}


ZERO_FORM = FormInvariants(0, Integer(1), 1)


def diagonalize(gram) -> QuadraticForm:
    """Symmetric Gram-Schmidt over the rationals (char 0, so 2 is invertible)."""
    G = Matrix(gram)
    if not G.is_square or G != G.T:
        raise QuadraticFormError("Gram matrix must be square and symmetric.")
    entries = []
    size = G.rows
    for k in range(size):
        if G[k, k] == 0:
            partner = next((j for j in range(k + 1, size) if G[k, j] != 0), None)
            if partner is None:
                raise QuadraticFormError("Gram matrix is singular.")
            # e_k <- e_k + e_partner makes the pivot 2*G[k, partner] + G[partner, partner] nonzero
            # after possibly swapping to e_k - e_partner.
            sign = 1 if 2 * G[k, partner] + G[partner, partner] != 0 else -1
            G[k, :] = G[k, :] + sign * G[partner, :]
            G[:, k] = G[:, k] + sign * G[:, partner]
        pivot = G[k, k]
        for j in range(k + 1, size):
            if G[j, k] != 0:
                factor = G[j, k] / pivot
                G[j, :] = G[j, :] - factor * G[k, :]
                G[:, j] = G[:, j] - factor * G[:, k]
        entries.append(pivot)
    return QuadraticForm(tuple(entries))


def invariants(field: LocalField, Q: QuadraticForm) -> FormInvariants:
    det = Rational(1)
    for a in Q.diag:
        det *= a
    hasse = 1
    for a, b in combinations(Q.diag, 2):
        hasse *= field.hilbert_symbol(a, b)
    return FormInvariants(Q.dim, field.square_class(det), hasse)


def _as_invariants(field: LocalField, Q) -> FormInvariants:
    if isinstance(Q, FormInvariants):
        return Q
    return invariants(field, Q)


def isometric(field: LocalField, Q, Q2) -> bool:
    return _as_invariants(field, Q) == _as_invariants(field, Q2)


def direct_sum(Q: QuadraticForm, Q2: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(Q.diag + Q2.diag)


def direct_sum_invariants(field: LocalField, first: FormInvariants, second: FormInvariants) -> FormInvariants:
    """hasse(Q + Q') = hasse(Q) hasse(Q') (det Q, det Q')."""
    return FormInvariants(
        first.dim + second.dim,
        field.square_class(first.det_class * second.det_class),
        first.hasse * second.hasse * field.hilbert_symbol(first.det_class, second.det_class),
    )


def hyperbolic_invariants(field: LocalField, m: int = 1) -> FormInvariants:
    plane = FormInvariants(2, field.square_class(-1), 1)
    total = ZERO_FORM
    for _ in range(m):
        total = direct_sum_invariants(field, total, plane)
    return total


# --- Anisotropic kernels ---

def anisotropic_representatives(field: LocalField) -> list:
    """The fifteen anisotropic diagonal forms, dimension 1 through 4, in table order."""
    eps, pi = Integer(field.epsilon), Integer(field.p)
    alpha = eps if field.minus_one_is_square else Integer(1)
    units = (Integer(1), eps)
    rows = [(1,), (eps,), (pi,), (eps * pi,)]
    rows += [(1, alpha), (pi, alpha * pi)]
    rows += [(t, t2 * pi) for t in units for t2 in units]
    rows += [(alpha * t, pi, alpha * pi) for t in units]
    rows += [(1, alpha, t * pi) for t in units]
    rows += [(1, -eps, -pi, eps * pi)]
    return [QuadraticForm.from_entries(row) for row in rows]


def _kernel_candidates(field: LocalField) -> list:
    return [QuadraticForm()] + anisotropic_representatives(field)


def witt_split(field: LocalField, Q) -> tuple:
    """(m, kernel) with Q isometric to q0^m + kernel and kernel anisotropic.

    ``kernel`` is the table's diagonal form, so its entries are exact.
    """
    target = _as_invariants(field, Q)
    for kernel in _kernel_candidates(field):
        rest = target.dim - kernel.dim
        if rest < 0 or rest % 2:
            continue
        m = rest // 2
        candidate = direct_sum_invariants(field, hyperbolic_invariants(field, m), invariants(field, kernel))
        if candidate == target:
            return m, kernel
    raise QuadraticFormError(f"No Witt decomposition found for {target.label()}.")


def anisotropic_kernel(field: LocalField, Q) -> tuple:
    m, kernel = witt_split(field, Q)
    return m, invariants(field, kernel)


def is_anisotropic(field: LocalField, Q) -> bool:
    return anisotropic_kernel(field, Q)[0] == 0


def minimal_representative(field: LocalField, Q) -> Matrix:
    """Block matrix q0^m + D with D the table diagonal of the anisotropic kernel."""
    m, kernel = witt_split(field, Q)
    blocks = [HYPERBOLIC_PLANE] * m + [Matrix([[a]]) for a in kernel.diag]
    if not blocks:
        return zeros(0, 0)
    return diag(*blocks)


def enumerate_classes(field: LocalField, dim: int) -> list:
    """Every isometry class of dimension ``dim``, each once, in discovery order."""
    if dim == 0:
        return [ZERO_FORM]
    seen = {}
    for entries in combinations_with_replacement(field.square_class_representatives, dim):
        inv = invariants(field, QuadraticForm(tuple(entries)))
        seen.setdefault(inv, None)
    return list(seen)
