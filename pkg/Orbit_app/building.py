# building.py
"""Standard apartment of split SL_n and Sp_2n.

Roots, affine roots, Moy-Prasad membership and r-facets. The level r is an
irrational number of the form q + c*sqrt(2); every comparison is exact.
"""
import logging
import math
import random
import re
from dataclasses import dataclass
from functools import cached_property, total_ordering

from sympy import Matrix, Rational, diag, zeros

from .exceptions import FacetError, LieAlgebraError
from .lie_core import in_sp
from .linalg import in_row_space, nullspace, rank, solve

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2)
RSCALAR_PATTERN = re.compile(
    r"(?P<q>[+-]?\d+(?:/\d+)?)?(?:(?P<sign>[+-])?(?:(?P<c>\d+(?:/\d+)?)\*)?sqrt2)?"
)


@total_ordering
@dataclass(frozen=True, eq=False)
class RScalar:
    """q + c*sqrt(2) with rational q and c."""

    q: Rational = Rational(0)
    c: Rational = Rational(0)

    def __post_init__(self):
        object.__setattr__(self, "q", Rational(self.q))
        object.__setattr__(self, "c", Rational(self.c))

    @classmethod
    def coerce(cls, value) -> "RScalar":
        if isinstance(value, RScalar):
            return value
        return cls(Rational(value), 0)

    @classmethod
    def parse(cls, text: str) -> "RScalar":
        """Reads the forms printed by __str__, e.g. '1/2', '-sqrt2', '1+1/2*sqrt2'."""
        body = str(text).replace(" ", "").replace("\u221a2", "sqrt2")
        match = RSCALAR_PATTERN.fullmatch(body)
        if not body or not match or (match.group("q") and "sqrt2" in body and not match.group("sign")):
            raise ValueError(f"Cannot read {text!r} as q + c*sqrt2.")
        q = Rational(match.group("q") or 0)
        c = Rational(0)
        if "sqrt2" in body:
            c = Rational(match.group("c") or 1)
            if match.group("sign") == "-":
                c = -c
        return cls(q, c)

    @classmethod
    def sqrt2_multiple(cls, c) -> "RScalar":
        return cls(0, Rational(c))

    def __add__(self, other):
        other = RScalar.coerce(other)
        return RScalar(self.q + other.q, self.c + other.c)

    __radd__ = __add__

    def __neg__(self):
        return RScalar(-self.q, -self.c)

    def __sub__(self, other):
        return self + (-RScalar.coerce(other))

    def __rsub__(self, other):
        return RScalar.coerce(other) - self

    def __mul__(self, other):
        other = RScalar.coerce(other)
        return RScalar(
            self.q * other.q + 2 * self.c * other.c,
            self.q * other.c + self.c * other.q,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        q, c = self.q, self.c
        if q >= 0 and c >= 0:
            return 0 if q == 0 and c == 0 else 1
        if q <= 0 and c <= 0:
            return -1
        # Opposite signs: compare q^2 with 2c^2, never equal since sqrt(2) is irrational.
        larger_rational_part = q * q > 2 * c * c
        return 1 if (q > 0) == larger_rational_part else -1

    def __eq__(self, other):
        try:
            other = RScalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.q == other.q and self.c == other.c

    def __lt__(self, other):
        return (self - RScalar.coerce(other)).sign() < 0

    def __hash__(self):
        return hash((self.q, self.c))

    def __float__(self):
        return float(self.q) + float(self.c) * SQRT2

    def is_integer(self) -> bool:
        return self.c == 0 and self.q.is_integer

    def floor(self) -> int:
        k = math.floor(float(self))
        while self < k:
            k -= 1
        while self >= k + 1:
            k += 1
        return k

    def __str__(self):
        if self.c == 0:
            return str(self.q)
        radical = f"{self.c}*sqrt2" if self.c not in (1, -1) else ("sqrt2" if self.c == 1 else "-sqrt2")
        if self.q == 0:
            return radical
        return f"{self.q}{'+' if self.c > 0 else ''}{radical}"

    def __repr__(self):
        return f"RScalar({self})"


@dataclass(frozen=True, order=True)
class Root:
    """Gradient of an affine root, as integer coefficients on e_1..e_n."""

    coeffs: tuple

    def __neg__(self):
        return Root(tuple(-a for a in self.coeffs))

    def is_positive(self) -> bool:
        return next(a for a in self.coeffs if a) > 0

    def positive(self) -> "Root":
        return self if self.is_positive() else -self

    def pair(self, vector) -> int:
        return sum(a * b for a, b in zip(self.coeffs, vector))

    def evaluate(self, x: "ApartmentPoint") -> RScalar:
        total = RScalar()
        for a, value in zip(self.coeffs, x.coords):
            if a:
                total = total + a * value
        return total

    def label(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs, start=1):
            if not a:
                continue
            sign = "-" if a < 0 else "+"
            magnitude = "" if abs(a) == 1 else str(abs(a))
            terms.append(f"{sign}{magnitude}e{i}")
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text

    def __str__(self):
        return self.label()


@dataclass(frozen=True, order=True)
class AffineRoot:
    gradient: Root
    offset: int = 0

    def evaluate(self, x: "ApartmentPoint") -> RScalar:
        return self.gradient.evaluate(x) + self.offset

    def label(self) -> str:
        if self.offset == 0:
            return self.gradient.label()
        return f"{self.gradient.label()}{self.offset:+d}"

    def __str__(self):
        return self.label()


def hit_offset(gradient: Root, x: "ApartmentPoint", level: RScalar):
    """The integer n with gradient(x) + n = level, or None."""
    gap = level - gradient.evaluate(x)
    return int(gap.q) if gap.is_integer() else None


@dataclass(frozen=True)
class ApartmentPoint:
    coords: tuple

    def translate(self, vector, t) -> "ApartmentPoint":
        return ApartmentPoint(tuple(x + t * RScalar.coerce(v) for x, v in zip(self.coords, vector)))

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


def eval_affine(psi: AffineRoot, x: ApartmentPoint) -> RScalar:
    return psi.evaluate(x)


def _unit(n: int, i: int, a: int = 1) -> list:
    v = [0] * n
    v[i] = a
    return v


@dataclass(frozen=True)
class RootDatum:
    """Split SL_n (group 'sl', n = matrix size) or Sp_2n (group 'sp', n = rank)."""

    group: str
    n: int

    def __post_init__(self):
        if self.group not in ("sl", "sp"):
            raise LieAlgebraError(f"Unknown group {self.group!r}.")

    @property
    def matrix_size(self) -> int:
        return self.n if self.group == "sl" else 2 * self.n

    @property
    def apartment_dim(self) -> int:
        return self.n - 1 if self.group == "sl" else self.n

    @cached_property
    def roots(self) -> tuple:
        n, found = self.n, []
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = _unit(n, i)
                    v[j] = -1
                    found.append(Root(tuple(v)))
        if self.group == "sp":
            for i in range(n):
                for j in range(i + 1, n):
                    v = _unit(n, i)
                    v[j] = 1
                    found += [Root(tuple(v)), -Root(tuple(v))]
                found += [Root(tuple(_unit(n, i, 2))), Root(tuple(_unit(n, i, -2)))]
        return tuple(sorted(found))

    def point(self, coords) -> ApartmentPoint:
        coords = tuple(RScalar.coerce(x) for x in coords)
        if len(coords) != self.n:
            raise FacetError(f"Expected {self.n} coordinates, got {len(coords)}.")
        if self.group == "sl" and sum(coords, RScalar()) != 0:
            raise FacetError("SL apartment points must have coordinates summing to zero.")
        return ApartmentPoint(coords)

    def origin(self) -> ApartmentPoint:
        return ApartmentPoint(tuple(RScalar() for _ in range(self.n)))

    def hits(self, x: ApartmentPoint, level: RScalar) -> frozenset:
        """Every affine root psi with psi(x) = level."""
        found = set()
        for root in self.roots:
            k = hit_offset(root, x, level)
            if k is not None:
                found.add(AffineRoot(root, k))
        return frozenset(found)

    # --- Root decomposition of Lie algebra elements ---

    def decompose(self, M) -> tuple:
        """(torus coordinates, {Root: nonzero entry})."""
        M = Matrix(M)
        size, n = self.matrix_size, self.n
        if M.shape != (size, size):
            raise LieAlgebraError(f"Expected a {size}x{size} matrix, got {M.shape}.")
        components = {}
        if self.group == "sl":
            if M.trace() != 0:
                raise LieAlgebraError("Matrix is not trace-free.")
            for i in range(n):
                for j in range(n):
                    if i != j and M[i, j] != 0:
                        v = _unit(n, i)
                        v[j] = -1
                        components[Root(tuple(v))] = M[i, j]
            return tuple(M[i, i] for i in range(n)), components
        if not in_sp(M):
            raise LieAlgebraError("Matrix is not in the symplectic Lie algebra.")
        for i in range(n):
            for j in range(n):
                if i != j and M[i, j] != 0:
                    v = _unit(n, i)
                    v[j] = -1
                    components[Root(tuple(v))] = M[i, j]
            for j in range(i, n):
                v = _unit(n, i, 2) if i == j else _unit(n, i)
                if i != j:
                    v[j] = 1
                if M[i, n + j] != 0:
                    components[Root(tuple(v))] = M[i, n + j]
                if M[n + i, j] != 0:
                    components[-Root(tuple(v))] = M[n + i, j]
        return tuple(M[i, i] for i in range(n)), components

    def assemble(self, torus, components: dict) -> Matrix:
        n = self.n
        if self.group == "sl":
            M = diag(*torus) if torus else zeros(n)
            for root, value in components.items():
                i, j = root.coeffs.index(1), root.coeffs.index(-1)
                M[i, j] = value
            return M
        A, B, C = diag(*torus), zeros(n), zeros(n)
        for root, value in components.items():
            support = [i for i, a in enumerate(root.coeffs) if a]
            if sum(root.coeffs) == 0:
                A[root.coeffs.index(1), root.coeffs.index(-1)] = value
                continue
            i, j = support[0], support[-1]
            target = B if root.is_positive() else C
            target[i, j] = target[j, i] = value
        return Matrix.vstack(Matrix.hstack(A, B), Matrix.hstack(C, -A.T))


def root_decompose(M, datum: RootDatum) -> tuple:
    return datum.decompose(M)


def moy_prasad_contains(field, datum: RootDatum, x: ApartmentPoint, level, M, strict: bool = False) -> bool:
    """Membership of M in g_{x,level} (or g_{x,level+} when ``strict``)."""
    level = RScalar.coerce(level)
    torus, components = datum.decompose(M)

    def meets(value: RScalar) -> bool:
        return value > level if strict else value >= level

    for t in torus:
        if t != 0 and not meets(RScalar.coerce(field.valuation(t))):
            return False
    for root, value in components.items():
        if not meets(root.evaluate(x) + field.valuation(value)):
            return False
    return True


@dataclass(frozen=True)
class RFacet:
    """Generic point of the intersection of the hyperplanes psi = level over ``defining``.

    ``equalities`` lists every affine root equal to the level at the witness; it
    contains ``defining`` and any root forced by it.
    """

    datum: RootDatum
    level: RScalar
    defining: frozenset
    equalities: frozenset
    witness: ApartmentPoint
    dim: int

    def contains(self, x: ApartmentPoint) -> bool:
        return self.datum.hits(x, self.level) == self.equalities


def facet_from_equalities(datum: RootDatum, S, level, seed: int = 0, max_attempts: int = 64) -> RFacet:
    level = RScalar.coerce(level)
    S = tuple(sorted(set(S)))
    n = datum.n
    gradients = [list(psi.gradient.coeffs) for psi in S]
    if gradients and rank(Matrix(gradients)) < len(gradients):
        raise FacetError("Affine root gradients are linearly dependent.")
    rows = gradients + ([[1] * n] if datum.group == "sl" else [])
    if rows:
        A = Matrix(rows)
        tail = [0] if datum.group == "sl" else []
        rational = solve(A, Matrix([level.q - psi.offset for psi in S] + tail))
        irrational = solve(A, Matrix([level.c for _ in S] + tail))
        if rational is None or irrational is None:
            raise FacetError("Equality system is inconsistent.")
        kernel = nullspace(A)
    else:
        rational, irrational = zeros(n, 1), zeros(n, 1)
        kernel = [Matrix(_unit(n, i)) for i in range(n)]

    rng = random.Random(seed)
    for attempt in range(max_attempts):
        q_part = Matrix(rational)
        for direction in kernel:
            q_part += Rational(rng.randint(-24, 24), rng.randint(1, 7)) * direction
        witness = ApartmentPoint(tuple(RScalar(q_part[i], irrational[i]) for i in range(n)))
        found = datum.hits(witness, level)
        if all(in_row_space(rows, psi.gradient.coeffs) for psi in found):
            return RFacet(datum, level, frozenset(S), found, witness, datum.apartment_dim - len(S))
        logger.debug(f"Witness {witness} meets extra hyperplanes; redrawing (attempt {attempt + 1}).")
    raise FacetError(f"No generic witness found after {max_attempts} attempts.")
