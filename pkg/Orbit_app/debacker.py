# debacker.py
"""Orbit-to-facet data for SL_n and Sp_2n.

For each rational nilpotent orbit this module emits the r-facet of the
correspondence theorems together with the orbit's Lie triple, and provides the
checks run against it: Moy-Prasad membership, the apartment slice
{x : X in g_{x,r}, Y in g_{x,-r}}, the shift identity B_s = B_0 + (s/2) lambda,
the SL associativity normal form and a sampling probe of coset minimality.
"""
import logging
import random
from dataclasses import dataclass, field as dataclass_field, replace
from functools import cached_property
from math import gcd

from sympy import Integer, Matrix, Rational

from .building import (
    AffineRoot,
    RFacet,
    Root,
    RootDatum,
    RScalar,
    facet_from_equalities,
    moy_prasad_contains,
)
from .lie_core import LieTriple, is_nilpotent, jordan_partition
from .linalg import rank
from .localfield import LocalField
from .partitions import dominates
from .quadform import witt_split
from .sl_orbits import SLOrbit, sl_lie_triple
from .sp_orbits import SpOrbit, block_offsets, sp_lie_triple

logger = logging.getLogger(__name__)

DEFAULT_LEVEL = RScalar.sqrt2_multiple(Rational(1, 2))


def _simple_root(n: int, i: int) -> Root:
    """e_i - e_{i+1}, 1-based."""
    v = [0] * n
    v[i - 1], v[i] = 1, -1
    return Root(tuple(v))


def _sum_root(n: int, i: int, j: int) -> Root:
    """e_i + e_j, 1-based; 2e_i when i == j."""
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] += 1
    return Root(tuple(v))


@dataclass(frozen=True)
class OrbitFacetDatum:
    """An orbit with its facet, its Lie triple and the cocharacter adapted to it."""

    orbit: object
    facet: RFacet
    lift: LieTriple
    adapted: tuple

    @property
    def datum(self) -> RootDatum:
        return self.facet.datum

    @property
    def lam(self):
        return self.orbit.lam

    def membership(self, field: LocalField) -> dict:
        x, r = self.facet.witness, self.facet.level
        return {
            "X": moy_prasad_contains(field, self.datum, x, r, self.lift.X),
            "H": moy_prasad_contains(field, self.datum, x, 0, self.lift.H),
            "Y": moy_prasad_contains(field, self.datum, x, -r, self.lift.Y),
        }

    def is_member(self, field: LocalField) -> bool:
        return all(self.membership(field).values())

    def signature(self, field: LocalField) -> tuple:
        """Defining affine roots plus the residues of X's root components.

        Two orbits of the same Jordan type get the same signature only when their
        pairs (facet, X mod g_{x,r+}) agree.
        """
        _, components = self.datum.decompose(self.lift.X)
        residues = tuple(
            sorted(
                (root, field.valuation(value), field.residue(value, field.p))
                for root, value in components.items()
            )
        )
        return tuple(sorted(self.facet.defining)), residues


def _adapted_cocharacter(datum: RootDatum, H) -> tuple:
    return tuple(int(H[i, i]) for i in range(datum.n))


def sl_equalities(o: SLOrbit, field: LocalField) -> set:
    """{alpha_i + val(d_{i+1}) : i in I_lam}; only i = n - 1 can carry d."""
    n = o.n
    ends = set(o.lam.partial_sums())
    d_val = field.valuation(o.d)
    return {
        AffineRoot(_simple_root(n, i), d_val if i == n - 1 else 0)
        for i in range(1, n)
        if i not in ends
    }


def sl_facet(field: LocalField, o: SLOrbit, level=DEFAULT_LEVEL, seed: int = 0, max_attempts: int = 64) -> OrbitFacetDatum:
    datum = RootDatum("sl", o.n)
    facet = facet_from_equalities(datum, sl_equalities(o, field), level, seed=seed, max_attempts=max_attempts)
    lift = sl_lie_triple(o)
    return OrbitFacetDatum(o, facet, lift, _adapted_cocharacter(datum, lift.H))


def sp_equalities(o: SpOrbit, field: LocalField) -> set:
    """The union over parts j of S_j^1 and, for even j, S_j^2 with offsets val(a_i)."""
    n = o.n
    forms = o.forms_dict
    found = set()
    for j, s in block_offsets(o.lam).items():
        m_j = o.lam.multiplicities[j]
        if j % 2:
            for k in range(1, j * m_j // 2):
                if k % j:
                    found.add(AffineRoot(_simple_root(n, s + k)))
            continue
        M = (j // 2 - 1) * m_j
        for k in range(1, M + 1):
            v = [0] * n
            v[s + k - 1], v[s + k + m_j - 1] = 1, -1
            found.add(AffineRoot(Root(tuple(v))))
        m, kernel = witt_split(field, forms[j])
        for i in range(1, m + 1):
            found.add(AffineRoot(_sum_root(n, s + M + 2 * i - 1, s + M + 2 * i)))
        for i, a in enumerate(kernel.diag, start=2 * m + 1):
            found.add(AffineRoot(_sum_root(n, s + M + i, s + M + i), field.valuation(a)))
    return found


def sp_facet(field: LocalField, o: SpOrbit, level=DEFAULT_LEVEL, seed: int = 0, max_attempts: int = 64) -> OrbitFacetDatum:
    datum = RootDatum("sp", o.n)
    facet = facet_from_equalities(datum, sp_equalities(o, field), level, seed=seed, max_attempts=max_attempts)
    lift = sp_lie_triple(field, o)
    return OrbitFacetDatum(o, facet, lift, _adapted_cocharacter(datum, lift.H))


def orbit_facet(field: LocalField, o, **kwargs) -> OrbitFacetDatum:
    if isinstance(o, SLOrbit):
        return sl_facet(field, o, **kwargs)
    return sp_facet(field, o, **kwargs)


# --- Closed-form facet dimensions ---

def sl_facet_dimension(o: SLOrbit) -> int:
    return o.lam.num_parts - 1


def sp_facet_dimension(field: LocalField, o: SpOrbit) -> int:
    anisotropic = sum(witt_split(field, form)[1].dim for _, form in o.forms)
    return (o.lam.num_parts - anisotropic) // 2


# --- Apartment slices ---

def _keep_tightest(kept: dict, a: tuple, b: RScalar, strict: bool):
    pivot = next((abs(v) for v in a if v != 0), None)
    if pivot is not None and pivot != 1:
        a = tuple(v / pivot for v in a)
        b = b * (1 / pivot)
    current = kept.get(a)
    if current is None or b < current[0] or (b == current[0] and strict):
        kept[a] = (b, strict)


def _eliminate(rows: list, k: int) -> list:
    """Projects a.x <= b (or < b) along coordinate k."""
    kept, above, below = {}, [], []
    for a, b, strict in rows:
        if a[k] == 0:
            _keep_tightest(kept, a, b, strict)
            continue
        scale = 1 / abs(a[k])
        (above if a[k] > 0 else below).append((tuple(v * scale for v in a), b * scale, strict))
    for a, b, strict in above:
        for a2, b2, strict2 in below:
            _keep_tightest(kept, tuple(v + w for v, w in zip(a, a2)), b + b2, strict or strict2)
    return [(a, b, strict) for a, (b, strict) in kept.items()]


def fourier_motzkin_feasible(equalities, inequalities) -> bool:
    """Whether a real x satisfies every a.x = b and every a.x <= b (a.x < b when strict).

    Rows have rational coefficients and RScalar right-hand sides; equalities are
    substituted away first, then the remaining coordinates are eliminated.
    """
    equalities = list(equalities)
    rows = list(inequalities)
    while equalities:
        a, b = equalities.pop()
        k = next((i for i, v in enumerate(a) if v != 0), None)
        if k is None:
            if b != 0:
                return False
            continue

        def substitute(row, rhs, a=a, b=b, k=k):
            factor = row[k] / a[k]
            if factor == 0:
                return row, rhs
            return tuple(v - factor * w for v, w in zip(row, a)), rhs - b * factor

        equalities = [substitute(row, rhs) for row, rhs in equalities]
        rows = [(*substitute(row, rhs), strict) for row, rhs, strict in rows]
    width = len(rows[0][0]) if rows else 0
    for k in range(width):
        rows = _eliminate(rows, k)
    # only 0 <= b rows remain
    return all(b.sign() > 0 or (b.sign() == 0 and not strict) for _, b, strict in rows)


@dataclass(frozen=True)
class SliceConstraint:
    """lower <= gradient(x) <= upper; None stands for an infinite bound."""

    gradient: Root
    lower: RScalar | None = None
    upper: RScalar | None = None

    @property
    def forced(self) -> bool:
        return self.lower is not None and self.lower == self.upper

    def feasible(self) -> bool:
        return self.lower is None or self.upper is None or self.lower <= self.upper

    def shifted(self, amount) -> "SliceConstraint":
        return SliceConstraint(
            self.gradient,
            None if self.lower is None else self.lower + amount,
            None if self.upper is None else self.upper + amount,
        )

    def __str__(self):
        low = "-inf" if self.lower is None else str(self.lower)
        high = "inf" if self.upper is None else str(self.upper)
        return f"{low} <= {self.gradient} <= {high}"


@dataclass(frozen=True)
class ApartmentSlice:
    datum: RootDatum
    level: RScalar
    constraints: tuple = ()
    torus_ok: bool = True

    def _system(self, strict=None) -> tuple:
        """Equalities (a, b) and inequalities (a, b, strict) meaning a.x <= b.

        ``strict`` names one (index, side) bound to tighten to a strict inequality.
        """
        equalities, inequalities = [], []
        if self.datum.group == "sl":
            equalities.append((tuple(Rational(1) for _ in range(self.datum.n)), RScalar()))
        for i, c in enumerate(self.constraints):
            row = tuple(Rational(a) for a in c.gradient.coeffs)
            if c.forced:
                equalities.append((row, c.lower))
                continue
            if c.lower is not None:
                inequalities.append((tuple(-a for a in row), -c.lower, strict == (i, "lower")))
            if c.upper is not None:
                inequalities.append((row, c.upper, strict == (i, "upper")))
        return equalities, inequalities

    @cached_property
    def feasible(self) -> bool:
        if not self.torus_ok or not all(c.feasible() for c in self.constraints):
            return False
        return fourier_motzkin_feasible(*self._system())

    @cached_property
    def forced(self) -> tuple:
        """Constraints holding with equality on the whole slice, paired or implied."""
        pinned = []
        for i, c in enumerate(self.constraints):
            if c.forced:
                pinned.append(c)
                continue
            if not self.feasible:
                continue
            for side, value in (("lower", c.lower), ("upper", c.upper)):
                if value is not None and not fourier_motzkin_feasible(*self._system((i, side))):
                    pinned.append(SliceConstraint(c.gradient, value, value))
                    break
        return tuple(pinned)

    @property
    def dim(self) -> int | None:
        """None for an empty slice."""
        if not self.feasible:
            return None
        gradients = [list(c.gradient.coeffs) for c in self.forced]
        return self.datum.apartment_dim - (rank(Matrix(gradients)) if gradients else 0)

    def forced_equalities(self) -> frozenset:
        """Forced constraints that are hyperplanes psi = level for an affine root psi."""
        found = set()
        for c in self.forced:
            gap = self.level - c.lower
            if gap.is_integer():
                found.add(AffineRoot(c.gradient, int(gap.q)))
        return frozenset(found)

    def translate(self, adapted, t, level=None) -> "ApartmentSlice":
        """The slice moved by t * adapted."""
        t = RScalar.coerce(t)
        moved = tuple(c.shifted(t * c.gradient.pair(adapted)) for c in self.constraints)
        return replace(self, constraints=moved, level=self.level if level is None else RScalar.coerce(level))

    def same_region(self, other: "ApartmentSlice") -> bool:
        return self.constraints == other.constraints and self.torus_ok == other.torus_ok


def _tighten(bounds: dict, gradient: Root, lower=None, upper=None):
    current_lower, current_upper = bounds.get(gradient, (None, None))
    if lower is not None and (current_lower is None or lower > current_lower):
        current_lower = lower
    if upper is not None and (current_upper is None or upper < current_upper):
        current_upper = upper
    bounds[gradient] = (current_lower, current_upper)


def apartment_slice(field: LocalField, datum: RootDatum, triple: LieTriple, level=DEFAULT_LEVEL) -> ApartmentSlice:
    """Points x of the apartment with X in g_{x,level} and Y in g_{x,-level}."""
    level = RScalar.coerce(level)
    bounds, torus_ok = {}, True
    for M, threshold in ((triple.X, level), (triple.Y, -level)):
        torus, components = datum.decompose(M)
        for t in torus:
            if t != 0 and RScalar.coerce(field.valuation(t)) < threshold:
                torus_ok = False
        for root, value in components.items():
            # root(x) >= threshold - val
            bound = threshold - field.valuation(value)
            if root.is_positive():
                _tighten(bounds, root, lower=bound)
            else:
                _tighten(bounds, -root, upper=-bound)
    constraints = tuple(SliceConstraint(g, lo, hi) for g, (lo, hi) in sorted(bounds.items()))
    return ApartmentSlice(datum, level, constraints, torus_ok)


def shift_check(field: LocalField, d: OrbitFacetDatum, s) -> bool:
    s = RScalar.coerce(s)
    at_s = apartment_slice(field, d.datum, d.lift, s)
    moved = apartment_slice(field, d.datum, d.lift, 0).translate(d.adapted, s * Rational(1, 2), level=s)
    return at_s.same_region(moved)


# --- SL associativity normal form ---

def positional_blocks(S, n: int) -> list:
    """Blocks (start, size) of the Jordan type whose I_lam is S, in position order."""
    blocks = [[1, 1]]
    for i in range(1, n):
        if i in S:
            blocks[-1][1] += 1
        else:
            blocks.append([i + 1, 1])
    return [tuple(block) for block in blocks]


def blocks_gcd(S, n: int) -> int:
    g = 0
    for _, size in positional_blocks(S, n):
        g = gcd(g, size)
    return g


def sl_associate_normal_form(S, offsets: dict, n: int, anchor: str = "start") -> dict:
    """Offsets of an r-associate facet normalized to zero except at n - 1.

    K = -sum_l sum_{j < lam_l} j k_{x_l + j - 1}, reduced modulo gcd(lam). With
    anchor 'start' x_l is the first index of block l; 'end' reads x_l as the
    partial sum lam_1 + ... + lam_l, which does not match diagonal conjugation.
    """
    S = set(S)
    normal = {i: 0 for i in S}
    if n - 1 not in S:
        return normal
    K = 0
    for start, size in positional_blocks(S, n):
        x = start if anchor == "start" else start + size - 1
        K -= sum(j * offsets.get(x + j - 1, 0) for j in range(1, size))
    normal[n - 1] = K % blocks_gcd(S, n)
    return normal


# --- Coset minimality probe ---

@dataclass
class ProbeResult:
    sampled: int = 0
    nilpotent: int = 0
    skipped: int = 0
    failures: list = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _strict_valuation(level: RScalar, value: RScalar) -> int:
    """Least integer v with value + v > level."""
    return (level - value).floor() + 1


def _sample_element(field: LocalField, d: OrbitFacetDatum, rng: random.Random, positive_only: bool, depth: int) -> Matrix:
    datum, x, r = d.datum, d.facet.witness, d.facet.level
    bound = field.p ** depth

    def coefficient(v: int):
        return Rational(field.p) ** v * rng.randint(-bound, bound)

    components = {}
    for root in datum.roots:
        if positive_only and root.pair(d.adapted) <= 0:
            continue
        value = coefficient(_strict_valuation(r, root.evaluate(x)))
        if value != 0:
            components[root] = value
    torus = [Integer(0)] * datum.n
    if not positive_only:
        v = _strict_valuation(r, RScalar())
        torus = [coefficient(v) for _ in range(datum.n)]
        if datum.group == "sl":
            torus[-1] = -sum(torus[:-1])
    return datum.assemble(torus, components)


def coset_min_probe(field: LocalField, d: OrbitFacetDatum, samples: int = 100, seed: int = 0, depth: int = 3) -> ProbeResult:
    """Samples Z = X + P with P in g_{x,r+} and checks every nilpotent Z dominates lam.

    Half of the samples use only roots on which the adapted cocharacter is
    positive (always nilpotent); the rest use every root and the torus.
    """
    rng = random.Random(seed)
    X = Matrix(d.lift.X)
    result = ProbeResult()
    if jordan_partition(X) != d.lam:
        result.failures.append(("representative", d.lam))
    for k in range(samples):
        Z = X + _sample_element(field, d, rng, positive_only=(k % 2 == 0), depth=depth)
        result.sampled += 1
        if not is_nilpotent(Z):
            result.skipped += 1
            continue
        result.nilpotent += 1
        lam = jordan_partition(Z)
        if not dominates(lam, d.lam):
            result.failures.append((lam, d.lam))
    logger.info(
        f"Coset probe {d.orbit.orbit_id}: sampled {result.sampled}, "
        f"nilpotent {result.nilpotent}, skipped {result.skipped}, failures {len(result.failures)}"
    )
    return result


# --- The Sp_4 distinguishedness counterexample ---

EXAMPLEDIST_T = -4


def exampledist_triples(field: LocalField) -> dict:
    """Two triples of the orbit ([2,2], hyperbolic) with different apartment slices.

    X1 = [[0, q0], [0, 0]] meets the apartment in one hyperplane, while
    X0 = [[0, diag(1, t)], [0, 0]] with t = -4 meets it in a point.
    """
    q0 = Matrix([[0, 1], [1, 0]])
    t = Integer(EXAMPLEDIST_T)
    zero = Matrix.zeros(2)

    def triple(B, C):
        X = Matrix.vstack(Matrix.hstack(zero, B), Matrix.hstack(zero, zero))
        Y = Matrix.vstack(Matrix.hstack(zero, zero), Matrix.hstack(C, zero))
        return LieTriple.of(Y, X * Y - Y * X, X)

    return {
        "X1": triple(q0, q0),
        "X0": triple(Matrix.diag(1, t), Matrix.diag(1, 1 / t)),
    }
