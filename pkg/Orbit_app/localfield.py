# localfield.py
import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from math import gcd

from sympy import Integer, Rational
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.ntheory import discrete_log, isprime, multiplicity, primitive_root

from .exceptions import FieldArithmeticError

logger = logging.getLogger(__name__)

# --- Hilbert symbol tables ---
# Rows and columns in the order 1, eps, pi, eps*pi; keyed by whether -1 is a square.
HILBERT_TABLE = {
    True: (
        (1, 1, 1, 1),
        (1, 1, -1, -1),
        (1, -1, 1, -1),
        (1, -1, -1, 1),
    ),
    False: (
        (1, 1, 1, 1),
        (1, 1, -1, -1),
        (1, -1, -1, 1),
        (1, -1, 1, -1),
    ),
}

SQUARE_CLASS_LABELS = ("1", "eps", "pi", "eps*pi")

# Coxeter numbers of the two supported groups, as functions of n.
COXETER_NUMBER = {
    "sl": lambda n: n,
    "sp": lambda n: 2 * n,
}


def to_field_element(value) -> Rational:
    """Coerces ints, Fractions, sympy Rationals and 'a/b' strings to a Rational."""
    if isinstance(value, float):
        raise FieldArithmeticError(f"Refusing inexact float {value!r}; pass a fraction string instead.")
    try:
        result = Rational(value)
    except (TypeError, ValueError) as exc:
        raise FieldArithmeticError(f"Cannot read {value!r} as a rational number.") from exc
    if not result.is_Rational:
        raise FieldArithmeticError(f"Cannot read {value!r} as a rational number.")
    return result


@dataclass(frozen=True)
class LocalField:
    """The p-adic field Q_p for an odd prime p.

    ``epsilon`` is the canonical non-square unit: -1 when p = 3 mod 4 and the
    least positive quadratic nonresidue otherwise.
    """

    p: int
    epsilon: int
    coxeter_bound_checked_for: int | None = None

    @classmethod
    def for_prime(cls, p) -> "LocalField":
        try:
            p = int(p)
        except (TypeError, ValueError) as exc:
            raise FieldArithmeticError(f"Prime must be an integer, got {p!r}.") from exc
        if p == 2 or not isprime(p):
            raise FieldArithmeticError(f"p = {p} is not an odd prime.")
        if p % 4 == 3:
            epsilon = -1
        else:
            epsilon = next(a for a in range(2, p) if legendre_symbol(a, p) == -1)
        return cls(p=p, epsilon=epsilon)

    @property
    def uniformizer(self) -> int:
        return self.p

    @property
    def minus_one_is_square(self) -> bool:
        return self.p % 4 == 1

    def check_residual_characteristic(self, group: str, n: int) -> "LocalField":
        """Warns when p <= 3(h - 1) for the Coxeter number h of the group."""
        h = COXETER_NUMBER[group](n)
        if self.p <= 3 * (h - 1):
            logger.warning(
                f"p = {self.p} does not exceed 3(h-1) = {3 * (h - 1)} for {group}({n}); "
                f"facet maximality is not guaranteed at this residual characteristic."
            )
        return replace(self, coxeter_bound_checked_for=n)

    # --- Valuations and unit parts ---

    def valuation(self, a):
        a = to_field_element(a)
        if a == 0:
            return math.inf
        return int(multiplicity(self.p, abs(a.p))) - int(multiplicity(self.p, a.q))

    def unit_part(self, a) -> Rational:
        a = to_field_element(a)
        if a == 0:
            raise FieldArithmeticError("Zero has no unit part.")
        return a / Rational(self.p) ** self.valuation(a)

    def residue(self, a, modulus: int) -> int:
        """The unit part of ``a`` reduced modulo ``modulus`` (a power of p)."""
        u = self.unit_part(a)
        return int(u.p) * pow(int(u.q), -1, modulus) % modulus

    def legendre(self, a) -> int:
        return int(legendre_symbol(self.residue(a, self.p), self.p))

    # --- Square classes and the Hilbert symbol ---

    def _square_index(self, a) -> int:
        val_bit = self.valuation(a) % 2
        unit_bit = 0 if self.legendre(a) == 1 else 1
        return 2 * val_bit + unit_bit

    @cached_property
    def square_class_representatives(self) -> tuple:
        eps, pi = Integer(self.epsilon), Integer(self.p)
        return (Integer(1), eps, pi, eps * pi)

    def square_class(self, a) -> Integer:
        """Canonical representative among 1, eps, pi, eps*pi."""
        if to_field_element(a) == 0:
            raise FieldArithmeticError("Zero has no square class.")
        return self.square_class_representatives[self._square_index(a)]

    def square_class_label(self, a) -> str:
        if to_field_element(a) == 0:
            raise FieldArithmeticError("Zero has no square class.")
        return SQUARE_CLASS_LABELS[self._square_index(a)]

    def is_square(self, a) -> bool:
        return self.square_class(a) == 1

    def hilbert_symbol(self, a, b) -> int:
        """(a, b) read off the Hilbert table for this residue branch."""
        if to_field_element(a) == 0 or to_field_element(b) == 0:
            raise FieldArithmeticError("The Hilbert symbol is undefined at zero.")
        table = HILBERT_TABLE[self.minus_one_is_square]
        return table[self._square_index(a)][self._square_index(b)]

    def hilbert_symbol_formula(self, a, b) -> int:
        """Closed formula for odd p; kept as an independent check on the table."""
        alpha, beta = self.valuation(a), self.valuation(b)
        sign = (-1) ** ((alpha * beta * (self.p - 1) // 2) % 2)
        return sign * self.legendre(a) ** (beta % 2) * self.legendre(b) ** (alpha % 2)

    # --- m-th power classes ---

    def _power_modulus(self, m: int) -> int:
        return self.p ** (2 * int(multiplicity(self.p, m)) + 1)

    @cached_property
    def _generator(self) -> int:
        # A primitive root mod p that stays primitive mod p^2 generates every p^k.
        g = primitive_root(self.p)
        if pow(g, self.p - 1, self.p * self.p) == 1:
            g += self.p
        return g

    def power_class_count(self, m: int) -> tuple:
        """(|k^x/(k^x)^m|, |R^x/(R^x)^m|)."""
        if m < 2:
            raise FieldArithmeticError(f"Power class counts need m >= 2, got {m}.")
        unit_classes = gcd(m, self.p - 1) * self.p ** int(multiplicity(self.p, m))
        return m * unit_classes, unit_classes

    def unit_class_index(self, a, m: int) -> int:
        if m == 1:
            return 0
        modulus = self._power_modulus(m)
        order = (self.p - 1) * modulus // self.p
        classes = gcd(m, order)
        log = discrete_log(modulus, self.residue(a, modulus), self._generator % modulus)
        return int(log) % classes

    def power_class(self, a, m: int) -> tuple:
        """Canonical pair (val mod m, unit-class index) of a modulo (k^x)^m."""
        if to_field_element(a) == 0:
            raise FieldArithmeticError("Zero has no power class.")
        if m == 1:
            return 0, 0
        return self.valuation(a) % m, self.unit_class_index(a, m)

    def unit_class_representatives(self, m: int) -> tuple:
        """Least positive integer in each unit class, indexed by class index."""
        if m == 1:
            return (Integer(1),)
        _, count = self.power_class_count(m)
        found = {}
        u = 1
        while len(found) < count:
            if u % self.p:
                found.setdefault(self.unit_class_index(u, m), Integer(u))
            u += 1
        return tuple(found[i] for i in range(count))

    def power_class_representatives(self, m: int) -> list:
        """Canonical d = pi^a * u for every class of k^x/(k^x)^m, as (class, d)."""
        units = self.unit_class_representatives(m)
        if m == 1:
            return [((0, 0), Integer(1))]
        return [
            ((a, i), Integer(self.p) ** a * u)
            for a in range(m)
            for i, u in enumerate(units)
        ]
