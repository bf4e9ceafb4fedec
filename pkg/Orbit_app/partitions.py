# partitions.py
import re
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from math import gcd

from sympy.utilities.iterables import partitions as sympy_partitions

from .exceptions import PartitionError


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing positive parts; the Jordan type of a nilpotent matrix."""

    parts: tuple

    def __post_init__(self):
        if not self.parts or any(int(j) < 1 for j in self.parts):
            raise PartitionError(f"Parts must be positive integers, got {self.parts}.")
        object.__setattr__(self, "parts", tuple(sorted((int(j) for j in self.parts), reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    @property
    def gcd(self) -> int:
        return reduce(gcd, self.parts)

    @property
    def multiplicities(self) -> dict:
        return dict(sorted(Counter(self.parts).items()))

    def is_symplectic(self) -> bool:
        return all(m % 2 == 0 for j, m in self.multiplicities.items() if j % 2)

    def dual(self) -> "Partition":
        return Partition(tuple(sum(1 for j in self.parts if j > i) for i in range(self.parts[0])))

    def partial_sums(self) -> list:
        sums, total = [], 0
        for j in self.parts:
            total += j
            sums.append(total)
        return sums

    def label(self) -> str:
        return "[" + ",".join(str(j) for j in self.parts) + "]"

    def __str__(self):
        return self.label()


def stats(lam: Partition) -> tuple:
    return lam.gcd, lam.multiplicities, lam.num_parts


def parse_partition(text: str) -> Partition:
    """Reads '[4,2]', '(2,2)', '4 2' or '2^2,1'."""
    body = text.strip().strip("[]()")
    if not body:
        raise PartitionError(f"Empty partition {text!r}.")
    parts = []
    for token in re.split(r"[,\s]+", body):
        match = re.fullmatch(r"(\d+)(?:\^(\d+))?", token)
        if not match:
            raise PartitionError(f"Malformed partition {text!r}.")
        parts += [int(match.group(1))] * int(match.group(2) or 1)
    return Partition(tuple(parts))


def enumerate_partitions(n: int) -> list:
    """All partitions of n, in decreasing lexicographic order."""
    if n < 1:
        raise PartitionError(f"Cannot partition {n}.")
    found = []
    for block in sympy_partitions(n):
        parts = []
        for j, m in block.items():
            parts += [j] * m
        found.append(Partition(tuple(parts)))
    return sorted(found, reverse=True)


def symplectic_partitions(N: int) -> list:
    if N % 2:
        raise PartitionError(f"Symplectic partitions need an even size, got {N}.")
    return [lam for lam in enumerate_partitions(N) if lam.is_symplectic()]


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order: every partial sum of lam is at least mu's."""
    if lam.size != mu.size:
        return False
    a, b = lam.partial_sums(), mu.partial_sums()
    length = max(len(a), len(b))
    a += [lam.size] * (length - len(a))
    b += [mu.size] * (length - len(b))
    return all(x >= y for x, y in zip(a, b))


# --- Orbit dimensions (closed forms) ---

def sl_orbit_dimension(lam: Partition) -> int:
    return lam.size ** 2 - sum(s * s for s in lam.dual().parts)


def sp_orbit_dimension(lam: Partition) -> int:
    n = lam.size // 2
    odd_parts = sum(1 for j in lam.parts if j % 2)
    return 2 * n * n + n - (sum(s * s for s in lam.dual().parts) + odd_parts) // 2
