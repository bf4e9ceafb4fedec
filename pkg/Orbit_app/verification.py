# verification.py
"""Property suites behind `manage.py nilpotent verify`.

Each suite returns a list of failure messages; an empty list is a pass.
"""
import logging
import random
from itertools import combinations, product

from sympy import Matrix, Rational, zeros

from .building import RootDatum, RScalar
from .debacker import (
    apartment_slice,
    blocks_gcd,
    coset_min_probe,
    exampledist_triples,
    orbit_facet,
    shift_check,
    sl_associate_normal_form,
    sl_facet_dimension,
    sp_facet_dimension,
)
from .exceptions import LieAlgebraError
from .lie_core import standard_block_matrices
from .localfield import COXETER_NUMBER, LocalField
from .partitions import enumerate_partitions
from .quadform import anisotropic_kernel, enumerate_classes
from .reports import enumerate_orbits
from .sl_orbits import SLOrbit, classify_sl, random_sl_conjugator, sl_representative
from .sp_orbits import classify_sp, random_sp_conjugator, sp_representative

logger = logging.getLogger(__name__)

NUMFORMS_COUNTS = (4, 7, 8, 8, 8)
NUMFORMS_ANISOTROPIC = (4, 6, 4, 1, 0)
POWER_CLASS_EXPONENTS = (2, 3, 4, 6)


def _random_rational(rng: random.Random, p: int) -> Rational:
    value = 0
    while value == 0:
        value = Rational(rng.randint(-50, 50), rng.randint(1, 50)) * Rational(p) ** rng.randint(-2, 2)
    return value


def check_hilbert(field: LocalField, rng: random.Random, samples: int = 200) -> list:
    failures = []
    reps = field.square_class_representatives
    for a, b in product(reps, repeat=2):
        if field.hilbert_symbol(a, b) != field.hilbert_symbol_formula(a, b):
            failures.append(f"table and formula disagree at ({a}, {b})")
    for _ in range(samples):
        a, b, c = (_random_rational(rng, field.p) for _ in range(3))
        if field.hilbert_symbol(a, b) != field.hilbert_symbol(b, a):
            failures.append(f"asymmetric at ({a}, {b})")
        if field.hilbert_symbol(a, -a) != 1:
            failures.append(f"(a, -a) != 1 at a = {a}")
        if field.hilbert_symbol(a, b * c) != field.hilbert_symbol(a, b) * field.hilbert_symbol(a, c):
            failures.append(f"not multiplicative at ({a}, {b}, {c})")
    return failures


def check_forms(field: LocalField) -> list:
    failures = []
    for dim, (total, anisotropic) in enumerate(zip(NUMFORMS_COUNTS, NUMFORMS_ANISOTROPIC), start=1):
        classes = enumerate_classes(field, dim)
        found = sum(1 for inv in classes if anisotropic_kernel(field, inv)[0] == 0)
        if (len(classes), found) != (total, anisotropic):
            failures.append(f"dim {dim}: {len(classes)} classes / {found} anisotropic")
    return failures


def brute_force_unit_classes(p: int, m: int) -> int:
    e = 0
    while m % p ** (e + 1) == 0:
        e += 1
    modulus = p ** (2 * e + 1)
    units = [u for u in range(1, modulus) if u % p]
    powers = {pow(u, m, modulus) for u in units}
    return len(units) // len(powers)


def check_counting(field: LocalField) -> list:
    failures = []
    for m in POWER_CLASS_EXPONENTS:
        total, units = field.power_class_count(m)
        expected = brute_force_unit_classes(field.p, m)
        if units != expected or total != m * expected:
            failures.append(f"m = {m}: counted {units} unit classes, brute force gives {expected}")
    return failures


def check_triples(field: LocalField, group: str, n: int, seed: int = 0) -> list:
    failures = []
    sizes = range(1, (n if group == "sl" else 2 * n) + 1)
    for size in sizes:
        for lam in enumerate_partitions(size):
            J, H, Y = standard_block_matrices(lam)
            if J * Y - Y * J != H or H * J - J * H != 2 * J:
                failures.append(f"standard matrices of {lam} break the bracket relations")
    for o in enumerate_orbits(field, group, n):
        d = orbit_facet(field, o, seed=seed)
        if not d.lift.is_valid() or (group == "sp" and not d.lift.in_sp()):
            failures.append(f"{o.orbit_id}: invalid Lie triple")
    return failures


def check_round_trips(field: LocalField, group: str, n: int, rng: random.Random, conjugations: int = 20) -> list:
    failures = []
    for o in enumerate_orbits(field, group, n):
        if group == "sl":
            X, classify = sl_representative(o), classify_sl
            conjugator = lambda: random_sl_conjugator(n, rng)
        else:
            X, classify = sp_representative(field, o), classify_sp
            conjugator = lambda: random_sp_conjugator(n, rng)
        if classify(field, X) != o:
            failures.append(f"{o.orbit_id}: representative classifies elsewhere")
            continue
        for _ in range(conjugations):
            g, g_inv = conjugator()
            if classify(field, g * X * g_inv) != o:
                failures.append(f"{o.orbit_id}: conjugate classifies elsewhere")
                break
    return failures


def _closed_form_dim(field: LocalField, o) -> int:
    if isinstance(o, SLOrbit):
        return sl_facet_dimension(o)
    return sp_facet_dimension(field, o)


def check_facets(field: LocalField, group: str, n: int, level, seed: int = 0) -> list:
    """Membership at the witness, closed-form dimensions and maximality inside the slice."""
    failures = []
    h = COXETER_NUMBER[group](n)
    check_maximal = field.p > 3 * (h - 1)
    if not check_maximal:
        logger.info(f"Skipping facet maximality and injectivity: p = {field.p} <= 3(h-1) = {3 * (h - 1)}")
    signatures = {}
    for o in enumerate_orbits(field, group, n):
        d = orbit_facet(field, o, level=level, seed=seed)
        membership = d.membership(field)
        if not all(membership.values()):
            failures.append(f"{o.orbit_id}: membership {membership}")
        if d.facet.dim != _closed_form_dim(field, o):
            failures.append(f"{o.orbit_id}: facet dim {d.facet.dim} != {_closed_form_dim(field, o)}")
        if not check_maximal:
            continue
        region = apartment_slice(field, d.datum, d.lift, level)
        if not d.facet.defining <= region.forced_equalities() or region.dim != d.facet.dim:
            failures.append(f"{o.orbit_id}: facet is not maximal in its apartment slice")
        key = (o.lam, d.signature(field))
        if key in signatures:
            failures.append(f"{o.orbit_id} and {signatures[key]} share facet data")
        signatures[key] = o.orbit_id
    return failures


def check_shift(field: LocalField, group: str, n: int, level, seed: int = 0) -> list:
    failures = []
    shifts = (RScalar(), level, level + 1, -level)
    for o in enumerate_orbits(field, group, n):
        d = orbit_facet(field, o, level=level, seed=seed)
        for s in shifts:
            if not shift_check(field, d, s):
                failures.append(f"{o.orbit_id}: shift identity fails at s = {s}")
    return failures


def diagonal_conjugation_class(S, offsets: dict, n: int, p: int) -> int:
    """val(d) mod gcd(lam) for X = sum_{i in S} p^{k_i} E_{i,i+1}.

    A diagonal g = diag(p^{c_i}) with g X g^-1 = sum_{i in S} E_{i,i+1} puts X in
    the orbit of d = det g, up to a unit.
    """
    S = set(S)
    c = [0] * (n + 1)
    for i in range(1, n):
        c[i + 1] = c[i] + offsets.get(i, 0) if i in S else 0
    X, target = zeros(n), zeros(n)
    for i in S:
        X[i - 1, i] = Rational(p) ** offsets.get(i, 0)
        target[i - 1, i] = 1
    g = Matrix.diag(*[Rational(p) ** c[i] for i in range(1, n + 1)])
    if g * X * g.inv() != target:
        raise LieAlgebraError(f"Diagonal conjugation failed for S = {sorted(S)}")
    return sum(c[1:]) % blocks_gcd(S, n)


def check_associativity(n: int, p: int, values=(-1, 0, 1, 2)) -> list:
    failures = []
    for size in range(0, n):
        for S in combinations(range(1, n), size):
            for ks in product(values, repeat=len(S)):
                offsets = dict(zip(S, ks))
                expected = diagonal_conjugation_class(S, offsets, n, p)
                normal = sl_associate_normal_form(S, offsets, n)
                if normal.get(n - 1, 0) != expected:
                    failures.append(f"S = {S}, k = {ks}: normal form {normal}, oracle {expected}")
    return failures


def check_probe(field: LocalField, group: str, n: int, level, seed: int = 0, samples: int = 100, depth: int = 3) -> list:
    failures = []
    for o in enumerate_orbits(field, group, n):
        result = coset_min_probe(field, orbit_facet(field, o, level=level, seed=seed), samples, seed, depth)
        failures += [f"{o.orbit_id}: sampled type {lam} does not dominate {ref}" for lam, ref in result.failures]
    return failures


def check_exampledist(field: LocalField, level) -> list:
    failures = []
    datum = RootDatum("sp", 2)
    triples = exampledist_triples(field)
    dims = {name: apartment_slice(field, datum, t, level).dim for name, t in triples.items()}
    if dims != {"X1": 1, "X0": 0}:
        failures.append(f"slice dims {dims}")
    orbits = {classify_sp(field, t.X) for t in triples.values()}
    if len(orbits) != 1:
        failures.append(f"X1 and X0 classify differently: {orbits}")
    return failures


def run_verification(field: LocalField, group: str, n: int, level, seed: int = 0, probe_samples: int = 100, probe_depth: int = 3) -> dict:
    """Runs every suite for the group up to size n; returns {suite: failures}."""
    rng = random.Random(seed)
    suites = {
        "hilbert": lambda: check_hilbert(field, rng),
        "forms": lambda: check_forms(field),
        "counting": lambda: check_counting(field),
        "triples": lambda: check_triples(field, group, n, seed),
        "round_trips": lambda: check_round_trips(field, group, n, rng),
        "facets": lambda: check_facets(field, group, n, level, seed),
        "shift": lambda: check_shift(field, group, n, level, seed),
        "probe": lambda: check_probe(field, group, n, level, seed, probe_samples, probe_depth),
    }
    if group == "sl":
        suites["associativity"] = lambda: check_associativity(n, field.p)
    else:
        suites["exampledist"] = lambda: check_exampledist(field, level)
    results = {}
    for name, suite in suites.items():
        failures = suite()
        for failure in failures:
            logger.warning(f"[{name}] {failure}")
        logger.info(f"Suite {name}: {'passed' if not failures else f'{len(failures)} failures'}")
        results[name] = failures
    return results
