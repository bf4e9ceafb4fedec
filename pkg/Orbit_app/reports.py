# reports.py
"""Orbit reports shared by the management commands and the API.

Builds the JSON document of an orbit enumeration, looks orbits up by id and
renders the markdown tables (Sp and SL orbit tables, form counts, anisotropic
kernels, Hilbert symbol).
"""
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone

from sympy import Integer, Matrix, Rational
from sympy.matrices import MatrixBase

from .building import RootDatum, RScalar, facet_from_equalities
from .debacker import orbit_facet, sl_equalities, sp_equalities
from .exceptions import NilpotentOrbitError
from .localfield import SQUARE_CLASS_LABELS, LocalField, to_field_element
from .partitions import enumerate_partitions, sl_orbit_dimension, sp_orbit_dimension, symplectic_partitions
from .quadform import anisotropic_kernel, anisotropic_representatives, enumerate_classes, invariants
from .sl_orbits import enumerate_sl_orbits
from .sp_orbits import enumerate_sp_orbits

logger = logging.getLogger(__name__)

GROUP_TITLES = {"sl": "SL", "sp": "Sp"}
NUMFORMS_MAX_DIM = 5


@dataclass(frozen=True)
class ReportConfig:
    p: int
    group: str
    n: int
    r_multiplier: Rational = Rational(1, 2)
    format: str = "json"
    seed: int = 0
    max_attempts: int = 64

    @property
    def field(self) -> LocalField:
        return LocalField.for_prime(self.p)

    @property
    def level(self) -> RScalar:
        return RScalar.sqrt2_multiple(self.r_multiplier)


def to_serializable(obj):
    """Converts sympy and library values to JSON friendly types."""
    if isinstance(obj, Integer):
        return int(obj)
    if isinstance(obj, Rational):
        return str(obj)
    if isinstance(obj, MatrixBase):
        return [[str(v) for v in obj.row(i)] for i in range(obj.rows)]
    if isinstance(obj, (set, frozenset)):
        return sorted(str(v) for v in obj)
    if isinstance(obj, datetime):
        return obj.astimezone(timezone.utc).isoformat()
    return str(obj)


def matrix_rows(M) -> list:
    return to_serializable(Matrix(M))


def enumerate_orbits(field: LocalField, group: str, n: int) -> list:
    if group == "sl":
        return enumerate_sl_orbits(field, n)
    if group == "sp":
        return enumerate_sp_orbits(field, n)
    raise NilpotentOrbitError(f"Unknown group {group!r}; expected 'sl' or 'sp'.")


def find_orbit(orbits: list, orbit_id: str):
    for o in orbits:
        if o.orbit_id == orbit_id:
            return o
    raise NilpotentOrbitError(f"No orbit with id {orbit_id!r}.")


def facet_payload(facet) -> dict:
    return {
        "equalities": [{"root": psi.gradient.label(), "offset": psi.offset} for psi in sorted(facet.defining)],
        "dim": facet.dim,
    }


def orbit_row(field: LocalField, d) -> dict:
    triple_ok = d.lift.is_valid() and d.is_member(field)
    if d.datum.group == "sp":
        triple_ok = triple_ok and d.lift.in_sp()
    return {
        "id": d.orbit.orbit_id,
        "partition": d.orbit.lam.label(),
        "class": d.orbit.class_data(),
        "facet": facet_payload(d.facet),
        "triple_ok": bool(triple_ok),
    }


def orbit_document(config: ReportConfig) -> dict:
    field = config.field.check_residual_characteristic(config.group, config.n)
    rows = [
        orbit_row(field, orbit_facet(field, o, level=config.level, seed=config.seed, max_attempts=config.max_attempts))
        for o in enumerate_orbits(field, config.group, config.n)
    ]
    logger.info(f"Reported {len(rows)} orbits of {config.group}({config.n}) over Q_{config.p}")
    return {
        "field": {"p": field.p, "epsilon": field.epsilon},
        "group": config.group,
        "n": config.n,
        "orbits": rows,
    }


def render_json(document) -> str:
    return json.dumps(document, indent=2, default=to_serializable)


# --- Markdown tables ---

def markdown_table(headers: list, rows: list) -> str:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join(" --- " for _ in headers) + "|"]
    lines += ["| " + " | ".join(str(v) for v in row) + " |" for row in rows]
    return "\n".join(lines)


def _dims_cell(values) -> str:
    return " or ".join(str(v) for v in sorted(set(values)))


def sp_table(field: LocalField, n: int, level) -> dict:
    datum = RootDatum("sp", n)
    by_partition = {lam: [] for lam in symplectic_partitions(2 * n)}
    for o in enumerate_sp_orbits(field, n):
        by_partition[o.lam].append(facet_from_equalities(datum, sp_equalities(o, field), level).dim)
    rows = [
        [lam.label(), len(dims), sp_orbit_dimension(lam), _dims_cell(dims)]
        for lam, dims in by_partition.items()
    ]
    return {
        "title": f"Rational nilpotent orbits of Sp_{2 * n}(Q_{field.p})",
        "headers": ["Partition", "#Rational Orbits", "dim(O)", "dim(F)"],
        "rows": rows,
    }


def sl_table(field: LocalField, n: int, level) -> dict:
    datum = RootDatum("sl", n)
    by_partition = {lam: [] for lam in enumerate_partitions(n)}
    for o in enumerate_sl_orbits(field, n):
        by_partition[o.lam].append(facet_from_equalities(datum, sl_equalities(o, field), level).dim)
    rows = [
        [lam.label(), len(dims), sl_orbit_dimension(lam), _dims_cell(dims)]
        for lam, dims in by_partition.items()
    ]
    return {
        "title": f"Rational nilpotent orbits of SL_{n}(Q_{field.p})",
        "headers": ["Partition", "#Rational Orbits", "dim(O)", "dim(F)"],
        "rows": rows,
    }


def numforms_table(field: LocalField, max_dim: int = NUMFORMS_MAX_DIM) -> dict:
    rows = []
    for dim in range(1, max_dim + 1):
        classes = enumerate_classes(field, dim)
        anisotropic = sum(1 for inv in classes if anisotropic_kernel(field, inv)[0] == 0)
        rows.append([dim, len(classes), anisotropic])
    return {
        "title": f"Classes of nondegenerate quadratic forms over Q_{field.p}",
        "headers": ["dim", "#classes", "#anisotropic"],
        "rows": rows,
    }


def anisotropic_table(field: LocalField) -> dict:
    rows = []
    for form in anisotropic_representatives(field):
        inv = invariants(field, form)
        rows.append([str(form), inv.dim, field.square_class_label(inv.det_class), f"{inv.hasse:+d}"])
    return {
        "title": f"Anisotropic forms over Q_{field.p}",
        "headers": ["Form", "dim", "Det", "Hasse"],
        "rows": rows,
    }


def hilbert_table(field: LocalField) -> dict:
    reps = field.square_class_representatives
    rows = [
        [label] + [f"{field.hilbert_symbol(a, b):+d}" for b in reps]
        for label, a in zip(SQUARE_CLASS_LABELS, reps)
    ]
    return {
        "title": f"Hilbert symbol over Q_{field.p} (eps = {field.epsilon})",
        "headers": ["(a,b)"] + list(SQUARE_CLASS_LABELS),
        "rows": rows,
    }


def render_tables(config: ReportConfig) -> tuple:
    """(markdown document, table data) for the configured group plus the form tables."""
    if config.group not in GROUP_TITLES:
        raise NilpotentOrbitError(f"Unknown group {config.group!r}; expected 'sl' or 'sp'.")
    field = config.field
    group_table = sp_table if config.group == "sp" else sl_table
    tables = {
        "orbits": group_table(field, config.n, config.level),
        "numforms": numforms_table(field),
        "anisotropic": anisotropic_table(field),
        "hilbert": hilbert_table(field),
    }
    sections = [f"## {t['title']}\n\n{markdown_table(t['headers'], t['rows'])}" for t in tables.values()]
    return "\n\n".join(sections) + "\n", tables


# --- Field element tokens ---

FIELD_TOKENS = {
    "eps": lambda f: Integer(f.epsilon),
    "ε": lambda f: Integer(f.epsilon),
    "pi": lambda f: Integer(f.p),
    "ϖ": lambda f: Integer(f.p),
    "eps*pi": lambda f: Integer(f.epsilon * f.p),
    "εϖ": lambda f: Integer(f.epsilon * f.p),
}


def parse_field_token(field: LocalField, token) -> Rational:
    """Reads eps, pi, eps*pi (or their Greek letters) and rationals such as '-3/25'."""
    text = str(token).strip()
    if text in FIELD_TOKENS:
        return FIELD_TOKENS[text](field)
    return to_field_element(text)
