import json
from datetime import datetime, timezone

from django.test import SimpleTestCase
from sympy import Integer, Matrix, Rational

from Orbit_app.debacker import DEFAULT_LEVEL
from Orbit_app.exceptions import NilpotentOrbitError
from Orbit_app.localfield import LocalField
from Orbit_app.reports import (
    ReportConfig,
    enumerate_orbits,
    find_orbit,
    hilbert_table,
    markdown_table,
    numforms_table,
    orbit_document,
    parse_field_token,
    render_json,
    render_tables,
    sl_table,
    sp_table,
    to_serializable,
)
from Orbit_app.tests.helpers import markdown_to_rows


class TableTests(SimpleTestCase):

    def setUp(self):
        self.field = LocalField.for_prime(5)

    def test_sp6_table(self):
        table = sp_table(self.field, 3, DEFAULT_LEVEL)
        self.assertEqual(table["title"], "Rational nilpotent orbits of Sp_6(Q_5)")
        self.assertEqual([row[1] for row in table["rows"]], [4, 16, 4, 1, 8, 7, 4, 1])
        self.assertEqual([row[2] for row in table["rows"]], [18, 16, 14, 14, 12, 10, 6, 0])
        self.assertEqual(
            [row[3] for row in table["rows"]],
            ["0", "0", "1", "1", "0 or 1", "1 or 2", "2", "3"],
        )

    def test_sl3_table(self):
        table = sl_table(self.field, 3, DEFAULT_LEVEL)
        self.assertEqual(
            table["rows"],
            [["[3]", 3, 6, "0"], ["[2,1]", 1, 4, "1"], ["[1,1,1]", 1, 0, "2"]],
        )

    def test_numforms_table(self):
        self.assertEqual(
            numforms_table(self.field)["rows"],
            [[1, 4, 4], [2, 7, 6], [3, 8, 4], [4, 8, 1], [5, 8, 0]],
        )
        self.assertEqual(numforms_table(LocalField.for_prime(7))["rows"][1], [2, 7, 6])
        self.assertEqual(numforms_table(self.field, max_dim=8)["rows"][5:], [[6, 8, 0], [7, 8, 0], [8, 8, 0]])

    def test_hilbert_table_when_minus_one_is_a_square(self):
        table = hilbert_table(self.field)
        self.assertEqual(table["headers"], ["(a,b)", "1", "eps", "pi", "eps*pi"])
        self.assertEqual(
            [row[1:] for row in table["rows"]],
            [
                ["+1", "+1", "+1", "+1"],
                ["+1", "+1", "-1", "-1"],
                ["+1", "-1", "+1", "-1"],
                ["+1", "-1", "-1", "+1"],
            ],
        )

    def test_render_tables(self):
        markdown, tables = render_tables(ReportConfig(p=5, group="sl", n=3))
        self.assertEqual(set(tables), {"orbits", "numforms", "anisotropic", "hilbert"})
        self.assertTrue(markdown.startswith("## Rational nilpotent orbits of SL_3(Q_5)"))
        self.assertIn("## Anisotropic forms over Q_5", markdown)
        with self.assertRaises(NilpotentOrbitError):
            render_tables(ReportConfig(p=5, group="so", n=3))


class MarkdownTests(SimpleTestCase):

    def test_table_reads_back(self):
        text = markdown_table(["Partition", "#Rational Orbits", "dim(F)"], [["[2]", 4, "0"], ["[1,1]", 1, "0 or 1"]])
        self.assertEqual(
            markdown_to_rows(text),
            [
                {"Partition": "[2]", "#Rational Orbits": 4, "dim(F)": 0},
                {"Partition": "[1,1]", "#Rational Orbits": 1, "dim(F)": "0 or 1"},
            ],
        )

    def test_layout(self):
        self.assertEqual(markdown_table(["a", "b"], [[1, 2]]), "| a | b |\n| --- | --- |\n| 1 | 2 |")


class DocumentTests(SimpleTestCase):

    def test_sl2_document(self):
        document = orbit_document(ReportConfig(p=5, group="sl", n=2))
        self.assertEqual(document["field"], {"p": 5, "epsilon": 2})
        self.assertEqual(len(document["orbits"]), 5)
        self.assertTrue(all(row["triple_ok"] for row in document["orbits"]))
        zero = next(row for row in document["orbits"] if row["id"] == "sl:[1,1]:d=1")
        self.assertEqual(zero["facet"], {"equalities": [], "dim": 1})

    def test_json_round_trip(self):
        text = render_json(orbit_document(ReportConfig(p=7, group="sp", n=1)))
        document = json.loads(text)
        self.assertEqual(render_json(document), text)
        self.assertEqual(len(document["orbits"]), 5)
        self.assertEqual(document["field"]["epsilon"], -1)

    def test_find_orbit(self):
        orbits = enumerate_orbits(LocalField.for_prime(5), "sp", 1)
        self.assertEqual(find_orbit(orbits, "sp:[1,1]").lam.label(), "[1,1]")
        with self.assertRaises(NilpotentOrbitError):
            find_orbit(orbits, "sp:[3]")
        with self.assertRaises(NilpotentOrbitError):
            enumerate_orbits(LocalField.for_prime(5), "so", 3)


class SerializationTests(SimpleTestCase):

    def test_to_serializable(self):
        self.assertEqual(to_serializable(Integer(3)), 3)
        self.assertEqual(to_serializable(Rational(-1, 2)), "-1/2")
        self.assertEqual(to_serializable(Matrix([[0, Rational(1, 5)], [0, 0]])), [["0", "1/5"], ["0", "0"]])
        self.assertEqual(to_serializable(frozenset({"b", "a"})), ["a", "b"])
        self.assertEqual(
            to_serializable(datetime(2024, 1, 2, tzinfo=timezone.utc)),
            "2024-01-02T00:00:00+00:00",
        )

    def test_field_tokens(self):
        field = LocalField.for_prime(5)
        self.assertEqual(parse_field_token(field, "eps"), 2)
        self.assertEqual(parse_field_token(field, "ε"), 2)
        self.assertEqual(parse_field_token(field, "ϖ"), 5)
        self.assertEqual(parse_field_token(field, "eps*pi"), 10)
        self.assertEqual(parse_field_token(LocalField.for_prime(7), "εϖ"), -7)
        self.assertEqual(parse_field_token(field, " -3/25 "), Rational(-3, 25))
        with self.assertRaises(NilpotentOrbitError):
            parse_field_token(field, "x")
