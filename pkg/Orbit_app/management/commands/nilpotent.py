import json
import sys
from collections import Counter

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser
from sympy import Matrix

from Orbit_app.building import RootDatum
from Orbit_app.debacker import apartment_slice, exampledist_triples, orbit_facet
from Orbit_app.exceptions import NilpotentOrbitError
from Orbit_app.lie_core import jacobson_morozov
from Orbit_app.localfield import to_field_element
from Orbit_app.partitions import parse_partition
from Orbit_app.quadform import QuadraticForm, invariants, minimal_representative, witt_split
from Orbit_app.reports import (
    enumerate_orbits,
    facet_payload,
    find_orbit,
    markdown_table,
    matrix_rows,
    orbit_document,
    parse_field_token,
    render_json,
    render_tables,
)
from Orbit_app.serializers import OrbitDocumentSerializer, ReportConfigSerializer
from Orbit_app.sl_orbits import sl_lie_triple
from Orbit_app.sp_orbits import sp_lie_triple
from Orbit_app.verification import run_verification


def _usage_error(parser, message):
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(1, f"{parser.prog}: error: {message}\n")
    raise CommandError(f"Error: {message}", returncode=1)


class UsageErrorParser(CommandParser):
    """Argument errors exit with status 1 rather than argparse's 2."""

    def error(self, message):
        _usage_error(self, message)


def _parse_matrix(text: str) -> Matrix:
    """Rows separated by ';', entries by ',', e.g. '0,1;0,0'."""
    rows = [[to_field_element(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
    if not rows or any(len(row) != len(rows) for row in rows):
        raise CommandError(f"Matrix {text!r} is not square.", returncode=1)
    return Matrix(rows)


def _format_errors(errors: dict) -> str:
    return "; ".join(f"{key}: {' '.join(str(m) for m in messages)}" for key, messages in errors.items())


class Command(BaseCommand):
    help = 'Classifies rational nilpotent orbits of SL_n and Sp_2n over Q_p and reports their facets.'

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = lambda message: _usage_error(parser, message)
        return parser

    def add_arguments(self, parser):
        defaults = settings.NILPOTENT_ORBITS
        common = CommandParser(add_help=False)
        common.add_argument('--p', type=int, default=defaults['DEFAULT_PRIME'], help='Residual characteristic (odd prime).')
        common.add_argument('--group', choices=['sl', 'sp'], default='sp')
        common.add_argument('--n', type=int, default=None, help='SL_n matrix size or the rank of Sp_2n.')
        common.add_argument('--r-mult', dest='r_mult', default=defaults['R_MULTIPLIER'], help='c in r = c*sqrt(2), e.g. 1/2.')
        common.add_argument('--format', choices=['json', 'markdown'], default='markdown')
        common.add_argument('--seed', type=int, default=defaults['FACET_SEED'])

        subparsers = parser.add_subparsers(
            dest='action',
            required=True,
            parser_class=UsageErrorParser,
        )
        kwargs = {'parents': [common], 'called_from_command_line': parser.called_from_command_line}

        orbits = subparsers.add_parser('orbits', help='Enumerate orbits with counts.', **kwargs)
        orbits.add_argument('--partition', default=None, help='Only orbits of this Jordan type, e.g. [2,2].')

        rep = subparsers.add_parser('rep', help='Representative and Lie triple of an orbit.', **kwargs)
        rep.add_argument('--orbit', required=True, help='Orbit id as printed by `orbits`.')

        facet = subparsers.add_parser('facet', help='Facet, witness and membership of an orbit.', **kwargs)
        facet.add_argument('--orbit', required=True)

        region = subparsers.add_parser('slice', help='Apartment slice of a Lie triple.', **kwargs)
        source = region.add_mutually_exclusive_group(required=True)
        source.add_argument('--orbit', help='Use the Lie triple of this orbit.')
        source.add_argument('--matrix', help="Nilpotent X as rows, e.g. '0,1;0,0'.")
        source.add_argument('--exampledist', choices=['X1', 'X0'], help='One of the two Sp_4 counterexample triples.')

        qf = subparsers.add_parser('qf', help='Classify a diagonal quadratic form.', **kwargs)
        qf.add_argument('entries', nargs='+', help='Diagonal entries; eps, pi and eps*pi are accepted.')

        hilbert = subparsers.add_parser('hilbert', help='Hilbert symbol (a, b).', **kwargs)
        hilbert.add_argument('a')
        hilbert.add_argument('b')

        subparsers.add_parser('tables', help='Recompute the orbit and form tables.', **kwargs)
        subparsers.add_parser('verify', help='Run every property suite.', **kwargs)

    def handle(self, *args, **options):
        action = options['action']
        try:
            config = self._config(options)
            getattr(self, f"handle_{action}")(config, options)
        except NilpotentOrbitError as e:
            raise CommandError(f"{e.__class__.__name__}: {e}", returncode=1)

    def _config(self, options):
        n = options['n']
        if n is None:
            n = settings.NILPOTENT_ORBITS['VERIFY_MAX_N'][options['group']] if options['action'] == 'verify' else 2
        serializer = ReportConfigSerializer(data={
            'p': options['p'],
            'group': options['group'],
            'n': n,
            'r_multiplier': options['r_mult'],
            'format': options['format'],
            'seed': options['seed'],
        })
        if not serializer.is_valid():
            raise CommandError(f"Invalid arguments: {_format_errors(serializer.errors)}", returncode=1)
        return serializer.build_config()

    def _write_json(self, payload):
        self.stdout.write(render_json(payload))

    def _orbit(self, config, orbit_id):
        field = config.field
        orbit = find_orbit(enumerate_orbits(field, config.group, config.n), orbit_id)
        return field, orbit

    # --- Subcommands ---

    def handle_orbits(self, config, options):
        document = orbit_document(config)
        if options['partition']:
            lam = parse_partition(options['partition']).label()
            document['orbits'] = [row for row in document['orbits'] if row['partition'] == lam]
        data = OrbitDocumentSerializer(document).data
        if config.format == 'json':
            self._write_json(data)
            return
        counts = Counter(row['partition'] for row in data['orbits'])
        rows = [
            [row['id'], row['partition'], json.dumps(row["class"], sort_keys=True, default=str), row['facet']['dim'], row['triple_ok']]
            for row in data['orbits']
        ]
        self.stdout.write(markdown_table(['id', 'partition', 'class', 'dim(F)', 'triple_ok'], rows))
        self.stdout.write("")
        self.stdout.write(markdown_table(['Partition', '#Rational Orbits'], list(counts.items())))
        self.stdout.write(self.style.SUCCESS(
            f"{len(rows)} orbits of {config.group}({config.n}) over Q_{config.p}"
        ))

    def handle_rep(self, config, options):
        field, orbit = self._orbit(config, options['orbit'])
        triple = sp_lie_triple(field, orbit) if config.group == 'sp' else sl_lie_triple(orbit)
        payload = {
            "id": orbit.orbit_id,
            "X": matrix_rows(triple.X),
            "H": matrix_rows(triple.H),
            "Y": matrix_rows(triple.Y),
            "triple_ok": triple.is_valid() and (config.group == 'sl' or triple.in_sp()),
        }
        if config.format == 'json':
            self._write_json(payload)
            return
        self.stdout.write(f"Orbit {orbit.orbit_id}")
        for name in ("X", "H", "Y"):
            self.stdout.write(f"{name} =")
            for row in payload[name]:
                self.stdout.write("  [" + ", ".join(row) + "]")
        style = self.style.SUCCESS if payload["triple_ok"] else self.style.ERROR
        self.stdout.write(style(f"sl2 relations: {'ok' if payload['triple_ok'] else 'FAILED'}"))

    def handle_facet(self, config, options):
        field, orbit = self._orbit(config, options['orbit'])
        d = orbit_facet(
            field, orbit, level=config.level, seed=config.seed, max_attempts=config.max_attempts,
        )
        payload = {
            "id": orbit.orbit_id,
            "level": str(d.facet.level),
            "facet": facet_payload(d.facet),
            "closure": sorted(psi.label() for psi in d.facet.equalities),
            "witness": [str(x) for x in d.facet.witness.coords],
            "adapted": list(d.adapted),
            "membership": d.membership(field),
        }
        if config.format == 'json':
            self._write_json(payload)
            return
        self.stdout.write(f"Orbit {orbit.orbit_id} at r = {payload['level']}")
        self.stdout.write(markdown_table(
            ['affine root', 'offset'],
            [[e['root'], e['offset']] for e in payload['facet']['equalities']],
        ))
        self.stdout.write(f"dim = {d.facet.dim}")
        self.stdout.write(f"witness = {d.facet.witness}")
        self.stdout.write(f"adapted cocharacter = {d.adapted}")
        membership = payload['membership']
        style = self.style.SUCCESS if all(membership.values()) else self.style.ERROR
        self.stdout.write(style("membership: " + ", ".join(f"{k}={v}" for k, v in membership.items())))

    def handle_slice(self, config, options):
        field = config.field
        if options['exampledist']:
            datum, triple = RootDatum('sp', 2), exampledist_triples(field)[options['exampledist']]
        elif options['matrix']:
            X = _parse_matrix(options['matrix'])
            symplectic = config.group == 'sp'
            datum = RootDatum(config.group, X.rows // 2 if symplectic else X.rows)
            triple = jacobson_morozov(X, symplectic=symplectic)
        else:
            _, orbit = self._orbit(config, options['orbit'])
            datum = RootDatum(config.group, config.n)
            triple = sp_lie_triple(field, orbit) if config.group == 'sp' else sl_lie_triple(orbit)
        region = apartment_slice(field, datum, triple, config.level)
        payload = {
            "level": str(region.level),
            "feasible": region.feasible,
            "dim": region.dim,
            "constraints": [str(c) for c in region.constraints],
            "forced": sorted(psi.label() for psi in region.forced_equalities()),
        }
        if config.format == 'json':
            self._write_json(payload)
            return
        for line in payload['constraints']:
            self.stdout.write(line)
        self.stdout.write(f"forced: {', '.join(payload['forced']) or 'none'}")
        if not region.feasible:
            self.stdout.write(self.style.ERROR("slice is empty"))
            return
        self.stdout.write(self.style.SUCCESS(f"slice dim = {region.dim} (feasible: {region.feasible})"))

    def handle_qf(self, config, options):
        field = config.field
        entries = [parse_field_token(field, token) for token in options['entries']]
        Q = QuadraticForm.from_entries(entries)
        m, kernel = witt_split(field, Q)
        payload = {
            "form": str(Q),
            "invariants": invariants(field, Q).as_dict(),
            "witt_index": m,
            "anisotropic_kernel": str(kernel),
            "minimal_representative": matrix_rows(minimal_representative(field, Q)),
        }
        if config.format == 'json':
            self._write_json(payload)
            return
        inv = payload['invariants']
        self.stdout.write(f"{payload['form']}: dim {inv['dim']}, det {inv['det']}, hasse {inv['hasse']:+d}")
        self.stdout.write(f"Witt index {m}, anisotropic kernel {kernel}")

    def handle_hilbert(self, config, options):
        field = config.field
        value = field.hilbert_symbol(parse_field_token(field, options['a']), parse_field_token(field, options['b']))
        if config.format == 'json':
            self._write_json({"a": options['a'], "b": options['b'], "p": field.p, "value": value})
            return
        self.stdout.write(str(value))

    def handle_tables(self, config, options):
        markdown, tables = render_tables(config)
        if config.format == 'json':
            self._write_json(tables)
            return
        self.stdout.write(markdown)

    def handle_verify(self, config, options):
        defaults = settings.NILPOTENT_ORBITS
        results = run_verification(
            config.field, config.group, config.n, config.level, config.seed,
            probe_samples=defaults['PROBE_SAMPLES'], probe_depth=defaults['PROBE_DEPTH'],
        )
        failed = {name: failures for name, failures in results.items() if failures}
        for name, failures in results.items():
            if failures:
                self.stdout.write(self.style.ERROR(f"{name}: {len(failures)} failures"))
                for failure in failures:
                    self.stdout.write(f"  {failure}")
            else:
                self.stdout.write(self.style.SUCCESS(f"{name}: ok"))
        if failed:
            raise CommandError(f"Verification failed: {', '.join(failed)}", returncode=2)
        self.stdout.write(self.style.SUCCESS("All property suites passed."))
