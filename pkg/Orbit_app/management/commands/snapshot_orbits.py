from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from Orbit_app.exceptions import NilpotentOrbitError
from Orbit_app.models import OrbitSnapshot
from Orbit_app.reports import orbit_document
from Orbit_app.serializers import ReportConfigSerializer


class Command(BaseCommand):
    help = 'Stores the orbit report of a group as snapshots, or checks the stored snapshots against a fresh report.'

    def add_arguments(self, parser):
        parser.add_argument('--group', choices=['sl', 'sp'], default='sp')
        parser.add_argument('--n', type=int, default=2)
        parser.add_argument('--p', type=int, default=settings.NILPOTENT_ORBITS['DEFAULT_PRIME'])
        parser.add_argument('--check', action='store_true', help='Compare instead of storing; exit 2 on any difference.')

    def handle(self, *args, **options):
        serializer = ReportConfigSerializer(data={
            'p': options['p'],
            'group': options['group'],
            'n': options['n'],
            'r_multiplier': settings.NILPOTENT_ORBITS['R_MULTIPLIER'],
            'seed': settings.NILPOTENT_ORBITS['FACET_SEED'],
        })
        if not serializer.is_valid():
            raise CommandError(f"Invalid arguments: {serializer.errors}", returncode=1)
        config = serializer.build_config()

        self.stdout.write(f"Computing orbits of {config.group}({config.n}) over Q_{config.p}...")
        try:
            rows = orbit_document(config)['orbits']
        except NilpotentOrbitError as e:
            raise CommandError(str(e), returncode=1)

        if options['check']:
            self._check(config, rows)
        else:
            self._store(config, rows)

    def _fields(self, config, row) -> dict:
        return {
            'n': config.n,
            'partition': row['partition'],
            'class_label': row['class'],
            'facet_dim': row['facet']['dim'],
            'equalities': row['facet']['equalities'],
            'triple_ok': row['triple_ok'],
        }

    def _store(self, config, rows):
        stored = OrbitSnapshot.objects.filter(group=config.group, p=config.p, n=config.n)
        existing = set(stored.values_list('orbit_id', flat=True))

        # Update the rows we already have, collect the new ones
        snapshots_to_create = []
        for row in rows:
            if row['id'] in existing:
                OrbitSnapshot.objects.update_or_create(
                    group=config.group, p=config.p, orbit_id=row['id'],
                    defaults=self._fields(config, row),
                )
            else:
                snapshots_to_create.append(OrbitSnapshot(
                    group=config.group, p=config.p, orbit_id=row['id'], **self._fields(config, row),
                ))
        OrbitSnapshot.objects.bulk_create(snapshots_to_create)

        self.stdout.write(self.style.SUCCESS(f"Updated {len(rows) - len(snapshots_to_create)} snapshots."))
        self.stdout.write(self.style.SUCCESS(f"Created {len(snapshots_to_create)} snapshots."))

    def _check(self, config, rows):
        stored = {
            s.orbit_id: s.as_row()
            for s in OrbitSnapshot.objects.filter(group=config.group, p=config.p, n=config.n)
        }
        computed = {row['id']: row for row in rows}
        problems = []
        for orbit_id in sorted(computed.keys() - stored.keys()):
            problems.append(f"missing snapshot {orbit_id}")
        for orbit_id in sorted(stored.keys() - computed.keys()):
            problems.append(f"stale snapshot {orbit_id}")
        for orbit_id in sorted(computed.keys() & stored.keys()):
            if stored[orbit_id] != computed[orbit_id]:
                problems.append(f"snapshot {orbit_id} differs from the fresh report")

        for problem in problems:
            self.stdout.write(self.style.ERROR(problem))
        if problems:
            raise CommandError(f"{len(problems)} snapshot differences", returncode=2)
        self.stdout.write(self.style.SUCCESS(f"{len(computed)} snapshots match."))
