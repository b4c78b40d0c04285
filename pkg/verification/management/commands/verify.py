import logging
import sys

from django.core.management.base import BaseCommand, CommandError

from verification.checks import CHECKS, CheckOptions, CheckUsageError, run_checks
from verification.forms import VerifyOptionsForm
from verification.reports import emit_reports, export_reports_xlsx, save_report

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = (
        "Run a verification check (or 'all') and print its report. "
        "Exit status: 0 all checks pass, 1 a check failed, 2 usage error."
    )

    def add_arguments(self, parser):
        parser.add_argument('check_id', help=f"one of: {', '.join(list(CHECKS) + ['all'])}")
        parser.add_argument('scenario', nargs='?', help="cycle scenario name or file (cycles only)")
        parser.add_argument('--json', action='store_true', help="print JSON instead of text")
        parser.add_argument('--order', help="monomial order for membership tests: grevlex or lex")
        parser.add_argument('--bound', type=int, help="coefficient bound of the effective-zero search")
        parser.add_argument('--seed', type=int, help="seed of the randomized point checks")
        parser.add_argument('--save', action='store_true', help="store each report as a VerificationRun")
        parser.add_argument('--xlsx', help="also export the reports to this Excel workbook")

    def handle(self, *args, **options):
        form = VerifyOptionsForm({
            key: options[key] for key in ('order', 'bound', 'seed', 'xlsx') if options.get(key) is not None
        })
        if not form.is_valid():
            errors = '; '.join(f"--{field}: {' '.join(msgs)}" for field, msgs in form.errors.items())
            raise CommandError(errors, returncode=2)

        check_options = CheckOptions(
            order=form.cleaned_data['order'],
            bound=form.cleaned_data['bound'],
            seed=form.cleaned_data['seed'],
            scenario=options.get('scenario'),
        )
        try:
            reports = run_checks(options['check_id'], check_options)
        except CheckUsageError as e:
            raise CommandError(str(e), returncode=2)

        fmt = 'json' if options['json'] else 'text'
        self.stdout.write(emit_reports(reports, fmt).decode('utf-8'), ending='')

        if options['save']:
            for report in reports:
                save_report(report)
        if form.cleaned_data['xlsx']:
            export_reports_xlsx(reports, form.cleaned_data['xlsx'])

        failed = [r.check_id for r in reports if not r.passed]
        if failed:
            logger.error(f"❌ {len(failed)} check(s) failed: {', '.join(failed)}")
            sys.exit(1)
