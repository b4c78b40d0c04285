import json
import sys

from django.core.management.base import BaseCommand, CommandError

from algebra.exceptions import AlgebraError, ParseError
from algebra.groebner import groebner_basis
from algebra.ideal_expr_parser import evaluate, parse, to_source
from algebra.monomial_ideal import MonomialIdeal
from verification.forms import IdealOptionsForm


class Command(BaseCommand):
    help = (
        "Evaluate an ideal expression such as '(x2, x3)^5 & (x1, x3)^4' and print "
        "its minimal generators (monomial engine) or reduced Groebner basis."
    )
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        parser.add_argument('expression', nargs='?', help="the expression; read from standard input if omitted or '-'")
        parser.add_argument('--ring', help="comma separated variables (default x1,x2,x3)")
        parser.add_argument('--engine', help="auto, monomial or groebner")
        parser.add_argument('--json', action='store_true', help="print JSON instead of text")

    def _read_source(self, options):
        source = options.get('expression')
        if source is not None and source != '-':
            return source
        stream = options.get('stdin') or sys.stdin
        raw = stream.buffer.read() if hasattr(stream, 'buffer') else stream.read()
        return raw.strip()

    def handle(self, *args, **options):
        form = IdealOptionsForm({
            key: options[key] for key in ('ring', 'engine') if options.get(key) is not None
        })
        if not form.is_valid():
            errors = '; '.join(f"--{field}: {' '.join(msgs)}" for field, msgs in form.errors.items())
            raise CommandError(errors, returncode=2)
        ring = form.cleaned_data['ring']
        engine = form.cleaned_data['engine']

        try:
            node = parse(self._read_source(options), ring)
            result = evaluate(node, ring, engine)
        except ParseError as e:
            raise CommandError(f"parse error: {e}", returncode=2)
        except AlgebraError as e:
            raise CommandError(str(e), returncode=2)

        if isinstance(result, MonomialIdeal):
            used = 'monomial'
            generators = [g.format() for g in result.sorted_gens()]
        else:
            used = 'groebner'
            generators = [str(g) for g in groebner_basis(result)]

        if options['json']:
            payload = {
                'expression': to_source(node),
                'ring': list(ring.names),
                'engine': used,
                'generators': generators,
            }
            self.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2))
        else:
            self.stdout.write(to_source(node))
            self.stdout.write(f"= ({', '.join(generators)})" if generators else "= (0)")
