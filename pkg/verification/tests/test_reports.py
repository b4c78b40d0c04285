import json
import tempfile
from pathlib import Path

import pandas as pd
from django.test import SimpleTestCase, TestCase

from verification.checks import CheckOptions, run_verification
from verification.models import VerificationRun
from verification.reports import (
    VerificationReport,
    emit_report,
    emit_reports,
    export_reports_xlsx,
    render_value,
    save_report,
)


def sample_report(check_id='sample', passed=True):
    report = VerificationReport(check_id=check_id, elapsed_ms=1.5, engine_stats={'s_pairs': 3, 'bases': 1})
    report.expect('generator count', 'len(mingens(I))', 8, 8)
    report.add_step('membership', 'x1 in I', expected='true', outcome='true' if passed else 'false', passed=passed)
    return report


class RenderTests(SimpleTestCase):

    def test_render_value(self):
        self.assertEqual(render_value(True), 'true')
        self.assertEqual(render_value(None), 'none')
        self.assertEqual(render_value([1, False]), '[1, false]')
        self.assertEqual(render_value('(x1)'), '(x1)')

    def test_status(self):
        self.assertEqual(VerificationReport('empty').status, 'fail')
        self.assertEqual(sample_report().status, 'pass')
        self.assertFalse(sample_report(passed=False).passed)

    def test_expect_compares_values(self):
        report = VerificationReport('r')
        self.assertTrue(report.expect('d', 'e', 4, 4))
        self.assertFalse(report.expect('d', 'e', True, False))
        self.assertEqual(report.steps[1].expected, 'false')
        self.assertEqual(report.steps[1].outcome, 'true')


class EmitTests(SimpleTestCase):

    def test_json_without_timing_is_deterministic(self):
        first = emit_report(run_verification('lemma-h1bis', CheckOptions()), 'json', include_timing=False)
        second = emit_report(run_verification('lemma-h1bis', CheckOptions()), 'json', include_timing=False)
        self.assertEqual(first, second)
        payload = json.loads(first)
        self.assertEqual(payload['status'], 'pass')
        self.assertIsNone(payload['elapsed_ms'])
        self.assertTrue(first.endswith(b'\n'))

    def test_json_keys(self):
        payload = json.loads(emit_report(sample_report(), 'json'))
        self.assertEqual(list(payload), ['check_id', 'status', 'steps', 'elapsed_ms', 'engine_stats'])
        self.assertEqual(list(payload['engine_stats']), ['bases', 's_pairs'])
        self.assertEqual(payload['elapsed_ms'], 1.5)
        self.assertEqual(payload['steps'][0]['expected'], '8')

    def test_text_lists_generators(self):
        text = emit_report(run_verification('lemma-h1', CheckOptions())).decode('utf-8')
        self.assertTrue(text.startswith('✅ lemma-h1: pass'))
        for generator in ('x2^4.x3^4', 'x1.x2^3.x3^3', 'x1^2.x2^3.x3^2', 'x1^2.x2^2.x3^3',
                          'x1^3.x2^4.x3', 'x1^3.x2.x3^4', 'x1^4.x2^5', 'x1^4.x3^5'):
            self.assertIn(generator, text)

    def test_text_failure(self):
        text = emit_report(sample_report(passed=False), include_timing=False).decode('utf-8')
        self.assertEqual(text.splitlines()[0], '❌ sample: fail')
        self.assertIn('expected true, got false', text)
        self.assertIn('engine: bases=1, s_pairs=3', text)

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report(sample_report(), 'xml')

    def test_several_reports(self):
        reports = [sample_report('a'), sample_report('b', passed=False)]
        text = emit_reports(reports).decode('utf-8')
        self.assertTrue(text.endswith('\n1/2 checks passed\n'))
        payload = json.loads(emit_reports(reports, 'json'))
        self.assertEqual([p['status'] for p in payload], ['pass', 'fail'])
        self.assertEqual(emit_reports(reports[:1], 'json'), emit_report(reports[0], 'json'))


class ExportTests(SimpleTestCase):

    def test_workbook(self):
        reports = [sample_report('lemma-h1'), sample_report('cycles /tmp/a:b?.txt', passed=False)]
        with tempfile.TemporaryDirectory() as tmp:
            path = export_reports_xlsx(reports, Path(tmp) / 'nested' / 'runs.xlsx')
            self.assertTrue(path.exists())
            sheets = pd.read_excel(path, sheet_name=None, engine='openpyxl')
        self.assertEqual(list(sheets), ['Summary', 'lemma-h1', 'cycles _tmp_a_b_.txt'])
        summary = sheets['Summary']
        self.assertEqual(summary['Status'].tolist(), ['pass', 'fail'])
        self.assertEqual(summary['Passed Steps'].tolist(), [2, 1])
        self.assertEqual(len(sheets['lemma-h1']), 2)

    def test_long_and_duplicate_sheet_names(self):
        reports = [sample_report('x' * 40), sample_report('x' * 40)]
        with tempfile.TemporaryDirectory() as tmp:
            sheets = pd.read_excel(export_reports_xlsx(reports, Path(tmp) / 'r.xlsx'), sheet_name=None)
        names = list(sheets)[1:]
        self.assertEqual(names, ['x' * 31, 'x' * 29 + '~2'])


class SaveReportTests(TestCase):

    def test_save(self):
        report = sample_report()
        report.options = {'order': 'grevlex', 'bound': 3, 'seed': 0}
        run = save_report(report)
        self.assertEqual(VerificationRun.objects.count(), 1)
        run.refresh_from_db()
        self.assertTrue(run.passed)
        self.assertEqual(run.check_id, 'sample')
        self.assertEqual(len(run.steps), 2)
        self.assertEqual(run.engine_stats, {'s_pairs': 3, 'bases': 1})
        self.assertEqual(run.options['bound'], 3)
        self.assertEqual(str(run), 'sample (Pass)')
