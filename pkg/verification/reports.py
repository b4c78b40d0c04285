"""
Verification reports: the evidence trail of one check, and its renderings.

A report is a list of steps, each pairing the value a claim predicts with the
value the engine computed. JSON output is deterministic for identical inputs
once timing is left out.
"""

import json
import logging
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import pandas as pd

from .models import VerificationRun

logger = logging.getLogger(__name__)

EXCEL_SHEET_LIMIT = 31
_SHEET_UNSAFE = re.compile(r"[\[\]:*?/\\]")


def render_value(value: Any) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return 'none'
    if isinstance(value, (list, tuple)):
        return '[' + ', '.join(render_value(v) for v in value) + ']'
    return str(value)


@dataclass
class Step:
    description: str
    expression: str
    expected: str
    outcome: str
    passed: bool

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class VerificationReport:
    check_id: str
    steps: List[Step] = field(default_factory=list)
    elapsed_ms: float = 0.0
    engine_stats: Dict[str, int] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        """pass iff the report has steps and every one of them passed."""
        if self.steps and all(step.passed for step in self.steps):
            return VerificationRun.Status.PASS.value
        return VerificationRun.Status.FAIL.value

    @property
    def passed(self) -> bool:
        return self.status == VerificationRun.Status.PASS

    def expect(self, description: str, expression: str, outcome: Any, expected: Any = True) -> bool:
        """
        Record a step comparing a computed value with the predicted one.

        Args:
            description: what the step establishes
            expression: the expression that was evaluated
            outcome: the computed value
            expected: the predicted value; outcome must compare equal to it

        Returns:
            whether the step passed
        """
        passed = outcome == expected
        self.add_step(description, expression, render_value(expected), render_value(outcome), passed)
        return passed

    def add_step(self, description: str, expression: str, expected: str, outcome: str, passed: bool) -> Step:
        step = Step(description, expression, expected, outcome, bool(passed))
        self.steps.append(step)
        if not step.passed:
            logger.warning(f"⚠️ {self.check_id}: step failed: {description} (expected {expected}, got {outcome})")
        return step

    def as_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        return {
            'check_id': self.check_id,
            'status': self.status,
            'steps': [step.as_dict() for step in self.steps],
            'elapsed_ms': round(self.elapsed_ms, 3) if include_timing else None,
            'engine_stats': dict(sorted(self.engine_stats.items())),
        }

    def __str__(self) -> str:
        return f"{self.check_id}: {self.status}"


# ============================================================================
# RENDERING
# ============================================================================

def _text(report: VerificationReport, include_timing: bool) -> str:
    mark = '✅' if report.passed else '❌'
    header = f"{mark} {report.check_id}: {report.status}"
    if include_timing:
        header += f" ({report.elapsed_ms:.1f} ms)"
    lines = [header]
    for number, step in enumerate(report.steps, start=1):
        lines.append(f"  {'✅' if step.passed else '❌'} {number}. {step.description}")
        lines.append(f"       {step.expression}")
        if step.passed:
            lines.append(f"       = {step.outcome}")
        else:
            lines.append(f"       expected {step.expected}, got {step.outcome}")
    if report.engine_stats:
        stats = ', '.join(f"{k}={v}" for k, v in sorted(report.engine_stats.items()))
        lines.append(f"  engine: {stats}")
    return '\n'.join(lines) + '\n'


def emit_report(report: VerificationReport, fmt: str = 'text', include_timing: bool = True) -> bytes:
    """Render one report as UTF-8 text or JSON."""
    if fmt == 'json':
        payload = json.dumps(report.as_dict(include_timing), ensure_ascii=False, indent=2)
        return (payload + '\n').encode('utf-8')
    if fmt != 'text':
        raise ValueError(f"unknown report format {fmt!r}")
    return _text(report, include_timing).encode('utf-8')


def emit_reports(reports: Sequence[VerificationReport], fmt: str = 'text', include_timing: bool = True) -> bytes:
    """A single report renders as itself; several become a JSON array or text with a summary line."""
    if len(reports) == 1:
        return emit_report(reports[0], fmt, include_timing)
    if fmt == 'json':
        payload = json.dumps([r.as_dict(include_timing) for r in reports], ensure_ascii=False, indent=2)
        return (payload + '\n').encode('utf-8')
    body = b'\n'.join(emit_report(r, fmt, include_timing) for r in reports)
    passed = sum(1 for r in reports if r.passed)
    summary = f"\n{passed}/{len(reports)} checks passed\n"
    return body + summary.encode('utf-8')


# ============================================================================
# EXPORT & PERSISTENCE
# ============================================================================

def _sheet_name(label: str, taken: Iterable[str]) -> str:
    base = _SHEET_UNSAFE.sub('_', label)[:EXCEL_SHEET_LIMIT] or 'check'
    name, suffix = base, 1
    taken = set(taken)
    while name in taken:
        suffix += 1
        tail = f"~{suffix}"
        name = base[:EXCEL_SHEET_LIMIT - len(tail)] + tail
    return name


def export_reports_xlsx(reports: Sequence[VerificationReport], path: Union[str, Path]) -> Path:
    """
    Write a workbook with a Summary sheet and one sheet of steps per report.

    Args:
        reports: the reports to export
        path: output .xlsx path; parent directories are created

    Returns:
        Path to the generated file
    """
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    summary = pd.DataFrame({
        'Check': [r.check_id for r in reports],
        'Status': [r.status for r in reports],
        'Steps': [len(r.steps) for r in reports],
        'Passed Steps': [sum(1 for s in r.steps if s.passed) for r in reports],
        'Elapsed (ms)': [round(r.elapsed_ms, 3) for r in reports],
        'Groebner Bases': [r.engine_stats.get('bases', 0) for r in reports],
        'S-pairs': [r.engine_stats.get('s_pairs', 0) for r in reports],
    })

    try:
        with pd.ExcelWriter(file_path, engine='openpyxl') as writer:
            summary.to_excel(writer, sheet_name='Summary', index=False)
            taken = ['Summary']
            for report in reports:
                sheet = _sheet_name(report.check_id, taken)
                taken.append(sheet)
                steps = pd.DataFrame(
                    [step.as_dict() for step in report.steps],
                    columns=['description', 'expression', 'expected', 'outcome', 'passed'],
                )
                steps.to_excel(writer, sheet_name=sheet, index=False)
    except Exception as e:
        logger.error(f"Export failed: {e}", exc_info=True)
        raise

    logger.info(f"Successfully exported {len(reports)} report(s) to '{file_path}'")
    return file_path


def save_report(report: VerificationReport) -> VerificationRun:
    run = VerificationRun.objects.create(
        check_id=report.check_id,
        status=report.status,
        steps=[step.as_dict() for step in report.steps],
        engine_stats=dict(report.engine_stats),
        options=dict(report.options),
        elapsed_ms=report.elapsed_ms,
    )
    logger.info(f"Saved verification run {run.pk} for {report.check_id}")
    return run
