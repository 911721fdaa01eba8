from typing import Optional, Sequence

from ..data_system import validate_system
from ..evaluation import validate_env
from ..extract import STAGES, roundtrip_report
from ..library import entry_for, stock_library
from ..models import CommandReport, ValidationReport
from ..program import Program, validate_program
from .base import BaseCommand, error_handler, require_workspace


class CheckCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'check'

    def reports(self):
        for ds in self.workspace.systems.values():
            yield validate_system(ds)
        for program in self.workspace.programs.values():
            yield validate_program(program, program.system)
        for env in self.workspace.envs.values():
            ds = self.workspace.system(env.system)
            # Environments are checked against the names of every program over their system
            equations = [e for p in self.workspace.programs.values() if p.system.name == ds.name
                         for e in p.defined_equations]
            yield validate_env(env, Program.build(env.name, equations, ds), ds)

    @require_workspace
    @error_handler
    def run(self) -> CommandReport:
        """Validate every system, program and environment of the workspace."""
        report = self.create_base_report(headers=('subject', 'status'))
        failed = []
        for outcome in self.reports():
            outcome: ValidationReport
            report.add_row(outcome.subject, 'ok' if outcome.ok else '; '.join(outcome.violations))
            if not outcome.ok:
                failed.append(outcome.subject)
        if failed:
            report.mark_as_failed(f"{len(failed)} invalid: {', '.join(failed)}")
        else:
            report.summary = f'{len(report.rows)} constituents valid'
        return report


class RoundtripCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'roundtrip'

    def entries(self, include: Sequence[str]):
        return stock_library() + [entry_for(self.workspace.program(name)) for name in include]

    @require_workspace
    @error_handler
    def run(self, depth: Optional[int] = None, inputs: Optional[int] = None, seed: Optional[int] = None,
            include: Sequence[str] = ()) -> CommandReport:
        """The stock library, plus `include`d programs, through every roundtrip stage."""
        outcome = roundtrip_report(self.entries(include), depth, inputs, seed)
        report = self.create_base_report(headers=('entry', ' '.join(STAGES)))
        for row in outcome.rows:
            report.add_row(row.entry, ' '.join(row.status(stage) for stage in STAGES))
        passed = sum(row.ok for row in outcome.rows)
        summary = f'{passed}/{len(outcome.rows)} entries pass every stage at depth {outcome.depth}'
        if outcome.ok:
            report.summary = summary
        else:
            failures = [f'{row.entry}@{row.failed_stage}' for row in outcome.rows if not row.ok]
            report.mark_as_failed(f"{summary}; failed: {', '.join(failures)}")
        report.payload = outcome
        return report
