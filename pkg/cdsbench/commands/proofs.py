from typing import Optional

from ..extract import extract
from ..logic import assert_sp_proof, check_proof, classify_formula, normalize, render_formula
from ..logic.normalize import find_detour
from ..models import CommandReport
from ..syntax import ProofEntry, Scope, parse_formula, print_program, print_proof
from .base import BaseCommand, error_handler, require_workspace


class _ProofCommand(BaseCommand):
    """Commands working on one named workspace proof."""

    def load(self, name: str):
        entry = self.workspace.proof(name)
        return entry, self.workspace.system(entry.system), self.workspace.program(entry.program)


class CheckProofCommand(_ProofCommand):
    @property
    def command_id(self) -> str:
        return 'check-proof'

    @require_workspace
    @error_handler
    def run(self, proof: str) -> CommandReport:
        entry, ds, program = self.load(proof)
        judgment = check_proof(ds, program, entry.derivation)
        report = self.create_base_report()
        report.add_row('proof', entry.name)
        report.add_row('size', entry.derivation.size)
        if judgment.ok:
            report.summary = f'ok: {judgment}'
            for name, formula in judgment.assumptions:
                report.add_row(f'assumption {name}', render_formula(formula))
            report.add_row('conclusion', render_formula(judgment.conclusion))
        else:
            report.mark_as_failed(str(judgment))
            report.add_row('violation', judgment.violation)
        report.payload = judgment
        return report


class NormalizeCommand(_ProofCommand):
    @property
    def command_id(self) -> str:
        return 'normalize'

    @require_workspace
    @error_handler
    def run(self, proof: str, limit: Optional[int] = None) -> CommandReport:
        """Eliminate detours, recheck, and scan the normal form for strong positivity."""
        entry, ds, program = self.load(proof)
        normal = normalize(entry.derivation, limit)
        judgment = check_proof(ds, program, normal)
        scan = assert_sp_proof(normal)

        report = self.create_base_report()
        report.add_row('size', f'{entry.derivation.size} -> {normal.size}')
        report.add_row('detour-free', find_detour(normal) is None)
        report.add_row('check', judgment)
        report.add_row('strongly-positive', 'ok' if scan.ok else f'{scan.rule} at {list(scan.path)}')
        report.payload = print_proof(ProofEntry(entry.name, entry.system, entry.program, normal))
        if not judgment.ok:
            report.mark_as_failed(f'normal form does not check: {judgment.violation}')
        else:
            report.summary = 'normalized'
        return report


class ClassifyCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'classify'

    @require_workspace
    @error_handler
    def run(self, formula: str, system: Optional[str] = None) -> CommandReport:
        """Polarity class of a formula; names of every program over the system resolve as functions."""
        ds = self.workspace.system(system) if system else next(iter(self.workspace.systems.values()))
        functions = {f for p in self.workspace.programs.values() if p.system.name == ds.name for f in p.functions}
        parsed = parse_formula(formula, Scope(ds, functions=functions))
        polarity = classify_formula(parsed)

        report = self.create_base_report()
        report.summary = polarity.value
        report.add_row('formula', render_formula(parsed))
        report.add_row('class', polarity.value)
        report.payload = polarity
        return report


class ExtractCommand(_ProofCommand):
    @property
    def command_id(self) -> str:
        return 'extract'

    @require_workspace
    @error_handler
    def run(self, proof: str, out: Optional[str] = None) -> CommandReport:
        """Check, normalize and extract; the extracted program goes to `out` as a program block."""
        entry, ds, program = self.load(proof)
        judgment = check_proof(ds, program, entry.derivation)
        if not judgment.ok:
            report = self.create_base_report()
            report.mark_as_failed(f'proof {proof} does not check: {judgment.violation}')
            return report
        result = extract(normalize(entry.derivation), program)
        text = print_program(result.program)
        if out:
            with open(out, 'w', encoding='utf-8') as handle:
                handle.write(text + '\n')
            self.logger.info(f'Wrote extracted program {result.program.name} to {out}')

        report = self.create_base_report(headers=('node', 'realizer'))
        report.summary = f"{result.principal}({', '.join(result.parameters)})"
        for item in result.certificate:
            where = '.'.join(str(i) for i in item.path) or 'root'
            report.add_row(f'{where} {item.rule}', f'{item.realizer}  [depth/{item.factor}]')
        report.payload = text
        return report
