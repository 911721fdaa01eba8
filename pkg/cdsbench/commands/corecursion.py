from typing import Dict, Optional, Sequence

from ..corec import check_primitive_corecursive, compile_schema
from ..errors import SchemaError
from ..extract import prove_corec
from ..logic import Atom, Derivation, check_proof
from ..models import CommandReport
from ..syntax import ProofEntry, print_proof
from ..terms import Fn
from .base import BaseCommand, error_handler, require_workspace


class ProductiveCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'productive'

    @require_workspace
    @error_handler
    def run(self, program: str) -> CommandReport:
        """Recognize primitive corecurrence and report the schema slots."""
        target = self.workspace.program(program)
        verdict = check_primitive_corecursive(target)

        report = self.create_base_report(headers=('function', 'slot'))
        report.summary = str(verdict)
        if not verdict.accepted:
            report.mark_as_failed(f'rejected: {verdict.reason}')
            report.add_row('reason', verdict.reason)
            if verdict.equation is not None:
                report.add_row('equation', verdict.equation)
            return report
        for function, slot in verdict.slots:
            report.add_row(function, slot)
        report.payload = verdict.schema
        return report


class ProveCorecCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'prove-corec'

    def _sub_proofs(self, names: Sequence[str]) -> Dict[str, Derivation]:
        """Workspace proofs keyed by the function their conclusion is about."""
        found = {}
        for name in names:
            conclusion = self.workspace.proof(name).derivation.conclusion
            if not isinstance(conclusion, Atom) or not isinstance(conclusion.term, Fn):
                raise SchemaError(f'proof {name} does not conclude a data-atom about a function call')
            found[conclusion.term.name] = self.workspace.proof(name).derivation
        return found

    @require_workspace
    @error_handler
    def run(self, program: str, using: Sequence[str] = (), name: Optional[str] = None) -> CommandReport:
        """Generate and check the coinduction proof of S(f(x⃗)) from S(x⃗)."""
        target = self.workspace.program(program)
        verdict = check_primitive_corecursive(target)
        if not verdict.accepted:
            report = self.create_base_report()
            report.mark_as_failed(f'{program} is not primitive corecursive: {verdict.reason}')
            return report

        ds = target.system
        derivation = prove_corec(verdict.schema, ds, self._sub_proofs(using))
        compiled = compile_schema(verdict.schema, ds)
        judgment = check_proof(ds, compiled, derivation)
        entry = ProofEntry(name or f'{program}_corec', ds.name, target.name, derivation)

        report = self.create_base_report()
        report.add_row('proof', entry.name)
        report.add_row('size', derivation.size)
        report.add_row('judgment', judgment)
        report.payload = print_proof(entry)
        if judgment.ok:
            report.summary = f'checked: {judgment}'
        else:
            report.mark_as_failed(f'generated proof does not check: {judgment.violation}')
        return report
