from typing import Optional

from ..config import config
from ..evaluation import ApproxNode, Approximation, EvalSession, Stall, render_approximation
from ..models import CommandReport
from ..terms import render_term
from .base import BaseCommand, error_handler, require_workspace


def first_stall(approx: Approximation) -> Optional[Stall]:
    if isinstance(approx, Stall):
        return approx
    if isinstance(approx, ApproxNode):
        for child in approx.children:
            found = first_stall(child)
            if found is not None:
                return found
    return None


class EvalCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'eval'

    @require_workspace
    @error_handler
    def run(self, term: str, depth: Optional[int] = None, budget: Optional[int] = None,
            env: Optional[str] = None, program: Optional[str] = None) -> CommandReport:
        """Observe a closed term to a finite depth."""
        depth = config.eval.depth if depth is None else depth
        environment = self.resolve_env(env)
        resolved, (parsed,) = self.resolve_terms([term], program, environment)
        approx = EvalSession(resolved, environment, budget).observe(parsed, depth)

        report = self.create_base_report()
        report.summary = render_approximation(approx)
        report.add_row('term', render_term(parsed))
        report.add_row('program', resolved.name)
        report.add_row('depth', depth)
        report.add_row('approximation', report.summary)
        stall = first_stall(approx)
        if stall is not None:
            report.verdict = False
            report.add_row('stall', f'{stall.reason} at {render_term(stall.term)}')
        report.payload = approx
        return report


class BisimCommand(BaseCommand):
    @property
    def command_id(self) -> str:
        return 'bisim'

    @require_workspace
    @error_handler
    def run(self, left: str, right: str, depth: Optional[int] = None, budget: Optional[int] = None,
            env: Optional[str] = None, program: Optional[str] = None) -> CommandReport:
        """Compare two closed terms under every deep destructor up to a depth."""
        depth = config.eval.depth if depth is None else depth
        environment = self.resolve_env(env)
        resolved, (first, second) = self.resolve_terms([left, right], program, environment)
        outcome = EvalSession(resolved, environment, budget).compare(first, second, depth)

        report = self.create_base_report()
        report.summary = str(outcome)
        report.add_row('left', render_term(first))
        report.add_row('right', render_term(second))
        report.add_row('verdict', outcome.verdict)
        if outcome.path:
            report.add_row('path', list(outcome.path))
        if outcome.reason is not None:
            report.add_row('reason', outcome.reason)
        report.verdict = outcome.equal
        report.payload = outcome
        return report
