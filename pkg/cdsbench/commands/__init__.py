from typing import Dict, Type

from ..errors import UnknownIdentifierError
from ..log_config import setup_logging
from ..models import CommandReport
from ..syntax import Workspace
from .base import BaseCommand
from .corecursion import ProductiveCommand, ProveCorecCommand
from .observation import BisimCommand, EvalCommand
from .proofs import CheckProofCommand, ClassifyCommand, ExtractCommand, NormalizeCommand
from .workspace import CheckCommand, RoundtripCommand

logger = setup_logging()

COMMANDS: Dict[str, Type[BaseCommand]] = {
    'check': CheckCommand,
    'eval': EvalCommand,
    'bisim': BisimCommand,
    'productive': ProductiveCommand,
    'prove-corec': ProveCorecCommand,
    'check-proof': CheckProofCommand,
    'normalize': NormalizeCommand,
    'classify': ClassifyCommand,
    'extract': ExtractCommand,
    'roundtrip': RoundtripCommand,
}


def run_command(workspace: Workspace, command: str, **options) -> CommandReport:
    """Run one command over a resolved workspace; failures come back as reports."""
    if command not in COMMANDS:
        raise UnknownIdentifierError(command, 'command')
    logger.info(f'Processing command: {command}')
    report = COMMANDS[command](workspace).run(**options)
    logger.info(f'Command {command} finished with exit status {report.exit_code}')
    return report


__all__ = ['BaseCommand', 'COMMANDS', 'run_command']
