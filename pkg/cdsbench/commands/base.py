from abc import ABC, abstractmethod
from functools import wraps
from typing import Iterable, Optional, Sequence, Tuple

from ..errors import UnknownIdentifierError, WorkbenchError, WorkspaceParseError
from ..evaluation import DiagramEnv
from ..log_config import setup_logging
from ..models import CommandReport
from ..program import Program
from ..syntax import Scope, Workspace, parse_term
from ..terms import Term, variables

logger = setup_logging()


def require_workspace(f):
    """Decorator to check that the command has a workspace with at least one system."""

    @wraps(f)
    def wrapper(self, *args, **kwargs):
        if not self.validate_workspace():
            self.logger.warning(f'Command {self.command_id} has no usable workspace')
            return self.create_error_report('workspace has no data system')
        return f(self, *args, **kwargs)

    return wrapper


def error_handler(f):
    """Decorator to handle logging and error reporting for commands."""

    @wraps(f)
    def wrapper(self, *args, **kwargs):
        self.log_start()
        try:
            return f(self, *args, **kwargs)
        except WorkbenchError as e:
            self.logger.info(f'Command {self.command_id} failed: {e}')
            return self.create_error_report(str(e))
        except Exception as e:
            error_msg = f'Error running {self.command_id}: {str(e)}'
            self.logger.error(error_msg)
            return self.create_error_report(error_msg)
        finally:
            self.log_finish()

    return wrapper


class BaseCommand(ABC):
    """Abstract base class defining the contract for all workbench commands."""

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.logger = logger

    @property
    @abstractmethod
    def command_id(self) -> str:
        """Return the command name used on the command line."""
        pass

    def create_base_report(self, headers=('key', 'value')) -> CommandReport:
        return CommandReport(command=self.command_id, headers=headers)

    def create_error_report(self, error_message: str) -> CommandReport:
        report = self.create_base_report()
        report.mark_as_error(error_message)
        return report

    def validate_workspace(self) -> bool:
        return bool(self.workspace.systems)

    # Name resolution shared by the commands

    def resolve_env(self, name: Optional[str]) -> Optional[DiagramEnv]:
        return self.workspace.env(name) if name else None

    def scope(self, program: Program, env: Optional[DiagramEnv] = None) -> Scope:
        identifiers: Iterable[str] = env.names if env is not None else ()
        return Scope(program.system, functions=program.functions, identifiers=identifiers)

    def resolve_terms(self, texts: Sequence[str], program_name: Optional[str] = None,
                      env: Optional[DiagramEnv] = None) -> Tuple[Program, Tuple[Term, ...]]:
        """Closed terms together with the first program whose names they parse under."""
        if program_name:
            program = self.workspace.program(program_name)
            return program, tuple(parse_term(text, self.scope(program, env)) for text in texts)
        system = env.system if env is not None and env.system else None
        candidates = [p for p in self.workspace.programs.values() if system is None or p.system.name == system]
        if system is not None:
            candidates.append(Program.build('standard', (), self.workspace.system(system)))
        for program in candidates:
            try:
                terms = tuple(parse_term(text, self.scope(program, env)) for text in texts)
            except WorkspaceParseError:
                continue
            if not any(variables(term) for term in terms):
                return program, terms
        raise UnknownIdentifierError(', '.join(texts), 'closed term over the workspace')

    @abstractmethod
    @error_handler
    def run(self, **options) -> CommandReport:
        """Implementation of the command by concrete subclasses."""
        pass

    def log_start(self):
        self.logger.info(f'Starting command {self.command_id}...')

    def log_finish(self):
        self.logger.info(f'Finishing command {self.command_id}...')
