import sys
from typing import Optional, Sequence

import click
from rich.console import Console
from rich.table import Table
from rich.text import Text

from .commands import run_command
from .config import REPORT_FORMATS
from .errors import WorkbenchError
from .library import library_workspace
from .log_config import setup_logging
from .models import CommandReport
from .syntax import Workspace, parse_file

logger = setup_logging()


def load_workspace(paths: Sequence[str]) -> Workspace:
    """The stock library with every workspace file layered on top, in order."""
    workspace = library_workspace()
    for path in paths:
        logger.info(f'Loading workspace file {path}')
        workspace = parse_file(path, workspace)
    return workspace


def render_tagged(report: CommandReport) -> str:
    lines = [f'command\t{report.command}', f"verdict\t{'positive' if report.verdict else 'negative'}"]
    if report.summary is not None:
        lines.append(f'summary\t{report.summary}')
    lines.extend(f'{key}\t{value}' for key, value in report.rows)
    if isinstance(report.payload, str):
        lines.extend(f'payload\t{line}' for line in report.payload.splitlines())
    return '\n'.join(lines)


def render_text(report: CommandReport, console: Console):
    if report.summary is not None:
        console.print(Text(report.summary, style='bold red' if not report.verdict else 'bold'))
    if report.rows:
        table = Table(*report.headers, show_header=True, header_style='bold')
        for key, value in report.rows:
            table.add_row(Text(key), Text(value))
        console.print(table)
    if isinstance(report.payload, str):
        console.print(Text(report.payload))


def emit(ctx: click.Context, command: str, **options):
    """Run a command against the context's workspace and exit with its verdict."""
    try:
        workspace = load_workspace(ctx.obj['paths'])
    except WorkbenchError as e:
        raise click.ClickException(str(e))
    report = run_command(workspace, command, **options)
    if ctx.obj['format'] == 'tagged':
        click.echo(render_tagged(report))
    else:
        render_text(report, Console(highlight=False, soft_wrap=True))
    sys.exit(report.exit_code)


@click.group()
@click.option('--workspace', '-w', 'paths', multiple=True, type=click.Path(exists=True, dir_okay=False),
              help='Workspace file (.cds); may be repeated. The stock library is always loaded.')
@click.option('--format', 'fmt', type=click.Choice(REPORT_FORMATS), default='text', show_default=True)
@click.pass_context
def cli(ctx: click.Context, paths, fmt):
    """Workbench for equational programs over inductive and coinductive data."""
    ctx.ensure_object(dict)
    ctx.obj['paths'] = paths
    ctx.obj['format'] = fmt


@cli.command()
@click.pass_context
def check(ctx):
    """Validate every system, program and environment."""
    emit(ctx, 'check')


@cli.command('eval')
@click.argument('term')
@click.option('--depth', type=click.IntRange(min=0), default=None)
@click.option('--budget', type=click.IntRange(min=1), default=None)
@click.option('--env', default=None)
@click.option('--program', '-p', default=None)
@click.pass_context
def eval_command(ctx, term, depth, budget, env, program):
    """Observe TERM to a finite depth."""
    emit(ctx, 'eval', term=term, depth=depth, budget=budget, env=env, program=program)


@cli.command()
@click.argument('left')
@click.argument('right')
@click.option('--depth', type=click.IntRange(min=0), default=None)
@click.option('--budget', type=click.IntRange(min=1), default=None)
@click.option('--env', default=None)
@click.option('--program', '-p', default=None)
@click.pass_context
def bisim(ctx, left, right, depth, budget, env, program):
    """Compare LEFT and RIGHT under every deep destructor."""
    emit(ctx, 'bisim', left=left, right=right, depth=depth, budget=budget, env=env, program=program)


@cli.command()
@click.argument('program')
@click.pass_context
def productive(ctx, program):
    """Check PROGRAM against the primitive corecurrence schema."""
    emit(ctx, 'productive', program=program)


@cli.command('prove-corec')
@click.argument('program')
@click.option('--using', multiple=True, help='Proof of a component function; may be repeated.')
@click.option('--name', default=None, help='Name of the generated proof block.')
@click.pass_context
def prove_corec(ctx, program, using, name):
    emit(ctx, 'prove-corec', program=program, using=using, name=name)


@cli.command('check-proof')
@click.argument('name')
@click.pass_context
def check_proof(ctx, name):
    emit(ctx, 'check-proof', proof=name)


@cli.command()
@click.argument('name')
@click.option('--limit', type=click.IntRange(min=1), default=None, help='Detour reductions before giving up.')
@click.pass_context
def normalize(ctx, name, limit):
    emit(ctx, 'normalize', proof=name, limit=limit)


@cli.command()
@click.argument('formula')
@click.option('--system', default=None)
@click.pass_context
def classify(ctx, formula, system):
    """Polarity class of FORMULA."""
    emit(ctx, 'classify', formula=formula, system=system)


@cli.command()
@click.argument('name')
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
def extract(ctx, name, out):
    """Extract a primitive corecursive program from proof NAME."""
    emit(ctx, 'extract', proof=name, out=out)


@cli.command()
@click.option('--depth', type=click.IntRange(min=0), default=None)
@click.option('--inputs', type=click.IntRange(min=1), default=None)
@click.option('--seed', type=int, default=None)
@click.option('--include', multiple=True, help='Workspace program to add to the stock corpus.')
@click.pass_context
def roundtrip(ctx, depth, inputs, seed, include):
    """Compile, prove, extract and compare every corpus entry."""
    emit(ctx, 'roundtrip', depth=depth, inputs=inputs, seed=seed, include=include)


def main(argv: Optional[Sequence[str]] = None):
    cli.main(args=argv, prog_name='workbench')
