import random

import pytest

from cdsbench.evaluation import DiagramEnv, Generator, observe, render_approximation
from cdsbench.extract import random_regular_stream
from cdsbench.library import NON_EXAMPLES, STOCK, entries_for, library_entry, library_workspace, stock_library
from cdsbench.syntax import parse_workspace
from cdsbench.terms import Fn


def test_library_workspace_is_shared():
    assert library_workspace() is library_workspace()
    assert set(STOCK + NON_EXAMPLES) <= set(library_workspace().programs)


def test_stock_entries_carry_schemas():
    entries = stock_library()
    assert [entry.name for entry in entries] == list(STOCK)
    assert all(entry.schema is not None and entry.verdict.accepted for entry in entries)


def test_non_examples_carry_reasons():
    for name in NON_EXAMPLES:
        entry = library_entry(name)
        assert entry.schema is None
        assert entry.verdict.reason


def test_entries_for_a_user_workspace(workspace):
    source = 'program twice over STREAMS {\n    principal tw;\n    hd(tw(x)) = hd(x);\n    tl(tw(x)) = tw(x);\n}'
    extended = parse_workspace(source, workspace)
    entries = {entry.name: entry for entry in entries_for(extended)}
    assert entries['twice'].verdict.accepted
    assert not entries['b'].verdict.accepted
    assert library_entry('flip').program is workspace.program('flip')


@pytest.mark.acceptance
def test_accepted_programs_never_stall(streams):
    rng = random.Random(11)
    for entry in stock_library():
        params = entry.schema.clause(entry.schema.principal).params
        for trial in range(100):
            bindings = {f'in_{p}': random_regular_stream(rng, streams) for p in params}
            bindings['out'] = Generator(entry.program, tuple(f'in_{p}' for p in params))
            env = DiagramEnv.of(f'{entry.name}-{trial}', bindings, 'STREAMS')
            approx = observe(entry.program, env, Fn('out', ()), 64, 100_000)
            assert '<stall' not in render_approximation(approx), entry.name
