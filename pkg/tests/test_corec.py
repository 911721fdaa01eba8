import pytest

from cdsbench.corec import (
    Composition,
    CorecClause,
    CorecSchema,
    DefinedComponent,
    DestructorComponent,
    Projection,
    check_primitive_corecursive,
    compile_schema,
    component_to_term,
    term_to_component,
)
from cdsbench.errors import SchemaError
from cdsbench.library import NON_EXAMPLES, STOCK, library_entry
from cdsbench.syntax import parse_workspace
from cdsbench.terms import Fn, Var


def _program(workspace, body: str, name: str = 'p'):
    return parse_workspace(f'program {name} over STREAMS {{\n{body}\n}}', workspace).program(name)


@pytest.mark.parametrize('name', STOCK)
def test_stock_programs_are_primitive_corecursive(workspace, name):
    verdict = check_primitive_corecursive(workspace.program(name))
    assert verdict.accepted, verdict.reason
    assert str(verdict) == 'primitive-corecursive'


@pytest.mark.parametrize('name', NON_EXAMPLES)
def test_non_examples_are_rejected(workspace, name):
    verdict = check_primitive_corecursive(workspace.program(name))
    assert not verdict.accepted
    assert verdict.schema is None


@pytest.mark.parametrize('name, reason', [
    ('morse_thue', 'recursive occurrence of mt under merge in tl'),
    ('pattern_flip', 'pattern-matching definition of pflip is not in corecurrence form'),
    ('b', 'pattern-matching definition of b is not in corecurrence form'),
    ('divergence', 'pattern-matching definition of f is not in corecurrence form'),
    ('ind', 'recursive occurrence of ind in pi1'),
])
def test_rejection_reasons(workspace, name, reason):
    verdict = check_primitive_corecursive(workspace.program(name))
    assert verdict.reason == reason
    assert str(verdict) == f'rejected({reason})'


def test_forward_references_are_rejected(workspace):
    program = _program(workspace, 'principal g;\n g(x) = h(x);\n h(x) = x;')
    verdict = check_primitive_corecursive(program)
    assert verdict.reason == 'forward reference to h in the definition of g'
    assert verdict.equation.function == 'g'


def test_flip_schema_slots(workspace):
    verdict = check_primitive_corecursive(workspace.program('flip'))
    assert verdict.schema.form == 'destructor'
    assert verdict.schema.principal == 'flip'
    assert ('flip', 'tl: ℓ = flip, g = flip(tl(x))') in verdict.slots


def test_alternate_schema_holds_both_functions(workspace):
    schema = check_primitive_corecursive(workspace.program('alternate')).schema
    assert [clause.name for clause in schema.functions] == ['alt', 'alt_flip']
    with pytest.raises(SchemaError, match='has no function nope'):
        schema.clause('nope')


def test_morse_thue_helpers_stay_in_the_prelude(workspace):
    program = _program(workspace, '\n'.join([
        'principal twice;',
        'hd(not(x)) = delta(hd(x), 1, 0, hd(x));',
        'tl(not(x)) = not(tl(x));',
        'hd(twice(x)) = hd(x);',
        'tl(twice(x)) = twice(not(tl(x)));',
    ]))
    schema = check_primitive_corecursive(program).schema
    assert [clause.name for clause in schema.functions] == ['twice']
    assert {equation.function for equation in schema.prelude} == {'not'}


@pytest.mark.parametrize('name', ['flip', 'even', 'merge', 'alternate', 'zeros'])
def test_compiled_schemas_give_back_the_program(workspace, name):
    program = workspace.program(name)
    schema = library_entry(name).schema
    assert compile_schema(schema, program.system).defined_equations == program.defined_equations


def test_compiling_an_undefined_component_fails(streams):
    clause = CorecClause('g', ('x',), body=Composition(DefinedComponent('h'), (Projection(0),)))
    with pytest.raises(SchemaError, match='g refers to undefined component h'):
        compile_schema(CorecSchema('bad', (clause,), 'g'), streams)


def test_components_and_terms_correspond(streams):
    term = Fn('hd', (Fn('tl', (Var('y'),)),))
    component = term_to_component(term, ('x', 'y'), streams)
    assert component == Composition(DestructorComponent(1), (Composition(DestructorComponent(2), (Projection(1),)),))
    assert component_to_term(component, ('x', 'y'), streams) == term


def test_stray_variables_are_not_components(streams):
    with pytest.raises(SchemaError, match='variable z is not a parameter'):
        term_to_component(Var('z'), ('x',), streams)


WORDS = """
system WORDS {
    coinductive J;
    constructor s : J -> J;
    constructor t : J -> J;
}
"""

COPY = 'principal copy;\ncopy(x) = delta(x, s(copy(pi1(x))), t(copy(pi1(x))));'
SHIFTED = '\n'.join([
    'principal sw;',
    'sw(x) = delta(pi1(x), s(tw(pi1(x))), t(sw(pi1(x))));',
    'tw(x) = delta(x, s(sw(pi1(x))), t(tw(pi1(x))));',
])


def _words(workspace, body: str, name: str = 'p'):
    return parse_workspace(f'{WORDS}program {name} over WORDS {{\n{body}\n}}', workspace).program(name)


def test_cocase_over_several_constructors(workspace):
    verdict = check_primitive_corecursive(_words(workspace, COPY))
    assert verdict.accepted, verdict.reason
    assert verdict.schema.form == 'cocase'
    clause = verdict.schema.clause('copy')
    assert clause.selector == Projection(0)
    assert [branch.constructor for branch in clause.branches] == ['s', 't']
    assert ('copy', 'h = x') in verdict.slots
    assert ('copy', 's.1: ℓ = copy, g = copy(pi1(x))') in verdict.slots


def test_mutual_cocase_with_a_destructor_selector(workspace):
    verdict = check_primitive_corecursive(_words(workspace, SHIFTED))
    assert verdict.accepted, verdict.reason
    assert [clause.name for clause in verdict.schema.functions] == ['sw', 'tw']
    assert verdict.schema.clause('sw').selector == Composition(DestructorComponent(1), (Projection(0),))
    assert ('tw', 's.1: ℓ = sw, g = sw(pi1(x))') in verdict.slots


@pytest.mark.parametrize('body', [COPY, SHIFTED])
def test_compiled_cocase_schemas_give_back_the_program(workspace, body):
    program = _words(workspace, body)
    schema = check_primitive_corecursive(program).schema
    assert compile_schema(schema, program.system).defined_equations == program.defined_equations


@pytest.mark.parametrize('body, reason', [
    ('principal swap;\nswap(x) = delta(x, t(swap(pi1(x))), s(swap(pi1(x))));',
     'cocase branch for s in swap is t(swap(pi1(x))), not a s cell'),
    ('principal copy;\ncopy(x) = delta(x, s(pi1(x)), t(copy(pi1(x))));',
     's.1 of copy is not a corecursive call'),
    ('principal copy;\ncopy(x) = delta(copy(x), s(copy(pi1(x))), t(copy(pi1(x))));',
     'recursive occurrence in the selector of copy'),
])
def test_cocase_rejections(workspace, body, reason):
    verdict = check_primitive_corecursive(_words(workspace, body))
    assert verdict.reason == reason
