"""Derivations as s-expressions: `(rule "conclusion" (:key value …) premise…)`."""

from typing import Any, Callable, List

from sexpdata import Symbol, dumps, loads

from ..errors import WorkspaceParseError
from ..logic.derivation import FORMULA_ATTRIBUTES, TERM_ATTRIBUTES, Derivation
from ..logic.formulas import Formula, render_formula
from ..terms import Term, render_term


def _encode(key: str, value: Any) -> Any:
    if key in TERM_ATTRIBUTES:
        return render_term(value)
    if key in FORMULA_ATTRIBUTES:
        return render_formula(value)
    if key == 'position':
        return list(value)
    if key == 'cases':
        return [[list(eigens), list(discharges)] for eigens, discharges in value]
    return value


def _head(d: Derivation) -> str:
    attributes: List[Any] = []
    for key, value in d.attributes:
        attributes.extend([Symbol(':' + key), _encode(key, value)])
    return f'({d.rule} {dumps(render_formula(d.conclusion))} {dumps(attributes)}'


def dump_derivation(d: Derivation, indent: int = 0) -> str:
    """Indented text; one node per line, premises nested below their conclusion."""
    lines = [_head(d)]
    for premise in d.premises:
        lines.append(' ' * (indent + 2) + dump_derivation(premise, indent + 2))
    return '\n'.join(lines) + ')'


def _plain(item: Any) -> Any:
    return str(item) if isinstance(item, Symbol) else item


def _name(item: Any) -> str:
    if isinstance(item, Symbol):
        return str(item)
    raise WorkspaceParseError(f'expected a symbol, found {item!r}')


def load_derivation(text: str, parse_term: Callable[[str], Term],
                    parse_formula: Callable[[str], Formula]) -> Derivation:
    try:
        tree = loads(text, nil=None, true=None)
    except Exception as error:
        raise WorkspaceParseError(f'malformed proof s-expression: {error}')
    return _decode(tree, parse_term, parse_formula)


def _decode(tree: Any, parse_term, parse_formula) -> Derivation:
    if not isinstance(tree, list) or len(tree) < 3:
        raise WorkspaceParseError(f'a derivation node needs a rule, a conclusion and attributes: {tree!r}')
    rule, conclusion, raw_attributes, *premises = tree
    if not isinstance(conclusion, str) or isinstance(conclusion, Symbol):
        raise WorkspaceParseError(f'conclusion of {_name(rule)} must be a string')
    if not isinstance(raw_attributes, list) or len(raw_attributes) % 2:
        raise WorkspaceParseError(f'attributes of {_name(rule)} must be a :key value list')

    attributes = []
    for key_symbol, value in zip(raw_attributes[::2], raw_attributes[1::2]):
        key = _name(key_symbol)
        if not key.startswith(':'):
            raise WorkspaceParseError(f'attribute key {key} must start with a colon')
        key = key[1:]
        if key in TERM_ATTRIBUTES:
            value = parse_term(value)
        elif key in FORMULA_ATTRIBUTES:
            value = parse_formula(value)
        elif key == 'position':
            value = tuple(value)
        elif key == 'cases':
            value = tuple(
                (tuple(map(_plain, eigens)), tuple(map(_plain, discharges))) for eigens, discharges in value
            )
        elif isinstance(value, Symbol):
            value = str(value)
        attributes.append((key, value))

    return Derivation(
        _name(rule),
        parse_formula(conclusion),
        tuple(_decode(p, parse_term, parse_formula) for p in premises),
        tuple(attributes),
    )
