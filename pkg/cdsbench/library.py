"""Stock corpus: the corecursive library, the split/merge realizer library and the non-examples."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

from .corec import CorecSchema, ProductivityVerdict, check_primitive_corecursive
from .log_config import setup_logging
from .program import Program
from .syntax import Workspace, parse_workspace

logger = setup_logging()

SOURCE = r"""
# Boolean streams over 0, 1 and cons, observed through hd and tl
system STREAMS {
    inductive B;
    coinductive S;
    constructor 0 : B;
    constructor 1 : B;
    constructor cons : B * S -> S;
    destructors hd, tl;
}

system NAT {
    inductive N;
    constructor 0 : N;
    constructor s : N -> N;
}

program flip over STREAMS {
    principal flip;
    hd(flip(x)) = delta(hd(x), 1, 0, hd(x));
    tl(flip(x)) = flip(tl(x));
}

program even over STREAMS {
    principal even;
    hd(even(x)) = hd(x);
    tl(even(x)) = even(tl(tl(x)));
}

program odd over STREAMS {
    principal odd;
    hd(odd(x)) = hd(tl(x));
    tl(odd(x)) = odd(tl(tl(x)));
}

program merge over STREAMS {
    principal merge;
    hd(merge(x, y)) = hd(x);
    tl(merge(x, y)) = merge(y, tl(x));
}

program zeros over STREAMS {
    principal zeros;
    hd(zeros) = 0;
    tl(zeros) = zeros;
}

program ones over STREAMS {
    principal ones;
    hd(ones) = 1;
    tl(ones) = ones;
}

program identity over STREAMS {
    principal id;
    hd(id(x)) = hd(x);
    tl(id(x)) = id(tl(x));
}

program zipxor over STREAMS {
    principal xor;
    hd(xor(x, y)) = delta(hd(x), hd(y), delta(hd(y), 1, 0, hd(y)), hd(x));
    tl(xor(x, y)) = xor(tl(x), tl(y));
}

program alternate over STREAMS {
    principal alt;
    hd(alt(x)) = hd(x);
    tl(alt(x)) = alt_flip(tl(x));
    hd(alt_flip(x)) = delta(hd(x), 1, 0, hd(x));
    tl(alt_flip(x)) = alt(tl(x));
}

# Realizer plumbing used by extracted programs
program splits over STREAMS {
    principal split_even;
    hd(split_even(x)) = hd(x);
    tl(split_even(x)) = split_even(tl(tl(x)));
    split_odd(x) = split_even(tl(x));
    hd(split_merge(x, y)) = hd(x);
    tl(split_merge(x, y)) = split_merge(y, tl(x));
    hd(split_zeros) = 0;
    tl(split_zeros) = split_zeros;
}

program pattern_flip over STREAMS {
    principal pflip;
    pflip(0 : x) = 1 : pflip(x);
    pflip(1 : x) = 0 : pflip(x);
}

# Productive exactly on pairs of equal streams
program b over STREAMS {
    principal b;
    b(0 : x, 0 : y) = 0 : b(x, y);
    b(1 : x, 1 : y) = 1 : b(x, y);
}

program morse_thue over STREAMS {
    principal mt;
    hd(merge(x, y)) = hd(x);
    tl(merge(x, y)) = merge(y, tl(x));
    hd(not(x)) = delta(hd(x), 1, 0, hd(x));
    tl(not(x)) = not(tl(x));
    mt = 1 : merge(mt, not(mt));
}

program divergence over NAT {
    principal f;
    f(0) = 0;
    f(s(s(x))) = f(s(s(s(x))));
}

program ind over NAT {
    principal ind;
    ind = s(ind);
}

env flip_example over STREAMS {
    v_a = 0 : v_b;
    v_b = 1 : v_a;
}

env alternating over STREAMS {
    a = rec r. 0 : 1 : r;
    a_late = 0 : 1 : 0 : 0 : rec r. 0 : 1 : r;
    z = rec r. 0 : r;
}
"""

STOCK = ('flip', 'even', 'odd', 'merge', 'zeros', 'ones', 'identity', 'zipxor', 'alternate')
NON_EXAMPLES = ('pattern_flip', 'b', 'morse_thue', 'divergence', 'ind')
SPLIT_LIBRARY = 'splits'


@dataclass(frozen=True)
class LibraryEntry:
    name: str
    program: Program
    schema: Optional[CorecSchema] = None
    verdict: Optional[ProductivityVerdict] = None


@lru_cache(maxsize=None)
def library_workspace() -> Workspace:
    return parse_workspace(SOURCE)


def stream_program(name: str) -> Program:
    return library_workspace().program(name)


def split_library() -> Program:
    return stream_program(SPLIT_LIBRARY)


def entry_for(program: Program) -> LibraryEntry:
    verdict = check_primitive_corecursive(program)
    return LibraryEntry(program.name, program, verdict.schema, verdict)


@lru_cache(maxsize=None)
def _entries() -> Dict[str, LibraryEntry]:
    workspace = library_workspace()
    return {name: entry_for(workspace.program(name)) for name in STOCK + NON_EXAMPLES}


def library_entry(name: str) -> LibraryEntry:
    entries = _entries()
    if name in entries:
        return entries[name]
    return entry_for(library_workspace().program(name))


def stock_library() -> List[LibraryEntry]:
    """The accepted corpus used by the roundtrip, in a fixed order."""
    entries = [library_entry(name) for name in STOCK]
    rejected = [e.name for e in entries if e.schema is None]
    if rejected:
        logger.error(f'Stock library entries rejected by the recognizer: {rejected}')
    return entries


def entries_for(workspace: Workspace) -> List[LibraryEntry]:
    """Library entries for every program of a user workspace."""
    return [entry_for(program) for program in workspace.programs.values()]
