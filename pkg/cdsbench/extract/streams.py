"""Realizer streams: splitting, merging and pairing, as program-terms over the split library."""

import random
from dataclasses import dataclass
from typing import Mapping, Tuple

from ..data_system import COINDUCTIVE, DISCRIMINATOR, DataSystem
from ..errors import ExtractionError
from ..program import Equation, Program
from ..terms import Con, Fn, RegularCoterm, Term, Var

SPLIT_EVEN = 'split_even'
SPLIT_ODD = 'split_odd'
SPLIT_MERGE = 'split_merge'
SPLIT_ZEROS = 'split_zeros'
SPLIT_FUNCTIONS = (SPLIT_EVEN, SPLIT_ODD, SPLIT_MERGE, SPLIT_ZEROS)


@dataclass(frozen=True)
class StreamSignature:
    """The shape realizers need: c : B × S → S with at least two constants in B."""

    system: DataSystem
    constructor: str
    head: str
    stream: str
    false: str
    true: str

    @property
    def hd(self) -> str:
        return self.system.destructor_name(1)

    @property
    def tl(self) -> str:
        return self.system.destructor_name(2)

    def cons(self, head: Term, tail: Term) -> Con:
        return Con(self.constructor, (head, tail))

    def bit(self, index: int) -> Con:
        return Con((self.false, self.true)[index])

    def head_of(self, term: Term) -> Fn:
        return Fn(self.hd, (term,))

    def tail_of(self, term: Term) -> Fn:
        return Fn(self.tl, (term,))

    def delta(self, scrutinee: Term, branches: Mapping[str, Term], default: Term) -> Fn:
        """δ with one argument per constructor in vocabulary order; missing branches take `default`."""
        cases = tuple(branches.get(c.name, default) for c in self.system.vocabulary)
        return Fn(DISCRIMINATOR, (scrutinee,) + cases)

    def term_sort(self, term: Term, sorts: Mapping[str, str]) -> str:
        """B or S for a program-term; unknown variables and defined functions are streams."""
        if isinstance(term, Var):
            return sorts.get(term.name, self.stream)
        if isinstance(term, Con):
            return self.stream if term.name == self.constructor else self.head
        if term.name == self.hd:
            return self.head
        if term.name == self.tl:
            return self.stream
        if term.name == DISCRIMINATOR and len(term.args) > 1:
            return self.term_sort(term.args[1], sorts)
        return self.stream


def stream_signature(ds: DataSystem) -> StreamSignature:
    constructor = ds.stream_constructor
    if constructor is None or constructor.arity != 2:
        raise ExtractionError(f'system {ds.name} has no binary stream constructor for realizers')
    types = ds.types_of(constructor.name)
    if len(types) != 1 or types[0].result.kind != COINDUCTIVE or types[0].arguments[1] != types[0].result:
        raise ExtractionError(f'{constructor.name} of {ds.name} is not typed B × S → S with S coinductive')
    head, stream = types[0].arguments[0], types[0].result
    constants = [t.constructor.name for t in ds.types_for(head) if not t.arguments]
    if head.kind == COINDUCTIVE or len(constants) < 2:
        raise ExtractionError(f'{head.name} of {ds.name} needs two constants to carry head bits')
    return StreamSignature(ds, constructor.name, head.name, stream.name, constants[0], constants[1])


def even_term(sigma: Term) -> Fn:
    return Fn(SPLIT_EVEN, (sigma,))


def odd_term(sigma: Term) -> Fn:
    return Fn(SPLIT_ODD, (sigma,))


def merge_term(sigma: Term, tau: Term) -> Fn:
    return Fn(SPLIT_MERGE, (sigma, tau))


def zeros_term() -> Fn:
    return Fn(SPLIT_ZEROS, ())


def split_term(sigma: Term, index: int) -> Term:
    """σ_i: σ_0 = even σ, σ_0′ = odd σ, σ_{i+1} = even σ_i′, σ_{i+1}′ = odd σ_i′."""
    if index < 0:
        raise ValueError('split index must be non-negative')
    primed = sigma
    for _ in range(index):
        primed = odd_term(primed)
    return even_term(primed)


def pair_term(first: Term, second: Term) -> Fn:
    """The stream whose σ_0 is `first` and σ_1 is `second`."""
    return merge_term(first, merge_term(second, zeros_term()))


def split_position(index: int) -> Tuple[int, int]:
    """σ_i reads source positions congruent to 2^i − 1 modulo 2^(i+1)."""
    return 2 ** index - 1, 2 ** (index + 1)


def split_equations(signature: StreamSignature) -> Tuple[Equation, ...]:
    """even, odd, merge and the all-zero stream, in destructor form over the system's own names."""
    x, y = Var('x'), Var('y')
    hd, tl = signature.head_of, signature.tail_of
    return (
        Equation(SPLIT_EVEN, (x,), hd(x), signature.hd),
        Equation(SPLIT_EVEN, (x,), even_term(tl(tl(x))), signature.tl),
        Equation(SPLIT_ODD, (x,), even_term(tl(x))),
        Equation(SPLIT_MERGE, (x, y), hd(x), signature.hd),
        Equation(SPLIT_MERGE, (x, y), merge_term(y, tl(x)), signature.tl),
        Equation(SPLIT_ZEROS, (), signature.bit(0), signature.hd),
        Equation(SPLIT_ZEROS, (), zeros_term(), signature.tl),
    )


def with_split_library(program: Program) -> Program:
    """`program` extended by the split functions, unless it defines them already."""
    signature = stream_signature(program.system)
    missing = [e for e in split_equations(signature) if e.function not in program.functions]
    if not missing:
        return program
    return program.with_equations(missing)


def random_regular_stream(rng: random.Random, ds: DataSystem, max_prefix: int = 6,
                          max_cycle: int = 6) -> RegularCoterm:
    """prefix·cycle^ω with uniformly drawn bits and lengths; the cycle is never empty."""
    signature = stream_signature(ds)
    bits = (signature.false, signature.true)
    prefix = [rng.choice(bits) for _ in range(rng.randint(0, max_prefix))]
    cycle = [rng.choice(bits) for _ in range(rng.randint(1, max_cycle))]
    return RegularCoterm.stream(prefix, cycle)
