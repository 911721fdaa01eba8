"""The compile → prove → check → normalize → extract → bisimulate pipeline over a corpus."""

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..config import config
from ..corec import CorecSchema, check_primitive_corecursive, compile_schema
from ..errors import WorkbenchError
from ..evaluation import DiagramEnv, EvalSession, Generator
from ..log_config import setup_logging
from ..logic.checker import check_proof
from ..logic.derivation import Derivation
from ..logic.formulas import Atom
from ..logic.normalize import assert_sp_proof, find_detour, normalize
from ..program import Program
from ..terms import Fn, FreshNames, Var
from .extraction import ExtractionResult, extract
from .prove import prove_corec
from .streams import random_regular_stream, stream_signature

logger = setup_logging()

STAGES = ('recognize', 'compile', 'prove', 'check', 'normalize', 'sp-scan', 'extract', 'bisim')

PASS = 'pass'
FAIL = 'fail'
SKIP = 'skipped'


@dataclass(frozen=True)
class StageOutcome:
    stage: str
    status: str
    detail: str = ''


@dataclass
class RoundtripRow:
    entry: str
    outcomes: List[StageOutcome] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(o.status == PASS for o in self.outcomes)

    @property
    def failed_stage(self) -> Optional[str]:
        return next((o.stage for o in self.outcomes if o.status == FAIL), None)

    def status(self, stage: str) -> str:
        return next((o.status for o in self.outcomes if o.stage == stage), SKIP)


@dataclass
class RoundtripReport:
    depth: int
    inputs: int
    rows: List[RoundtripRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


class _StageFailure(Exception):
    pass


class _Pipeline:
    """One library entry pushed through every stage; state is kept between stages."""

    def __init__(self, name: str, program: Program, depth: int, inputs: int, budget: int, rng: random.Random,
                 schema: Optional[CorecSchema] = None):
        self.name = name
        self.program = program
        self.ds = program.system
        self.depth = depth
        self.inputs = inputs
        self.budget = budget
        self.rng = rng
        self.schema = schema
        self.compiled: Optional[Program] = None
        self.proof: Optional[Derivation] = None
        self.normal: Optional[Derivation] = None
        self.extracted: Optional[ExtractionResult] = None

    def recognize(self) -> str:
        if self.schema is None:
            verdict = check_primitive_corecursive(self.program)
            if not verdict.accepted:
                raise _StageFailure(verdict.reason)
            self.schema = verdict.schema
        return f'{len(self.schema.functions)} function(s) in the principal group'

    def compile(self) -> str:
        self.compiled = compile_schema(self.schema, self.ds)
        return f'{len(self.compiled.defined_equations)} equations'

    def prove(self) -> str:
        self.proof = prove_corec(self.schema, self.ds)
        return f'size {self.proof.size}'

    def check(self) -> str:
        judgment = check_proof(self.ds, self.compiled, self.proof)
        if not judgment.ok:
            raise _StageFailure(str(judgment.violation))
        return str(judgment)

    def normalize(self) -> str:
        self.normal = normalize(self.proof)
        judgment = check_proof(self.ds, self.compiled, self.normal)
        if not judgment.ok:
            raise _StageFailure(f'normal form does not check: {judgment.violation}')
        if find_detour(self.normal) is not None:
            raise _StageFailure('normal form still contains a detour')
        return f'size {self.proof.size} → {self.normal.size}'

    def sp_scan(self) -> str:
        scan = assert_sp_proof(self.normal)
        if not scan.ok:
            raise _StageFailure(f'{scan.rule} at {list(scan.path)} concludes a formula that is not strongly positive')
        return 'ok'

    def extract(self) -> str:
        self.extracted = extract(self.normal, self.compiled)
        return f'{self.extracted.principal}({", ".join(self.extracted.parameters)})'

    def bisim(self) -> str:
        clause = self.schema.clause(self.schema.principal)
        extracted = self.extracted.program
        taken = set(self.program.functions) | set(extracted.functions) | set(self.ds.standard_names)
        taken |= {c.name for c in self.ds.vocabulary}
        names = FreshNames(taken)
        inputs = {p: names.fresh(f'in_{p}') for p in clause.params}
        original, candidate = names.fresh('original'), names.fresh('extracted')
        arguments = tuple(self._argument(p, inputs) for p in self.extracted.parameters)

        for trial in range(self.inputs):
            bindings: Dict[str, object] = {inputs[p]: random_regular_stream(self.rng, self.ds) for p in clause.params}
            bindings[original] = Generator(self.program, tuple(inputs[p] for p in clause.params), clause.name)
            bindings[candidate] = Generator(extracted, arguments)
            env = DiagramEnv.of(f'{self.name}-{trial}', bindings, self.ds.name)
            outcome = EvalSession(self.program, env, self.budget).compare(Fn(original, ()), Fn(candidate, ()),
                                                                          self.depth)
            if not outcome.equal:
                raise _StageFailure(f'input {trial}: {outcome}')
        return f'{self.inputs} input(s) equal to depth {self.depth}'

    def _argument(self, parameter: str, inputs: Dict[str, str]) -> str:
        if parameter in inputs:
            return inputs[parameter]
        formula = dict(self.extracted.assumptions).get(parameter)
        stream = stream_signature(self.ds).stream
        if isinstance(formula, Atom) and formula.predicate == stream and isinstance(formula.term, Var) \
                and formula.term.name in inputs:
            return inputs[formula.term.name]
        raise _StageFailure(f'extracted parameter {parameter} has no input stream')

    def run(self) -> RoundtripRow:
        row = RoundtripRow(self.name)
        failed = False
        for stage in STAGES:
            if failed:
                row.outcomes.append(StageOutcome(stage, SKIP))
                continue
            try:
                detail = getattr(self, stage.replace('-', '_'))()
                row.outcomes.append(StageOutcome(stage, PASS, detail))
                logger.info(f'Roundtrip {self.name}: {stage} passed ({detail})')
            except _StageFailure as failure:
                failed = True
                row.outcomes.append(StageOutcome(stage, FAIL, str(failure)))
                logger.info(f'Roundtrip {self.name}: {stage} failed: {failure}')
            except WorkbenchError as error:
                failed = True
                row.outcomes.append(StageOutcome(stage, FAIL, f'{type(error).__name__}: {error}'))
                logger.info(f'Roundtrip {self.name}: {stage} raised {type(error).__name__}: {error}')
        return row


def roundtrip_report(entries: Sequence, depth: Optional[int] = None, inputs: Optional[int] = None,
                     seed: Optional[int] = None, budget: Optional[int] = None) -> RoundtripReport:
    """Push every library entry through all stages; a failed stage skips the ones after it.

    Entries are `LibraryEntry`-like objects with `name`, `program` and an
    optional recognized `schema`.
    """
    settings = config.roundtrip
    depth = settings.depth if depth is None else depth
    inputs = settings.inputs if inputs is None else inputs
    seed = settings.seed if seed is None else seed
    budget = budget or settings.budget

    report = RoundtripReport(depth, inputs)
    for index, entry in enumerate(entries):
        rng = random.Random(seed + index)
        pipeline = _Pipeline(entry.name, entry.program, depth, inputs, budget, rng, getattr(entry, 'schema', None))
        report.rows.append(pipeline.run())
    passed = sum(row.ok for row in report.rows)
    logger.info(f'Roundtrip at depth {depth}: {passed}/{len(report.rows)} entries passed every stage')
    return report
