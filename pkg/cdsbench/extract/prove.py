"""Proofs of S(f(x⃗)) from S(x⃗) for functions defined by primitive corecurrence."""

from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from ..corec import CorecClause, CorecSchema, check_primitive_corecursive, compile_schema
from ..data_system import DISCRIMINATOR, DataSystem
from ..errors import SchemaError, SubProofMissingError
from ..log_config import setup_logging
from ..logic import derivation as rules
from ..logic.derivation import (
    Derivation,
    assume,
    node,
    open_assumptions,
    substitute_assumption,
    substitute_variable,
    term_variables,
)
from ..logic.formulas import (
    Atom,
    Conjunction,
    Equality,
    Exists,
    Formula,
    conjoin,
    disjoin,
    disjuncts,
    exists_all,
    substitute_formula,
)
from ..logic.theory import build_dcm
from ..program import Program
from ..terms import Con, Fn, FreshNames, Term, Var, function_names, render_term, substitute, variables
from .streams import stream_signature

logger = setup_logging()


def refl(term: Term) -> Derivation:
    return node(rules.REFL, Equality(term, term))


def and_intro(left: Derivation, right: Derivation) -> Derivation:
    return node(rules.AND_INTRO, Conjunction(left.conclusion, right.conclusion), left, right)


def and_elim(proof: Derivation, index: int) -> Derivation:
    conjunction = proof.conclusion
    part = conjunction.left if index == 0 else conjunction.right
    return node(rules.AND_ELIM, part, proof, index=index)


def conjunction_proof(proofs: Sequence[Derivation]) -> Derivation:
    """Right-nested and-intros, matching `conjoin`."""
    if len(proofs) == 1:
        return proofs[0]
    return and_intro(proofs[0], conjunction_proof(proofs[1:]))


def exists_intros(names: Sequence[str], body: Formula, witnesses: Sequence[Term], proof: Derivation) -> Derivation:
    """From a proof of body[names := witnesses] to ∃names. body, innermost quantifier first."""
    for position in reversed(range(len(names))):
        bound = dict(zip(names[:position], witnesses[:position]))
        conclusion = substitute_formula(exists_all(names[position:], body), bound)
        proof = node(rules.EXISTS_INTRO, conclusion, proof, witness=witnesses[position])
    return proof


def inject(parts: Sequence[Formula], index: int, proof: Derivation) -> Derivation:
    """Or-intros placing `proof` at `index` of the right-nested disjunction of `parts`."""
    if len(parts) == 1:
        return proof
    if index == 0:
        return node(rules.OR_INTRO, disjoin(parts), proof, index=0)
    return node(rules.OR_INTRO, disjoin(parts), inject(parts[1:], index - 1, proof), index=1)


def _quantified(formula: Formula) -> Tuple[List[str], Formula]:
    names = []
    while isinstance(formula, Exists):
        names.append(formula.var)
        formula = formula.body
    return names, formula


Hypotheses = Mapping[str, Derivation]


class CorecProver:
    """Builds the coinduction proof for one schema.

    The invariant is φ[z] = ⋁_j ∃y⃗. S(y_1) ∧ … ∧ S(y_k) ∧ f_j(y⃗) = z over
    the functions of the principal's group; components are proved from the
    S-hypotheses of their arguments.
    """

    def __init__(self, schema: CorecSchema, ds: DataSystem, sub_proofs: Optional[Mapping[str, Derivation]] = None,
                 names: Optional[FreshNames] = None):
        self.schema = schema
        self.ds = ds
        self.program = compile_schema(schema, ds)
        self.signature = stream_signature(ds)
        self.sub_proofs: Dict[str, Derivation] = dict(sub_proofs or {})
        self.group = tuple(c.name for c in schema.functions)
        used: Set[str] = set(self.program.functions) | set(ds.standard_names)
        for clause in schema.functions:
            used.update(clause.params)
        self.names = names or FreshNames(used)
        self.names.used |= used
        self.labels = FreshNames()

    @property
    def stream(self) -> str:
        return self.signature.stream

    def prove(self) -> Derivation:
        principal = self.schema.clause(self.schema.principal)
        hypotheses = {p: assume(self.labels.fresh(f's_{p}'), Atom(self.stream, Var(p))) for p in principal.params}
        goal = Fn(principal.name, tuple(Var(p) for p in principal.params))
        if principal.explicit:
            return self._defined(goal, self.stream, hypotheses, frozenset())
        for clause in self.schema.functions:
            if clause.explicit or clause.selector is not None or len(clause.branches) != 1:
                raise SchemaError(f'{clause.name} is not in destructor form; only destructor-form groups are proved')
        return self._coinduction(principal, goal, hypotheses)

    # Coinduction on the group invariant

    def _invariant(self) -> Tuple[str, List[Formula]]:
        z = self.names.fresh('z')
        parts = []
        for clause in self.schema.functions:
            ys = [self.names.fresh(f'y{i}') for i in range(1, len(clause.params) + 1)]
            conjuncts: List[Formula] = [Atom(self.stream, Var(y)) for y in ys]
            conjuncts.append(Equality(Fn(clause.name, tuple(Var(y) for y in ys)), Var(z)))
            parts.append(exists_all(ys, conjoin(conjuncts)))
        return z, parts

    def _coinduction(self, principal: CorecClause, goal: Fn, hypotheses: Hypotheses) -> Derivation:
        z, parts = self._invariant()
        phi = disjoin(parts)
        left = self._invariant_instance(parts, z, self.group.index(principal.name), goal.args, hypotheses)

        eigen = self.names.fresh('x')
        discharge = self.labels.fresh('a')
        hypothesis = substitute_formula(phi, {z: Var(eigen)})
        dcm = build_dcm(self.ds, self.stream, hypothesis, eigen)
        instances = [substitute_formula(part, {z: Var(eigen)}) for part in parts]
        right = self._cases(instances, 0, assume(discharge, hypothesis), dcm, eigen)

        logger.debug(f'Coinduction for {principal.name} over {len(parts)} invariant disjuncts')
        return node(
            rules.COINDUCTION, Atom(self.stream, goal), left, right,
            predicate=self.stream, var=z, formula=phi, eigen=eigen, discharge=discharge,
        )

    def _invariant_instance(self, parts: Sequence[Formula], z: str, index: int, witnesses: Sequence[Term],
                            hypotheses: Hypotheses) -> Derivation:
        """φ[f_index(w⃗)], from S-proofs of the witnesses and reflexivity."""
        call = Fn(self.group[index], tuple(witnesses))
        names, matrix = _quantified(parts[index])
        proofs = [self.component(w, self.stream, hypotheses) for w in witnesses]
        proofs.append(refl(call))
        chosen = exists_intros(names, substitute_formula(matrix, {z: call}), witnesses, conjunction_proof(proofs))
        return inject([substitute_formula(part, {z: call}) for part in parts], index, chosen)

    def _cases(self, instances: Sequence[Formula], index: int, major: Derivation, dcm: Formula,
               eigen: str) -> Derivation:
        if len(instances) == 1:
            return self._clause_case(index, major, dcm, eigen)
        first = self.labels.fresh('c')
        rest = self.labels.fresh('c')
        return node(
            rules.OR_ELIM, dcm, major,
            self._clause_case(index, assume(first, instances[0]), dcm, eigen),
            self._cases(instances[1:], index + 1, assume(rest, disjoin(instances[1:])), dcm, eigen),
            discharge0=first, discharge1=rest,
        )

    def _clause_case(self, index: int, major: Derivation, dcm: Formula, eigen: str) -> Derivation:
        clause = self.schema.functions[index]
        us = [self.names.fresh(f'u{i}') for i in range(1, len(clause.params) + 1)]

        def open_from(position: int, proof: Derivation) -> Derivation:
            if position == len(us):
                return self._decompose(clause, us, proof, dcm, eigen)
            formula: Exists = proof.conclusion
            opened = substitute_formula(formula.body, {formula.var: Var(us[position])})
            label = self.labels.fresh('e')
            minor = open_from(position + 1, assume(label, opened))
            return node(rules.EXISTS_ELIM, dcm, proof, minor, eigen=us[position], discharge=label)

        return open_from(0, major)

    def _decompose(self, clause: CorecClause, us: Sequence[str], body: Derivation, dcm: Formula,
                   eigen: str) -> Derivation:
        """From S(u_1) ∧ … ∧ f_j(u⃗) = x to the decomposition of x."""
        hypotheses = {}
        current = body
        for u in us:
            hypotheses[u] = and_elim(current, 0)
            current = and_elim(current, 1)

        rule = self.program.combined_rule(clause.name)
        if rule is None:
            raise SchemaError(f'{clause.name} has no combined destructor rule')
        mapping = {p.name: Var(u) for p, u in zip(rule.patterns, us)}
        head, tail = (substitute(arg, mapping) for arg in rule.rhs.args)
        if not isinstance(tail, Fn) or tail.name not in self.group:
            raise SchemaError(f'tail of {clause.name} is not a call into its group: {render_term(tail)}')
        call = Fn(clause.name, tuple(Var(u) for u in us))

        flipped = node(rules.EQ_SUBST, Equality(Var(eigen), call), current, refl(call), position=(0,))
        unfolded = node(
            rules.REWRITE, Equality(Var(eigen), Con(rule.rhs.name, (head, tail))), flipped,
            equation=clause.name, direction='lr', position=(1,),
        )

        (z0, z1), matrix = _quantified(dcm)
        parts = disjuncts(matrix.right.left, len(self.group))
        invariant = self._invariant_instance(parts, z1, self.group.index(tail.name), tail.args, hypotheses)
        proof = conjunction_proof([self.component(head, self.signature.head, hypotheses), invariant, unfolded])
        return exists_intros([z0, z1], matrix, [head, tail], proof)

    # Components

    def component(self, term: Term, predicate: str, hypotheses: Hypotheses,
                  visiting: frozenset = frozenset()) -> Derivation:
        """A derivation of predicate(term) from the S-hypotheses of the variables of `term`."""
        goal = Atom(predicate, term)
        if isinstance(term, Var):
            proof = hypotheses.get(term.name)
            if proof is None or proof.conclusion != goal:
                raise SchemaError(f'no hypothesis {predicate}({term.name})')
            return proof
        if isinstance(term, Con):
            for ctype in self.ds.types_of(term.name, result=predicate):
                if len(ctype.arguments) == len(term.args):
                    premises = [self.component(a, p.name, hypotheses, visiting)
                                for a, p in zip(term.args, ctype.arguments)]
                    return node(rules.DATA_INTRO, goal, *premises)
            raise SchemaError(f'{term.name} does not construct {predicate}')
        index = self.ds.destructor_index(term.name)
        if index is not None and len(term.args) == 1:
            return self._destructed(term, index, predicate, hypotheses, visiting)
        if term.name == DISCRIMINATOR:
            return self._by_cases(term, predicate, hypotheses, visiting)
        return self._defined(term, predicate, hypotheses, visiting)

    def _destructed(self, term: Fn, index: int, predicate: str, hypotheses: Hypotheses, visiting) -> Derivation:
        for source in self.ds.predicates:
            types = self.ds.types_for(source)
            if len(types) != 1 or len(types[0].arguments) < index:
                continue
            if types[0].arguments[index - 1].name != predicate:
                continue
            try:
                premise = self.component(term.args[0], source.name, hypotheses, visiting)
            except SchemaError:
                continue
            return node(rules.DATA_ELIM, Atom(predicate, term), premise, index=index)
        raise SchemaError(f'cannot prove {predicate}({render_term(term)}) by destructing its argument')

    def _by_cases(self, term: Fn, predicate: str, hypotheses: Hypotheses, visiting) -> Derivation:
        scrutinee, *branches = term.args
        position = {c.name: i for i, c in enumerate(self.ds.vocabulary)}
        for inductive in (p for p in self.ds.predicates if p.inductive):
            try:
                major = self.component(scrutinee, inductive.name, hypotheses, visiting)
            except SchemaError:
                continue
            var = self.names.fresh('v')
            formula = Atom(predicate, Fn(DISCRIMINATOR, (Var(var),) + tuple(branches)))
            cases = []
            proofs = []
            for ctype in self.ds.types_for(inductive):
                eigens = tuple(self.names.fresh('w') for _ in ctype.arguments)
                discharges = tuple(self.labels.fresh('h') for _ in ctype.arguments)
                cell = Con(ctype.constructor.name, tuple(Var(e) for e in eigens))
                premise = self.component(branches[position[ctype.constructor.name]], predicate, hypotheses, visiting)
                proofs.append(node(
                    rules.REWRITE, substitute_formula(formula, {var: cell}), premise,
                    equation=DISCRIMINATOR, direction='rl', position=(),
                ))
                cases.append((eigens, discharges))
            return node(
                rules.INDUCTION, Atom(predicate, term), major, *proofs,
                predicate=inductive.name, var=var, formula=formula, cases=tuple(cases),
            )
        raise SchemaError(f'the scrutinee of {render_term(term)} is not provably inductive data')

    def _corecursive(self, name: str) -> bool:
        if name in self.group:
            return not self.schema.clause(name).explicit
        unfolding = self._unfolding(name)
        return unfolding is None or name in function_names(unfolding[1])

    def _defined(self, term: Fn, predicate: str, hypotheses: Hypotheses, visiting) -> Derivation:
        name = term.name
        if self._corecursive(name) or name in visiting:
            return self._instantiate(self._sub_proof(name), term, predicate, hypotheses, visiting)
        patterns, rhs = self._unfolding(name)
        body = substitute(rhs, {p.name: a for p, a in zip(patterns, term.args)})
        premise = self.component(body, predicate, hypotheses, visiting | {name})
        return node(rules.REWRITE, Atom(predicate, term), premise, equation=name, direction='rl', position=())

    def _unfolding(self, name: str) -> Optional[Tuple[Tuple[Term, ...], Term]]:
        combined = self.program.combined_rule(name)
        if combined is not None:
            return combined.patterns, combined.rhs
        equations = self.program.equations_for(name)
        if len(equations) == 1 and equations[0].observer is None \
                and all(isinstance(p, Var) for p in equations[0].patterns):
            return equations[0].patterns, equations[0].rhs
        return None

    def _sub_proof(self, name: str) -> Derivation:
        """The supplied sub-proof, or one generated when `name` is itself primitive corecursive."""
        if name in self.sub_proofs:
            return self.sub_proofs[name]
        if name not in self.group and name in self.program.functions:
            helper = Program.build(f'{self.schema.name}.{name}', self.program.defined_equations, self.ds, name)
            verdict = check_primitive_corecursive(helper, self.ds)
            if verdict.accepted and verdict.schema.clause(name).explicit is False:
                proof = CorecProver(verdict.schema, self.ds, self.sub_proofs, self.names).prove()
                self.sub_proofs[name] = proof
                return proof
        raise SubProofMissingError(f'no sub-proof for the corecursive component {name}')

    def _instantiate(self, sub: Derivation, term: Fn, predicate: str, hypotheses: Hypotheses,
                     visiting) -> Derivation:
        """A sub-proof of P(g(y⃗)) from data-atoms, moved to g(t⃗) and grafted onto our hypotheses."""
        conclusion = sub.conclusion
        if not (isinstance(conclusion, Atom) and isinstance(conclusion.term, Fn)
                and conclusion.term.name == term.name and conclusion.predicate == predicate
                and all(isinstance(a, Var) for a in conclusion.term.args)):
            raise SubProofMissingError(f'sub-proof for {term.name} does not conclude {predicate}({term.name}(…))')
        params = [a.name for a in conclusion.term.args]
        taken = term_variables(sub) | set(self.names.used)
        for argument in term.args:
            taken |= variables(argument)
        staging = FreshNames(taken)
        staged = {p: staging.fresh(p) for p in params}
        proof = sub
        for p, q in staged.items():
            proof = substitute_variable(proof, p, Var(q))
        for p, argument in zip(params, term.args):
            proof = substitute_variable(proof, staged[p], argument)
        for label, formula in open_assumptions(proof).items():
            if not isinstance(formula, Atom):
                raise SubProofMissingError(f'sub-proof for {term.name} assumes {label}, which is not a data-atom')
            support = self.component(formula.term, formula.predicate, hypotheses, visiting | {term.name})
            proof = substitute_assumption(proof, label, support)
        return proof


def prove_corec(schema: CorecSchema, ds: DataSystem,
                sub_proofs: Optional[Mapping[str, Derivation]] = None) -> Derivation:
    """Coinduction derivation of S(f(x⃗)) with open assumptions S(x_i)."""
    proof = CorecProver(schema, ds, sub_proofs).prove()
    logger.info(f'Generated a derivation of size {proof.size} for {schema.principal}')
    return proof
