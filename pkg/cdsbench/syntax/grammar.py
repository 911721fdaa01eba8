"""Lark grammar of `.cds` workspace files."""

from lark import Lark

GRAMMAR = r"""
start: block*

?block: system | program | env | proof

system: "system" NAME "{" system_item* "}"
?system_item: predicates | constructor | destructors | vocabulary
predicates: KIND name_list ";"
constructor: "constructor" NAME ":" signature ";"
signature: (NAME ("*" NAME)* "->")? NAME
destructors: "destructors" name_list ";"
vocabulary: "vocabulary" name_list ";"
name_list: NAME ("," NAME)*

program: "program" NAME "over" NAME "{" program_item* "}"
?program_item: principal | equation
principal: "principal" NAME ";"
equation: term "=" term ";"

env: "env" NAME "over" NAME "{" binding* "}"
?binding: coterm_binding | run_binding
coterm_binding: NAME "=" coterm ";"
run_binding: NAME "=" "run" NAME "(" [name_list] ")" ";"

proof: "proof" NAME "over" NAME "using" NAME "{" sexp "}"
sexp: "(" sexp_item* ")"
?sexp_item: sexp | ESCAPED_STRING | INT | SYMBOL

?term: app ":" term -> cons
     | app
?app: NAME "(" term ("," term)* ")" -> call
    | NAME -> bare
    | "(" term ")"

?coterm: "rec" NAME "." coterm -> rec
       | coapp ":" coterm -> cons
       | coapp
?coapp: NAME "(" coterm ("," coterm)* ")" -> call
      | NAME -> bare
      | "(" coterm ")"

?formula: quantified | implication
quantified: QUANTIFIER NAME "." formula
?implication: disjunction "->" imp_rhs -> imp
            | disjunction
?imp_rhs: quantified | implication
?disjunction: conjunction "|" disj_rhs -> disj
            | conjunction
?disj_rhs: quantified | disjunction
?conjunction: primary "&" conj_rhs -> conj
            | primary
?conj_rhs: quantified | conjunction
?primary: term "=" term -> equality
        | term -> atom
        | "(" formula ")"

KIND: "inductive" | "coinductive"
QUANTIFIER: "exists" | "forall"
NAME: /[A-Za-z_][A-Za-z0-9_']*|[0-9]+|\[\]/
SYMBOL: /[A-Za-z_:][A-Za-z0-9_:\-']*/
COMMENT: /#[^\n]*/

%import common.ESCAPED_STRING
%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

parser = Lark(GRAMMAR, start=['start', 'term', 'coterm', 'formula'], propagate_positions=True)
