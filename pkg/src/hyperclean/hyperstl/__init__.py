"""HyperSTL*: syntax, parser, three-valued evaluator and formula builders."""

from .ast import (CLOCK, TRUE, Abs, And, Atom, BinOp, Exists, Forall, Formula, Freeze, Implies,
                  Neg, Not, Num, Or, Since, TrueF, Until, Var, F, G, H, P, conj, desugar, disj,
                  interval, is_fin)
from .evaluate import Evaluator, Truth, satisfies, value
from .parser import FormulaSyntaxError, parse_formula, print_formula

__all__ = [
    "CLOCK", "TRUE", "Abs", "And", "Atom", "BinOp", "Exists", "Forall", "Formula", "Freeze",
    "Implies", "Neg", "Not", "Num", "Or", "Since", "TrueF", "Until", "Var", "F", "G", "H", "P",
    "conj", "desugar", "disj", "interval", "is_fin", "Evaluator", "Truth", "satisfies", "value",
    "FormulaSyntaxError", "parse_formula", "print_formula",
]
