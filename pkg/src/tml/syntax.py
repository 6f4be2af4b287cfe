"""Two-sorted term-modal syntax.

Types, signatures, terms and formulas, plus the syntactic operations the
rest of the package builds on: type computation, free/bound variables,
substitution with enforced side conditions, and a canonical printer.

The type system has three tags: ``agt`` (agents), ``obj`` (objects) and
their common supertype ``agtobj``.  Variables, constants and function
results are always ``agt`` or ``obj``; only argument positions of function
and relation symbols may be ``agtobj``.  The subtype order has exactly five
pairs: the three reflexive ones plus agt<=agtobj and obj<=agtobj.

Formulas are kept in kernel form (atom, negation, conjunction, term-indexed
knowledge operator, universal quantifier).  ``->``, ``|``, ``<->``, ``!=``
and ``exists`` are surface sugar, expanded at parse time and by the helper
constructors below, never stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import CaptureRisk, TypeMismatch, TypingError


class TypeTag(Enum):
    AGT = "agt"
    OBJ = "obj"
    AGTOBJ = "agtobj"

    def __str__(self) -> str:
        return self.value


AGT = TypeTag.AGT
OBJ = TypeTag.OBJ
AGTOBJ = TypeTag.AGTOBJ

#: The full subtype order as a set of pairs (five pairs, nothing else).
SUBTYPE_PAIRS = frozenset(
    {(t, t) for t in TypeTag} | {(AGT, AGTOBJ), (OBJ, AGTOBJ)}
)


def is_subtype(a: TypeTag, b: TypeTag) -> bool:
    return a is b or b is AGTOBJ


#: Reserved words of the formula language; never declarable identifiers.
RESERVED_WORDS = frozenset({"forall", "exists", "K"})

# Reserved variable families guaranteeing countably many variables per sort.
_RESERVED_AGT_VAR = re.compile(r"_a\d+\Z")
_RESERVED_OBJ_VAR = re.compile(r"_o\d+\Z")


def reserved_var_type(name: str) -> TypeTag | None:
    """Type of a reserved-family variable (``_a0, _a1, ...`` / ``_o0, ...``)."""
    if _RESERVED_AGT_VAR.match(name):
        return AGT
    if _RESERVED_OBJ_VAR.match(name):
        return OBJ
    return None


_EQ_TYPE: tuple[TypeTag, ...] = (AGTOBJ, AGTOBJ)


@dataclass(frozen=True)
class Signature:
    """Typed symbol table.

    Namespaces (variables, constants, functions, relations) are pairwise
    disjoint.  The equality relation ``=`` with type <agtobj, agtobj> is
    built in and cannot be redeclared.  Beyond the declared variables, the
    reserved families ``_a<n>`` (agt) and ``_o<n>`` (obj) are always in
    scope.
    """

    variables: Mapping[str, TypeTag] = field(default_factory=dict)
    constants: Mapping[str, TypeTag] = field(default_factory=dict)
    functions: Mapping[str, tuple[tuple[TypeTag, ...], TypeTag]] = field(default_factory=dict)
    relations: Mapping[str, tuple[TypeTag, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", dict(self.variables))
        object.__setattr__(self, "constants", dict(self.constants))
        object.__setattr__(
            self,
            "functions",
            {name: (tuple(args), res) for name, (args, res) in self.functions.items()},
        )
        object.__setattr__(
            self, "relations", {name: tuple(tys) for name, tys in self.relations.items()}
        )
        seen: set[str] = set()
        for namespace in (self.variables, self.constants, self.functions, self.relations):
            for name in namespace:
                _check_declarable(name)
                if name in seen:
                    raise TypingError(f"duplicate identifier '{name}'")
                seen.add(name)
        for name, ty in self.variables.items():
            if ty is AGTOBJ:
                raise TypingError(f"variables must have type agt or obj: '{name}'")
        for name, ty in self.constants.items():
            if ty is AGTOBJ:
                raise TypingError(f"constants must have type agt or obj: '{name}'")
        for name, (_args, res) in self.functions.items():
            if res is AGTOBJ:
                raise TypingError(f"function results must have type agt or obj: '{name}'")

    def kind_of(self, name: str) -> str | None:
        """Namespace of ``name``: variable/constant/function/relation, or None."""
        if name in self.variables or reserved_var_type(name) is not None:
            return "variable"
        if name in self.constants:
            return "constant"
        if name in self.functions:
            return "function"
        if name == "=" or name in self.relations:
            return "relation"
        return None

    def var_type(self, name: str) -> TypeTag:
        ty = self.variables.get(name) or reserved_var_type(name)
        if ty is None:
            raise TypingError(f"unknown variable '{name}'")
        return ty

    def const_type(self, name: str) -> TypeTag:
        try:
            return self.constants[name]
        except KeyError:
            raise TypingError(f"unknown constant '{name}'") from None

    def fun_type(self, name: str) -> tuple[tuple[TypeTag, ...], TypeTag]:
        try:
            return self.functions[name]
        except KeyError:
            raise TypingError(f"unknown function symbol '{name}'") from None

    def rel_type(self, name: str) -> tuple[TypeTag, ...]:
        if name == "=":
            return _EQ_TYPE
        try:
            return self.relations[name]
        except KeyError:
            raise TypingError(f"unknown relation symbol '{name}'") from None

    def to_source(self) -> str:
        """Render as ``.tms`` declaration lines (parses back to an equal signature)."""
        lines = []
        for name, ty in self.variables.items():
            lines.append(f"var {name} : {ty}")
        for name, ty in self.constants.items():
            lines.append(f"const {name} : {ty}")
        for name, (args, res) in self.functions.items():
            args_src = ", ".join(str(t) for t in args)
            lines.append(f"fun {name} : {args_src} -> {res}" if args_src else f"fun {name} : -> {res}")
        for name, tys in self.relations.items():
            tys_src = ", ".join(str(t) for t in tys)
            lines.append(f"rel {name} : {tys_src}" if tys_src else f"rel {name} :")
        return "\n".join(lines) + ("\n" if lines else "")


def _check_declarable(name: str) -> None:
    if name == "=":
        raise TypingError("the equality symbol '=' is built in and cannot be redeclared")
    if name in RESERVED_WORDS:
        raise TypingError(f"'{name}' is a reserved word and cannot be declared")
    if reserved_var_type(name) is not None:
        raise TypingError(f"'{name}' belongs to a reserved variable family")


# ---------------------------------------------------------------------------
# Terms and formulas


class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    fn: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


class Formula:
    pass


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True)
class Conj(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: Term
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


# Sugar constructors (the stored form is always the kernel one).

def eq(left: Term, right: Term) -> Atom:
    return Atom("=", (left, right))


def neq(left: Term, right: Term) -> Neg:
    return Neg(eq(left, right))


def implies(left: Formula, right: Formula) -> Neg:
    return Neg(Conj(left, Neg(right)))


def disj(left: Formula, right: Formula) -> Neg:
    return Neg(Conj(Neg(left), Neg(right)))


def iff(left: Formula, right: Formula) -> Conj:
    return Conj(implies(left, right), implies(right, left))


def exists(var: str, body: Formula) -> Neg:
    return Neg(Forall(var, Neg(body)))


def match_implication(formula: Formula) -> tuple[Formula, Formula] | None:
    """Destructure ``!(A & !B)`` into (A, B), the stored shape of ``A -> B``."""
    if (
        isinstance(formula, Neg)
        and isinstance(formula.body, Conj)
        and isinstance(formula.body.right, Neg)
    ):
        return formula.body.left, formula.body.right.body
    return None


# ---------------------------------------------------------------------------
# Syntactic measurements


def term_vars(term: Term) -> frozenset[str]:
    match term:
        case Var(name):
            return frozenset({name})
        case Const(_):
            return frozenset()
        case App(_, args):
            out: frozenset[str] = frozenset()
            for arg in args:
                out |= term_vars(arg)
            return out
    raise TypeError(f"not a term: {term!r}")


def free_vars(formula: Formula) -> frozenset[str]:
    """Free variables; for ``K_t body`` this is vars(t) united with FV(body)."""
    match formula:
        case Atom(_, args):
            out: frozenset[str] = frozenset()
            for arg in args:
                out |= term_vars(arg)
            return out
        case Neg(body):
            return free_vars(body)
        case Conj(left, right):
            return free_vars(left) | free_vars(right)
        case Know(agent, body):
            return term_vars(agent) | free_vars(body)
        case Forall(var, body):
            return free_vars(body) - {var}
    raise TypeError(f"not a formula: {formula!r}")


def bound_vars(formula: Formula) -> frozenset[str]:
    """Variables bound by some quantifier occurrence anywhere in the formula."""
    match formula:
        case Atom(_, _):
            return frozenset()
        case Neg(body):
            return bound_vars(body)
        case Conj(left, right):
            return bound_vars(left) | bound_vars(right)
        case Know(_, body):
            return bound_vars(body)
        case Forall(var, body):
            return bound_vars(body) | {var}
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Typing


def type_of_term(sig: Signature, term: Term) -> TypeTag:
    """The unique type of a well-typed term (always agt or obj)."""
    match term:
        case Var(name):
            return sig.var_type(name)
        case Const(name):
            return sig.const_type(name)
        case App(fn, args):
            arg_types, result = sig.fun_type(fn)
            if len(args) != len(arg_types):
                raise TypingError(
                    f"function '{fn}' expects {len(arg_types)} argument(s), got {len(args)}"
                )
            for i, (arg, want) in enumerate(zip(args, arg_types)):
                got = type_of_term(sig, arg)
                if not is_subtype(got, want):
                    raise TypingError(
                        f"argument {i + 1} of '{fn}': {got} is not a subtype of {want}"
                    )
            return result
    raise TypeError(f"not a term: {term!r}")


def check_formula(sig: Signature, formula: Formula) -> None:
    """Raise TypingError unless the formula is well-formed over ``sig``."""
    match formula:
        case Atom(rel, args):
            arg_types = sig.rel_type(rel)
            if len(args) != len(arg_types):
                raise TypingError(
                    f"relation '{rel}' expects {len(arg_types)} argument(s), got {len(args)}"
                )
            for i, (arg, want) in enumerate(zip(args, arg_types)):
                got = type_of_term(sig, arg)
                if not is_subtype(got, want):
                    raise TypingError(
                        f"argument {i + 1} of '{rel}': {got} is not a subtype of {want}"
                    )
        case Neg(body):
            check_formula(sig, body)
        case Conj(left, right):
            check_formula(sig, left)
            check_formula(sig, right)
        case Know(agent, body):
            if type_of_term(sig, agent) is not AGT:
                raise TypingError("modal index must have type agt")
            check_formula(sig, body)
        case Forall(var, body):
            sig.var_type(var)
            check_formula(sig, body)
        case _:
            raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# Substitution

def _check_substitution_types(sig: Signature, replacement: Term, var: str) -> None:
    var_ty = sig.var_type(var)
    repl_ty = type_of_term(sig, replacement)
    if var_ty is not repl_ty:
        raise TypeMismatch(
            f"cannot substitute a term of type {repl_ty} for '{var}' of type {var_ty}"
        )


def _sub_term(term: Term, replacement: Term, var: str) -> Term:
    match term:
        case Var(name):
            return replacement if name == var else term
        case Const(_):
            return term
        case App(fn, args):
            return App(fn, tuple(_sub_term(a, replacement, var) for a in args))
    raise TypeError(f"not a term: {term!r}")


def substitute_term(sig: Signature, term: Term, replacement: Term, var: str) -> Term:
    """``term(replacement/var)``; requires type(var) = type(replacement)."""
    _check_substitution_types(sig, replacement, var)
    return _sub_term(term, replacement, var)


def substitute(sig: Signature, formula: Formula, replacement: Term, var: str) -> Formula:
    """``formula(replacement/var)``.

    The usual side conditions are hard errors, never repaired by renaming:
    TypeMismatch when type(var) differs from the replacement's type, and
    CaptureRisk when any variable of the replacement is bound somewhere in
    the formula.  Substitution distributes through the modal index:
    ``(K_t body)(s/x) = K_{t(s/x)} body(s/x)``; a quantifier over ``var``
    itself shields its body.
    """
    _check_substitution_types(sig, replacement, var)
    clash = term_vars(replacement) & bound_vars(formula)
    if clash:
        names = ", ".join(f"'{n}'" for n in sorted(clash))
        raise CaptureRisk(
            f"variable(s) {names} of the substituted term are bound in the target formula"
        )

    def go(f: Formula) -> Formula:
        match f:
            case Atom(rel, args):
                return Atom(rel, tuple(_sub_term(a, replacement, var) for a in args))
            case Neg(body):
                return Neg(go(body))
            case Conj(left, right):
                return Conj(go(left), go(right))
            case Know(agent, body):
                return Know(_sub_term(agent, replacement, var), go(body))
            case Forall(v, body):
                return f if v == var else Forall(v, go(body))
        raise TypeError(f"not a formula: {f!r}")

    return go(formula)


# ---------------------------------------------------------------------------
# Printing

def format_term(term: Term) -> str:
    match term:
        case Var(name) | Const(name):
            return name
        case App(fn, args):
            return f"{fn}({', '.join(format_term(a) for a in args)})"
    raise TypeError(f"not a term: {term!r}")


# Printing precedence: quantifiers 0, & is 1, prefix operators 2, atoms 3.
def _fmt(formula: Formula, min_prec: int) -> str:
    match formula:
        case Atom("=", (left, right)):
            text, prec = f"{format_term(left)} = {format_term(right)}", 3
        case Atom(rel, ()):
            text, prec = rel, 3
        case Atom(rel, args):
            text, prec = f"{rel}({', '.join(format_term(a) for a in args)})", 3
        case Neg(body):
            text, prec = f"!{_fmt(body, 2)}", 2
        case Know(agent, body):
            text, prec = f"K[{format_term(agent)}] {_fmt(body, 2)}", 2
        case Conj(left, right):
            text, prec = f"{_fmt(left, 1)} & {_fmt(right, 2)}", 1
        case Forall(var, body):
            text, prec = f"forall {var}. {_fmt(body, 0)}", 0
        case _:
            raise TypeError(f"not a formula: {formula!r}")
    return f"({text})" if prec < min_prec else text


def format_formula(formula: Formula) -> str:
    """Kernel-form rendering; re-parses to a structurally equal formula."""
    return _fmt(formula, 0)


def render_typed_ast(sig: Signature, formula: Formula) -> str:
    """Indented tree with the type of every term, for diagnostics."""
    lines: list[str] = []

    def term(t: Term, depth: int) -> None:
        pad = "  " * depth
        ty = type_of_term(sig, t)
        match t:
            case Var(name):
                lines.append(f"{pad}Var {name} : {ty}")
            case Const(name):
                lines.append(f"{pad}Const {name} : {ty}")
            case App(fn, args):
                lines.append(f"{pad}App {fn} : {ty}")
                for a in args:
                    term(a, depth + 1)

    def go(f: Formula, depth: int) -> None:
        pad = "  " * depth
        match f:
            case Atom(rel, args):
                lines.append(f"{pad}Atom {rel}")
                for a in args:
                    term(a, depth + 1)
            case Neg(body):
                lines.append(f"{pad}Neg")
                go(body, depth + 1)
            case Conj(left, right):
                lines.append(f"{pad}Conj")
                go(left, depth + 1)
                go(right, depth + 1)
            case Know(agent, body):
                lines.append(f"{pad}Know")
                term(agent, depth + 1)
                go(body, depth + 1)
            case Forall(var, body):
                lines.append(f"{pad}Forall {var} : {sig.var_type(var)}")
                go(body, depth + 1)

    go(formula, 0)
    return "\n".join(lines)
