"""Concrete syntax: tokenizer plus recursive-descent parsers.

Formula grammar (loosest to tightest): ``<->`` and ``->`` are
right-associative; ``|`` and ``&`` left-associative; the prefix operators
``!`` and ``K[t]`` bind tightest; ``forall x.`` / ``exists x.`` extend
maximally to the right.  ``=`` and ``!=`` are infix between terms;
``t != s`` abbreviates ``!(t = s)``.  ``#`` starts a comment.

Parsing is signature-directed: an identifier's namespace decides whether it
heads a relation atom or a term, so relation/function application never
needs lookahead beyond one token.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    AGT,
    AGTOBJ,
    OBJ,
    RESERVED_WORDS,
    App,
    Atom,
    Conj,
    Const,
    Formula,
    Know,
    Forall,
    Neg,
    Signature,
    Term,
    TypeTag,
    Var,
    check_formula,
    disj,
    eq,
    exists,
    iff,
    implies,
    reserved_var_type,
    type_of_term,
)

_MULTI_PUNCT = ("<->", "->", "!=")
_SINGLE_PUNCT = "()[]{},.:;=&|!@"


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "punct" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str, first_line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    for line_no, line in enumerate(text.splitlines(), start=first_line):
        i = 0
        n = len(line)
        while i < n:
            ch = line[i]
            if ch in " \t\r":
                i += 1
                continue
            if ch == "#":
                break
            col = i + 1
            if ch.isalpha() or ch == "_":
                j = i + 1
                while j < n and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                tokens.append(Token("ident", line[i:j], line_no, col))
                i = j
                continue
            if ch.isdigit():
                j = i + 1
                while j < n and line[j].isdigit():
                    j += 1
                tokens.append(Token("int", line[i:j], line_no, col))
                i = j
                continue
            for punct in _MULTI_PUNCT:
                if line.startswith(punct, i):
                    tokens.append(Token("punct", punct, line_no, col))
                    i += len(punct)
                    break
            else:
                if ch in _SINGLE_PUNCT:
                    tokens.append(Token("punct", ch, line_no, col))
                    i += 1
                else:
                    raise ParseError(f"unexpected character {ch!r}", line_no, col)
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        last_line = tokens[-1].line if tokens else 1
        self._tokens = tokens + [Token("eof", "", last_line, 0)]
        self._pos = 0

    def peek(self) -> Token:
        return self._tokens[self._pos]

    def next(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text

    def take_punct(self, text: str) -> bool:
        if self.at_punct(text):
            self.next()
            return True
        return False

    def expect_punct(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "punct" or tok.text != text:
            raise ParseError(f"expected '{text}', got {_describe(tok)}", tok.line, tok.col)
        return tok

    def expect_ident(self, what: str = "an identifier") -> Token:
        tok = self.next()
        if tok.kind != "ident":
            raise ParseError(f"expected {what}, got {_describe(tok)}", tok.line, tok.col)
        return tok

    def expect_int(self) -> int:
        tok = self.next()
        if tok.kind != "int":
            raise ParseError(f"expected a line number, got {_describe(tok)}", tok.line, tok.col)
        return int(tok.text)

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected trailing input at {_describe(tok)}", tok.line, tok.col)


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else f"'{tok.text}'"


# ---------------------------------------------------------------------------
# Formulas and terms


def parse_formula(sig: Signature, text: str) -> Formula:
    """Parse and type-check a formula; all sugar is expanded."""
    stream = TokenStream(tokenize(text))
    formula = formula_from_stream(sig, stream)
    stream.expect_eof()
    check_formula(sig, formula)
    return formula


def parse_term(sig: Signature, text: str) -> Term:
    stream = TokenStream(tokenize(text))
    term = term_from_stream(sig, stream)
    stream.expect_eof()
    type_of_term(sig, term)
    return term


def formula_from_stream(sig: Signature, st: TokenStream) -> Formula:
    return _iff(sig, st)


def _iff(sig: Signature, st: TokenStream) -> Formula:
    left = _impl(sig, st)
    if st.take_punct("<->"):
        return iff(left, _iff(sig, st))
    return left


def _impl(sig: Signature, st: TokenStream) -> Formula:
    left = _or(sig, st)
    if st.take_punct("->"):
        return implies(left, _impl(sig, st))
    return left


def _or(sig: Signature, st: TokenStream) -> Formula:
    left = _and(sig, st)
    while st.take_punct("|"):
        left = disj(left, _and(sig, st))
    return left


def _and(sig: Signature, st: TokenStream) -> Formula:
    left = _unary(sig, st)
    while st.take_punct("&"):
        left = Conj(left, _unary(sig, st))
    return left


def _unary(sig: Signature, st: TokenStream) -> Formula:
    tok = st.peek()
    if tok.kind == "punct" and tok.text == "!":
        st.next()
        return Neg(_unary(sig, st))
    if tok.kind == "ident" and tok.text == "K":
        st.next()
        st.expect_punct("[")
        index = term_from_stream(sig, st)
        st.expect_punct("]")
        return Know(index, _unary(sig, st))
    if tok.kind == "ident" and tok.text in ("forall", "exists"):
        st.next()
        var = st.expect_ident("a variable").text
        st.expect_punct(".")
        body = formula_from_stream(sig, st)
        return Forall(var, body) if tok.text == "forall" else exists(var, body)
    return _primary(sig, st)


def _primary(sig: Signature, st: TokenStream) -> Formula:
    if st.take_punct("("):
        inner = formula_from_stream(sig, st)
        st.expect_punct(")")
        return inner
    tok = st.peek()
    if tok.kind != "ident":
        raise ParseError(f"expected a formula, got {_describe(tok)}", tok.line, tok.col)
    kind = sig.kind_of(tok.text)
    if kind is None:
        raise ParseError(f"unknown identifier '{tok.text}'", tok.line, tok.col)
    if kind == "relation":
        st.next()
        args: list[Term] = []
        if st.take_punct("("):
            if not st.at_punct(")"):
                args.append(term_from_stream(sig, st))
                while st.take_punct(","):
                    args.append(term_from_stream(sig, st))
            st.expect_punct(")")
        return Atom(tok.text, tuple(args))
    left = term_from_stream(sig, st)
    op = st.next()
    if op.kind == "punct" and op.text == "=":
        return eq(left, term_from_stream(sig, st))
    if op.kind == "punct" and op.text == "!=":
        return Neg(eq(left, term_from_stream(sig, st)))
    raise ParseError(f"expected '=' or '!=' after a term, got {_describe(op)}", op.line, op.col)


def term_from_stream(sig: Signature, st: TokenStream) -> Term:
    tok = st.expect_ident("a term")
    kind = sig.kind_of(tok.text)
    if kind is None:
        raise ParseError(f"unknown identifier '{tok.text}'", tok.line, tok.col)
    if kind == "variable":
        return Var(tok.text)
    if kind == "constant":
        return Const(tok.text)
    if kind == "function":
        args: list[Term] = []
        if st.take_punct("("):
            if not st.at_punct(")"):
                args.append(term_from_stream(sig, st))
                while st.take_punct(","):
                    args.append(term_from_stream(sig, st))
            st.expect_punct(")")
        return App(tok.text, tuple(args))
    raise ParseError(f"relation symbol '{tok.text}' used as a term", tok.line, tok.col)


# ---------------------------------------------------------------------------
# Signatures (.tms)

_TYPE_BY_NAME = {"agt": AGT, "obj": OBJ, "agtobj": AGTOBJ}


def _parse_type(st: TokenStream) -> TypeTag:
    tok = st.expect_ident("a type (agt, obj or agtobj)")
    ty = _TYPE_BY_NAME.get(tok.text)
    if ty is None:
        raise ParseError(f"expected a type (agt, obj or agtobj), got '{tok.text}'", tok.line, tok.col)
    return ty


def _parse_sorted_type(st: TokenStream, message: str) -> TypeTag:
    tok = st.peek()
    ty = _parse_type(st)
    if ty is AGTOBJ:
        raise ParseError(message, tok.line, tok.col)
    return ty


def _decl_name(st: TokenStream, declared: dict[str, str], kind: str) -> str:
    tok = st.peek()
    if tok.kind == "punct" and tok.text == "=":
        raise ParseError(
            "the equality symbol '=' is built in and cannot be redeclared", tok.line, tok.col
        )
    name = st.expect_ident("an identifier").text
    if name in RESERVED_WORDS:
        raise ParseError(f"'{name}' is a reserved word and cannot be declared", tok.line, tok.col)
    if reserved_var_type(name) is not None:
        raise ParseError(f"'{name}' belongs to a reserved variable family", tok.line, tok.col)
    if name in declared:
        raise ParseError(f"duplicate identifier '{name}'", tok.line, tok.col)
    declared[name] = kind
    return name


def parse_signature(text: str) -> Signature:
    """Parse ``.tms`` source: one ``var/const/fun/rel`` declaration per line."""
    variables: dict[str, TypeTag] = {}
    constants: dict[str, TypeTag] = {}
    functions: dict[str, tuple[tuple[TypeTag, ...], TypeTag]] = {}
    relations: dict[str, tuple[TypeTag, ...]] = {}
    declared: dict[str, str] = {}

    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = tokenize(line, first_line=line_no)
        if not tokens:
            continue
        st = TokenStream(tokens)
        head = st.expect_ident("a declaration keyword (var, const, fun or rel)")
        if head.text == "var":
            name = _decl_name(st, declared, "variable")
            st.expect_punct(":")
            variables[name] = _parse_sorted_type(st, "variables must have type agt or obj")
        elif head.text == "const":
            name = _decl_name(st, declared, "constant")
            st.expect_punct(":")
            constants[name] = _parse_sorted_type(st, "constants must have type agt or obj")
        elif head.text == "fun":
            name = _decl_name(st, declared, "function")
            st.expect_punct(":")
            args: list[TypeTag] = []
            if not st.at_punct("->"):
                args.append(_parse_type(st))
                while st.take_punct(","):
                    args.append(_parse_type(st))
            st.expect_punct("->")
            result = _parse_sorted_type(st, "function results must have type agt or obj")
            functions[name] = (tuple(args), result)
        elif head.text == "rel":
            name = _decl_name(st, declared, "relation")
            st.expect_punct(":")
            tys: list[TypeTag] = []
            if st.peek().kind == "ident":
                tys.append(_parse_type(st))
                while st.take_punct(","):
                    tys.append(_parse_type(st))
            relations[name] = tuple(tys)
        else:
            raise ParseError(
                f"expected var, const, fun or rel, got '{head.text}'", head.line, head.col
            )
        st.expect_eof()

    return Signature(variables, constants, functions, relations)
