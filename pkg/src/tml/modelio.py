"""Loading and serializing model files.

A model file starts with ``model standard`` or ``model nonstandard``,
followed by the symbol declarations it uses (``.tms`` lines), the frame
(``agents``, ``objects``, ``worlds``, optional ``R`` lines), and the
interpretation lines:

    I c @ w0 = a                 J default c @ w0 = a
    I f(a, b) @ w0 = o           J default f(a) @ w0 = o
    I P @ w0 = { (a), (b) }      J P @ w0 = { (a) }
    I Q @ w0 = true              J c @ w0 [ diag ] = a
                                 J c @ w0 [ { (a) } ] = b
                                 J f(a) @ w0 [ empty ] = o

Omitted ``R`` lines mean the empty relation; relation symbols default to
the empty extension at unmentioned worlds; constants and function symbols
must be fully interpreted (standard) or fully defaulted (non-standard) at
every world.  Nullary relations are written ``= true`` / ``= false``.
The file kind is decided by the header, not the file extension.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ModelError, ParseError
from .nonstandard import (
    EMPTY_EXTENSION,
    InterpValue,
    NonStandardModel,
    RelExtension,
)
from .parser import Token, TokenStream, tokenize
from .semantics import DomainElement, Frame, StandardModel, element_key
from .syntax import AGT, OBJ, Signature, TypeTag

Model = StandardModel | NonStandardModel


class _Loader:
    def __init__(self, text: str):
        self.sig_lines: list[str] = []
        self.agents: list[DomainElement] | None = None
        self.objects: list[DomainElement] | None = None
        self.worlds: list[str] | None = None
        self.access: dict[DomainElement, set[tuple[str, str]]] = {}
        self.kind: str | None = None
        self.interp_lines: list[tuple[int, TokenStream]] = []

        lines = text.splitlines()
        for line_no, line in enumerate(lines, start=1):
            tokens = tokenize(line, first_line=line_no)
            if not tokens:
                continue
            if self.kind is None:
                self._header(tokens)
                continue
            head = tokens[0]
            if head.kind != "ident":
                raise ParseError(f"unexpected '{head.text}'", head.line, head.col)
            if head.text in ("var", "const", "fun", "rel"):
                self.sig_lines.append(line)
            elif head.text in ("agents", "objects", "worlds"):
                self._domain_line(head.text, tokens)
            elif head.text == "R":
                self.interp_lines.append((line_no, TokenStream(tokens)))
            elif head.text in ("I", "J"):
                self.interp_lines.append((line_no, TokenStream(tokens)))
            else:
                raise ParseError(f"unexpected '{head.text}'", head.line, head.col)

        if self.kind is None:
            raise ParseError("missing 'model standard' or 'model nonstandard' header")
        self.signature = _parse_signature_lines(self.sig_lines)
        if self.agents is None or self.objects is None or self.worlds is None:
            raise ParseError("model file must declare agents, objects and worlds")
        self.elements = {e.name: e for e in self.agents + self.objects}
        self.world_set = set(self.worlds)

    def _header(self, tokens: list[Token]) -> None:
        st = TokenStream(tokens)
        head = st.expect_ident("the 'model' header")
        if head.text != "model":
            raise ParseError("the first line must be 'model standard' or 'model nonstandard'",
                             head.line, head.col)
        kind = st.expect_ident("'standard' or 'nonstandard'")
        if kind.text not in ("standard", "nonstandard"):
            raise ParseError(f"unknown model kind '{kind.text}'", kind.line, kind.col)
        st.expect_eof()
        self.kind = kind.text

    def _domain_line(self, which: str, tokens: list[Token]) -> None:
        st = TokenStream(tokens)
        head = st.next()
        if (which == "agents" and self.agents is not None) or (
            which == "objects" and self.objects is not None
        ) or (which == "worlds" and self.worlds is not None):
            raise ParseError(f"duplicate '{which}' line", head.line, head.col)
        names = [st.expect_ident("a name").text]
        while st.take_punct(","):
            names.append(st.expect_ident("a name").text)
        st.expect_eof()
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate names in '{which}' line", head.line, head.col)
        if which == "agents":
            self.agents = [DomainElement(AGT, n) for n in names]
        elif which == "objects":
            self.objects = [DomainElement(OBJ, n) for n in names]
        else:
            self.worlds = names

    # -- shared pieces ---------------------------------------------------

    def element(self, st: TokenStream) -> DomainElement:
        tok = st.expect_ident("a domain element")
        e = self.elements.get(tok.text)
        if e is None:
            raise ParseError(f"unknown domain element '{tok.text}'", tok.line, tok.col)
        return e

    def world(self, st: TokenStream) -> str:
        tok = st.expect_ident("a world")
        if tok.text not in self.world_set:
            raise ParseError(f"unknown world '{tok.text}'", tok.line, tok.col)
        return tok.text

    def element_tuple(self, st: TokenStream) -> tuple[DomainElement, ...]:
        st.expect_punct("(")
        items: list[DomainElement] = []
        if not st.at_punct(")"):
            items.append(self.element(st))
            while st.take_punct(","):
                items.append(self.element(st))
        st.expect_punct(")")
        return tuple(items)

    def tuple_set(self, st: TokenStream) -> list[tuple[DomainElement, ...]]:
        st.expect_punct("{")
        tuples: list[tuple[DomainElement, ...]] = []
        if not st.at_punct("}"):
            tuples.append(self.element_tuple(st))
            while st.take_punct(","):
                tuples.append(self.element_tuple(st))
        st.expect_punct("}")
        return tuples

    def access_line(self, st: TokenStream) -> None:
        st.next()  # 'R'
        tok = st.peek()
        agent = self.element(st)
        if agent.sort is not AGT:
            raise ParseError(f"'{agent.name}' is not an agent", tok.line, tok.col)
        st.expect_punct(":")
        pairs = self.access.setdefault(agent, set())
        if not st.peek().kind == "eof":
            pairs.add(self._world_pair(st))
            while st.take_punct(","):
                pairs.add(self._world_pair(st))
        st.expect_eof()

    def _world_pair(self, st: TokenStream) -> tuple[str, str]:
        a = self.world(st)
        st.expect_punct("->")
        b = self.world(st)
        return (a, b)

    def frame(self) -> Frame:
        assert self.agents and self.objects and self.worlds
        return Frame(
            tuple(self.agents),
            tuple(self.objects),
            tuple(self.worlds),
            {agent: frozenset(pairs) for agent, pairs in self.access.items()},
        )

    def symbol(self, st: TokenStream) -> tuple[str, str]:
        tok = st.expect_ident("a symbol")
        kind = self.signature.kind_of(tok.text)
        if kind in (None, "variable") or tok.text == "=":
            raise ParseError(f"'{tok.text}' is not an interpretable symbol", tok.line, tok.col)
        return tok.text, kind

    def rel_value(self, st: TokenStream, rel: str) -> list[tuple[DomainElement, ...]]:
        if st.peek().kind == "ident" and st.peek().text in ("true", "false"):
            tok = st.next()
            if self.signature.relations[rel] != ():
                raise ParseError(
                    f"'{rel}' is not nullary; give a tuple set", tok.line, tok.col
                )
            return [()] if tok.text == "true" else []
        return self.tuple_set(st)


def _parse_signature_lines(lines: list[str]) -> Signature:
    from .parser import parse_signature

    return parse_signature("\n".join(lines))


def _load_standard(loader: _Loader) -> StandardModel:
    constants: dict[tuple[str, str], DomainElement] = {}
    functions: dict[tuple[str, str], dict[tuple[DomainElement, ...], DomainElement]] = {}
    relations: dict[tuple[str, str], set[tuple[DomainElement, ...]]] = {}

    for line_no, st in loader.interp_lines:
        head = st.peek()
        if head.text == "R":
            loader.access_line(st)
            continue
        if head.text != "I":
            raise ParseError("expected an 'I' interpretation line in a standard model",
                             head.line, head.col)
        st.next()
        sym, kind = loader.symbol(st)
        if kind == "constant":
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("=")
            value = loader.element(st)
            st.expect_eof()
            if (sym, world) in constants:
                raise ParseError(f"duplicate interpretation of '{sym}' at '{world}'", line_no)
            constants[(sym, world)] = value
        elif kind == "function":
            args = loader.element_tuple(st)
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("=")
            value = loader.element(st)
            st.expect_eof()
            table = functions.setdefault((sym, world), {})
            if args in table:
                raise ParseError(f"duplicate table entry for '{sym}' at '{world}'", line_no)
            table[args] = value
        else:
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("=")
            tuples = loader.rel_value(st, sym)
            st.expect_eof()
            if (sym, world) in relations:
                raise ParseError(f"duplicate extension for '{sym}' at '{world}'", line_no)
            relations[(sym, world)] = set(tuples)

    return StandardModel(
        signature=loader.signature,
        frame=loader.frame(),
        constants=constants,
        functions=functions,
        relations={key: frozenset(t) for key, t in relations.items()},
    )


def _load_nonstandard(loader: _Loader) -> NonStandardModel:
    defaults: dict[tuple[str, str], InterpValue] = {}
    fun_defaults: dict[tuple[str, str], dict[tuple[DomainElement, ...], DomainElement]] = {}
    fun_overrides: dict[
        tuple[str, str, RelExtension], dict[tuple[DomainElement, ...], DomainElement]
    ] = {}
    overrides: dict[tuple[str, str, RelExtension], InterpValue] = {}
    relations: dict[tuple[str, str], RelExtension] = {}

    def extension_key(st: TokenStream) -> RelExtension:
        tok = st.peek()
        if tok.kind == "ident" and tok.text == "diag":
            st.next()
            assert loader.agents is not None and loader.objects is not None
            return RelExtension.diagonal(tuple(loader.agents) + tuple(loader.objects))
        if tok.kind == "ident" and tok.text == "empty":
            st.next()
            return EMPTY_EXTENSION
        return RelExtension.from_tuples(loader.tuple_set(st))

    for line_no, st in loader.interp_lines:
        head = st.peek()
        if head.text == "R":
            loader.access_line(st)
            continue
        if head.text != "J":
            raise ParseError("expected a 'J' interpretation line in a nonstandard model",
                             head.line, head.col)
        st.next()
        if st.peek().kind == "ident" and st.peek().text == "default" and loader.signature.kind_of("default") is None:
            st.next()
            sym, kind = loader.symbol(st)
            if kind == "relation":
                raise ParseError(f"relation '{sym}' takes no default", line_no)
            if kind == "constant":
                st.expect_punct("@")
                world = loader.world(st)
                st.expect_punct("=")
                value = loader.element(st)
                st.expect_eof()
                if (sym, world) in defaults:
                    raise ParseError(f"duplicate default for '{sym}' at '{world}'", line_no)
                defaults[(sym, world)] = value
            else:
                args = loader.element_tuple(st)
                st.expect_punct("@")
                world = loader.world(st)
                st.expect_punct("=")
                value = loader.element(st)
                st.expect_eof()
                table = fun_defaults.setdefault((sym, world), {})
                if args in table:
                    raise ParseError(f"duplicate default entry for '{sym}' at '{world}'", line_no)
                table[args] = value
            continue

        sym, kind = loader.symbol(st)
        if kind == "relation":
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("=")
            tuples = loader.rel_value(st, sym)
            st.expect_eof()
            if (sym, world) in relations:
                raise ParseError(f"duplicate extension for '{sym}' at '{world}'", line_no)
            relations[(sym, world)] = RelExtension.from_tuples(tuples)
        elif kind == "constant":
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("[")
            key = extension_key(st)
            st.expect_punct("]")
            st.expect_punct("=")
            value = loader.element(st)
            st.expect_eof()
            if (sym, world, key) in overrides:
                raise ParseError(f"duplicate override for '{sym}' at '{world}'", line_no)
            overrides[(sym, world, key)] = value
        else:
            args = loader.element_tuple(st)
            st.expect_punct("@")
            world = loader.world(st)
            st.expect_punct("[")
            key = extension_key(st)
            st.expect_punct("]")
            st.expect_punct("=")
            value = loader.element(st)
            st.expect_eof()
            table = fun_overrides.setdefault((sym, world, key), {})
            if args in table:
                raise ParseError(f"duplicate override entry for '{sym}' at '{world}'", line_no)
            table[args] = value

    defaults.update(fun_defaults)
    overrides.update(fun_overrides)
    return NonStandardModel(
        signature=loader.signature,
        frame=loader.frame(),
        defaults=defaults,
        overrides=overrides,
        relations=relations,
    )


def parse_model(text: str) -> Model:
    """Parse a model file, dispatching on the header line."""
    loader = _Loader(text)
    if loader.kind == "standard":
        return _load_standard(loader)
    return _load_nonstandard(loader)


def load_model(path: str | Path) -> Model:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def parse_valuation(model: Model, text: str) -> dict[str, DomainElement]:
    """Parse ``"x=a,y=o"`` against a model's signature and domains."""
    valuation: dict[str, DomainElement] = {}
    elements = {e.name: e for e in model.frame.agents + model.frame.objects}
    if not text.strip():
        return valuation
    for part in text.split(","):
        if "=" not in part:
            raise ParseError(f"bad valuation entry '{part.strip()}', expected name=element")
        var, _, name = part.partition("=")
        var, name = var.strip(), name.strip()
        ty = model.signature.var_type(var)
        element = elements.get(name)
        if element is None:
            raise ModelError(f"'{name}' is not a domain element of this model")
        if element.sort is not ty:
            raise ModelError(f"element '{name}' has sort {element.sort}, but '{var}' has type {ty}")
        valuation[var] = element
    return valuation


# ---------------------------------------------------------------------------
# Serialization


def _sorted_tuples(tuples) -> list[tuple[DomainElement, ...]]:
    return sorted(tuples, key=lambda t: (len(t), tuple(element_key(e) for e in t)))


def _render_tuple_set(tuples) -> str:
    items = ", ".join(f"({', '.join(e.name for e in t)})" for t in _sorted_tuples(tuples))
    return "{ " + items + " }" if items else "{ }"


def _frame_lines(model: Model) -> list[str]:
    frame = model.frame
    lines = [
        "agents " + ", ".join(e.name for e in frame.agents),
        "objects " + ", ".join(e.name for e in frame.objects),
        "worlds " + ", ".join(frame.worlds),
    ]
    index = {w: i for i, w in enumerate(frame.worlds)}
    for agent in frame.agents:
        pairs = sorted(frame.access[agent], key=lambda p: (index[p[0]], index[p[1]]))
        if pairs:
            lines.append(f"R {agent.name} : " + ", ".join(f"{a} -> {b}" for a, b in pairs))
    return lines


def serialize_standard(model: StandardModel) -> str:
    lines = ["model standard"]
    lines.extend(model.signature.to_source().splitlines())
    lines.extend(_frame_lines(model))
    for name in sorted(model.signature.constants):
        for world in model.frame.worlds:
            lines.append(f"I {name} @ {world} = {model.constants[(name, world)].name}")
    for name in sorted(model.signature.functions):
        for world in model.frame.worlds:
            table = model.functions[(name, world)]
            for args in _sorted_tuples(table):
                args_src = ", ".join(e.name for e in args)
                lines.append(f"I {name}({args_src}) @ {world} = {table[args].name}")
    for name in sorted(model.signature.relations):
        arity = len(model.signature.relations[name])
        for world in model.frame.worlds:
            tuples = model.relations[(name, world)]
            if arity == 0:
                lines.append(f"I {name} @ {world} = {'true' if tuples else 'false'}")
            else:
                lines.append(f"I {name} @ {world} = {_render_tuple_set(tuples)}")
    return "\n".join(lines) + "\n"


def _render_extension_key(model: NonStandardModel, key: RelExtension) -> str:
    if key == EMPTY_EXTENSION:
        return "empty"
    if key == model.diagonal:
        return "diag"
    return _render_tuple_set(key.tuples)


def serialize_nonstandard(model: NonStandardModel) -> str:
    lines = ["model nonstandard"]
    lines.extend(model.signature.to_source().splitlines())
    lines.extend(_frame_lines(model))
    for name in sorted(model.signature.relations):
        arity = len(model.signature.relations[name])
        for world in model.frame.worlds:
            ext = model.relations[(name, world)]
            if arity == 0:
                lines.append(f"J {name} @ {world} = {'true' if len(ext) else 'false'}")
            else:
                lines.append(f"J {name} @ {world} = {_render_tuple_set(ext.tuples)}")
    for name in sorted(model.signature.constants):
        for world in model.frame.worlds:
            value = model.defaults[(name, world)]
            assert isinstance(value, DomainElement)
            lines.append(f"J default {name} @ {world} = {value.name}")
    for name in sorted(model.signature.functions):
        for world in model.frame.worlds:
            table = model.defaults[(name, world)]
            for args in _sorted_tuples(table):
                args_src = ", ".join(e.name for e in args)
                lines.append(f"J default {name}({args_src}) @ {world} = {table[args].name}")

    world_index = {w: i for i, w in enumerate(model.frame.worlds)}
    overrides = sorted(
        model.overrides,
        key=lambda k: (
            k[0],
            world_index[k[1]],
            len(k[2].tuples),
            tuple(tuple(element_key(e) for e in t) for t in k[2].tuples),
        ),
    )
    for sym, world, ext in overrides:
        value = model.overrides[(sym, world, ext)]
        key_src = _render_extension_key(model, ext)
        if isinstance(value, DomainElement):
            lines.append(f"J {sym} @ {world} [ {key_src} ] = {value.name}")
        else:
            for args in _sorted_tuples(value):
                args_src = ", ".join(e.name for e in args)
                lines.append(f"J {sym}({args_src}) @ {world} [ {key_src} ] = {value[args].name}")
    return "\n".join(lines) + "\n"


def serialize_model(model: Model) -> str:
    if isinstance(model, StandardModel):
        return serialize_standard(model)
    return serialize_nonstandard(model)
