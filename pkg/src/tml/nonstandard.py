"""Extension-keyed models: constants and function symbols are interpreted
relative to a relation extension X.

An atom P(t1..tn) evaluates its arguments with X = the extension of P at
the current world (the diagonal for equality); the index of a knowledge
operator is evaluated with X = the empty extension.  Lookup is total via a
mandatory per-world default, with finitely many explicit overrides at
specific extension keys.  Keys compare extensionally: two extensions are
the same key exactly when they are the same set of tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import ModelError, TypingError, UnboundVariable
from .syntax import (
    AGT,
    AGTOBJ,
    OBJ,
    App,
    Atom,
    Conj,
    Const,
    Forall,
    Formula,
    Know,
    Neg,
    Signature,
    Term,
    Var,
    free_vars,
)
from .semantics import (
    DomainElement,
    Frame,
    StandardModel,
    Valuation,
    domain_product,
    element_key,
    iter_valuations,
)


def _tuple_key(tup: tuple[DomainElement, ...]) -> tuple:
    return (len(tup), tuple(element_key(e) for e in tup))


@dataclass(frozen=True)
class RelExtension:
    """A finite set of element tuples in canonical sorted order.

    Equality and hashing are extensional, so the empty extension is one
    object regardless of intended arity, and two keys collide exactly when
    they denote the same set.
    """

    tuples: tuple[tuple[DomainElement, ...], ...] = ()

    def __post_init__(self) -> None:
        canon = tuple(sorted({tuple(t) for t in self.tuples}, key=_tuple_key))
        object.__setattr__(self, "tuples", canon)

    @classmethod
    def from_tuples(cls, tuples: Iterable[tuple[DomainElement, ...]]) -> RelExtension:
        return cls(tuple(tuples))

    @classmethod
    def diagonal(cls, elements: Iterable[DomainElement]) -> RelExtension:
        return cls(tuple((e, e) for e in elements))

    def __contains__(self, tup: tuple[DomainElement, ...]) -> bool:
        return tup in self.tuples

    def __iter__(self) -> Iterator[tuple[DomainElement, ...]]:
        return iter(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)


EMPTY_EXTENSION = RelExtension()

# An interpretation value: an element for a constant, a total table for a
# function symbol.
InterpValue = DomainElement | Mapping[tuple[DomainElement, ...], DomainElement]


@dataclass(frozen=True)
class NonStandardModel:
    signature: Signature
    frame: Frame
    defaults: Mapping[tuple[str, str], InterpValue] = field(default_factory=dict)
    overrides: Mapping[tuple[str, str, RelExtension], InterpValue] = field(default_factory=dict)
    relations: Mapping[tuple[str, str], RelExtension] = field(default_factory=dict)

    def __post_init__(self) -> None:
        sig, frame = self.signature, self.frame
        members = {AGT: set(frame.agents), OBJ: set(frame.objects)}
        members[AGTOBJ] = members[AGT] | members[OBJ]

        def check_value(sym: str, world: str, value: InterpValue, where: str) -> InterpValue:
            if sym in sig.constants:
                if not isinstance(value, DomainElement):
                    raise ModelError(f"{where} for constant '{sym}' must be a single element")
                if value not in members[sig.constants[sym]]:
                    raise ModelError(
                        f"{where} for '{sym}' at '{world}' is not a {sig.constants[sym]} element"
                    )
                return value
            arg_types, result = sig.functions[sym]
            if isinstance(value, DomainElement):
                raise ModelError(f"{where} for function '{sym}' must be a table")
            table = {tuple(args): res for args, res in value.items()}
            expected = set(domain_product(frame, arg_types))
            if set(table) != expected:
                raise ModelError(f"{where} table for '{sym}' at '{world}' is not total")
            for res in table.values():
                if res not in members[result]:
                    raise ModelError(f"{where} table for '{sym}' at '{world}' has a non-{result} value")
            return table

        defaults = {}
        for (sym, world), value in self.defaults.items():
            if sym not in sig.constants and sym not in sig.functions:
                raise ModelError(f"default interpretation for undeclared symbol '{sym}'")
            if world not in frame.worlds:
                raise ModelError(f"default for '{sym}' at unknown world '{world}'")
            defaults[(sym, world)] = check_value(sym, world, value, "default")
        for sym in itertools.chain(sig.constants, sig.functions):
            for world in frame.worlds:
                if (sym, world) not in defaults:
                    raise ModelError(f"'{sym}' has no default interpretation at world '{world}'")

        overrides = {}
        for (sym, world, ext), value in self.overrides.items():
            if sym not in sig.constants and sym not in sig.functions:
                raise ModelError(f"override for undeclared symbol '{sym}'")
            if world not in frame.worlds:
                raise ModelError(f"override for '{sym}' at unknown world '{world}'")
            if not isinstance(ext, RelExtension):
                raise ModelError(f"override key for '{sym}' must be a relation extension")
            for tup in ext:
                for e in tup:
                    if e not in members[AGTOBJ]:
                        raise ModelError(
                            f"override key for '{sym}' mentions '{e.name}', not a domain element"
                        )
            overrides[(sym, world, ext)] = check_value(sym, world, value, "override")

        relations = {}
        for (rel, world), ext in self.relations.items():
            if rel == "=" or rel not in sig.relations:
                raise ModelError(f"extension given for undeclared relation '{rel}'")
            if world not in frame.worlds:
                raise ModelError(f"extension of '{rel}' at unknown world '{world}'")
            if not isinstance(ext, RelExtension):
                ext = RelExtension.from_tuples(ext)
            arg_types = sig.relations[rel]
            for tup in ext:
                if len(tup) != len(arg_types):
                    raise ModelError(
                        f"tuple of arity {len(tup)} in '{rel}' at '{world}' (expected {len(arg_types)})"
                    )
                for e, ty in zip(tup, arg_types):
                    if e not in members[ty]:
                        raise ModelError(
                            f"element '{e.name}' in '{rel}' at '{world}' is not a {ty} element"
                        )
            relations[(rel, world)] = ext
        for rel in sig.relations:
            for world in frame.worlds:
                relations.setdefault((rel, world), EMPTY_EXTENSION)

        object.__setattr__(self, "defaults", defaults)
        object.__setattr__(self, "overrides", overrides)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "_diag", RelExtension.diagonal(frame.agents + frame.objects))

    @property
    def diagonal(self) -> RelExtension:
        return self._diag  # type: ignore[attr-defined]


def j_lookup(model: NonStandardModel, sym: str, world: str, key: RelExtension) -> InterpValue:
    """Interpretation of a constant or function symbol at (world, key):
    the override when one is declared, else the world's default."""
    value = model.overrides.get((sym, world, key))
    if value is not None:
        return value
    return model.defaults[(sym, world)]


def extension_ns(
    model: NonStandardModel,
    world: str,
    valuation: Valuation,
    key: RelExtension,
    term: Term,
) -> DomainElement:
    """Denotation of a term; the same key threads through all subterms."""
    match term:
        case Var(name):
            try:
                return valuation[name]
            except KeyError:
                raise UnboundVariable(f"variable '{name}' has no value in the valuation") from None
        case Const(name):
            return j_lookup(model, name, world, key)  # type: ignore[return-value]
        case App(fn, args):
            table = j_lookup(model, fn, world, key)
            point = tuple(extension_ns(model, world, valuation, key, a) for a in args)
            return table[point]  # type: ignore[index]
    raise TypeError(f"not a term: {term!r}")


def satisfies_ns(model: NonStandardModel, world: str, valuation: Valuation, formula: Formula) -> bool:
    """Truth at a world; atoms key their arguments by the relation's own
    extension (the diagonal for equality), knowledge indices by the empty
    extension."""
    match formula:
        case Atom("=", (left, right)):
            key = model.diagonal
            return extension_ns(model, world, valuation, key, left) == extension_ns(
                model, world, valuation, key, right
            )
        case Atom(rel, args):
            key = model.relations[(rel, world)]
            tup = tuple(extension_ns(model, world, valuation, key, a) for a in args)
            return tup in key
        case Neg(body):
            return not satisfies_ns(model, world, valuation, body)
        case Conj(left, right):
            return satisfies_ns(model, world, valuation, left) and satisfies_ns(
                model, world, valuation, right
            )
        case Forall(var, body):
            ty = model.signature.var_type(var)
            base = dict(valuation)
            for d in model.frame.elements(ty):
                base[var] = d
                if not satisfies_ns(model, world, base, body):
                    return False
            return True
        case Know(agent, body):
            who = extension_ns(model, world, valuation, EMPTY_EXTENSION, agent)
            return all(
                satisfies_ns(model, w2, valuation, body)
                for w2 in model.frame.successors(who, world)
            )
    raise TypeError(f"not a formula: {formula!r}")


def find_falsifying_ns(
    model: NonStandardModel, formula: Formula
) -> tuple[str, dict[str, DomainElement]] | None:
    """First (world, valuation) falsifying the formula, in canonical order."""
    fvs = tuple(sorted(free_vars(formula)))
    for world in model.frame.worlds:
        for valuation in iter_valuations(model.frame, model.signature, fvs):
            if not satisfies_ns(model, world, valuation, formula):
                return world, valuation
    return None


def valid_in_model_ns(model: NonStandardModel, formula: Formula) -> bool:
    return find_falsifying_ns(model, formula) is None


def lift_standard(model: StandardModel) -> NonStandardModel:
    """The key-insensitive counterpart of a standard model: every default is
    the standard interpretation and there are no overrides, so satisfaction
    agrees with the standard semantics on every formula."""
    defaults: dict[tuple[str, str], InterpValue] = {}
    defaults.update(model.constants)
    defaults.update(model.functions)
    relations = {
        key: RelExtension.from_tuples(tuples) for key, tuples in model.relations.items()
    }
    return NonStandardModel(
        signature=model.signature,
        frame=model.frame,
        defaults=defaults,
        overrides={},
        relations=relations,
    )


# ---------------------------------------------------------------------------
# Built-in models


def build_transfer_countermodel(
    sig: Signature, x: str = "x", c: str = "c", P: str = "P"
) -> tuple[NonStandardModel, str, dict[str, DomainElement]]:
    """The two-agent model falsifying ``x = c -> (P(x) -> P(c))``.

    Domain {alpha, beta} (plus a padding object), one world, empty
    accessibility.  The constant denotes alpha under the diagonal key and
    beta under the key {(alpha)}, which is also the extension of P; the
    returned valuation sends x to alpha.
    """
    if sig.var_type(x) is not AGT:
        raise TypingError(f"variable '{x}' must have type agt")
    if sig.const_type(c) is not AGT:
        raise TypingError(f"constant '{c}' must have type agt")
    if sig.rel_type(P) != (AGTOBJ,):
        raise TypingError(f"relation '{P}' must have type agtobj")

    alpha = DomainElement(AGT, "alpha")
    beta = DomainElement(AGT, "beta")
    pad = DomainElement(OBJ, "o")
    frame = Frame((alpha, beta), (pad,), ("w",))
    singleton_alpha = RelExtension.from_tuples([(alpha,)])
    diag = RelExtension.diagonal((alpha, beta, pad))
    defaults: dict[tuple[str, str], InterpValue] = {(c, "w"): alpha}
    for other in sig.constants:
        defaults.setdefault((other, "w"), alpha if sig.constants[other] is AGT else pad)
    for fn, (arg_types, result) in sig.functions.items():
        value = alpha if result is AGT else pad
        defaults[(fn, "w")] = {args: value for args in domain_product(frame, arg_types)}
    model = NonStandardModel(
        signature=sig,
        frame=frame,
        defaults=defaults,
        overrides={(c, "w", diag): alpha, (c, "w", singleton_alpha): beta},
        relations={(P, "w"): singleton_alpha},
    )
    return model, "w", {x: alpha}


#: Fixed signature of the two-authors example.
LEWIS_SIGNATURE = Signature(
    constants={"lewis": AGT},
    relations={"SL": (AGT,), "CF": (AGT,)},
)


def build_lewis_model(swapped: bool = False) -> tuple[NonStandardModel, str]:
    """One world, two agents; the constant ``lewis`` denotes a different
    agent under SL's extension than under CF's.  With ``swapped`` the SL-key
    override is redirected so that ``SL(lewis)`` comes out false."""
    ci = DomainElement(AGT, "ci_lewis")
    d = DomainElement(AGT, "d_lewis")
    pad = DomainElement(OBJ, "o")
    frame = Frame((ci, d), (pad,), ("w",))
    sl_ext = RelExtension.from_tuples([(ci,)])
    cf_ext = RelExtension.from_tuples([(d,)])
    model = NonStandardModel(
        signature=LEWIS_SIGNATURE,
        frame=frame,
        defaults={("lewis", "w"): ci},
        overrides={
            ("lewis", "w", sl_ext): d if swapped else ci,
            ("lewis", "w", cf_ext): d,
        },
        relations={("SL", "w"): sl_ext, ("CF", "w"): cf_ext},
    )
    return model, "w"
