"""Finite frames, standard models, satisfaction and bounded countermodel search.

A model interprets every declared constant and function symbol at every
world (totality is validated at construction); relation symbols default to
the empty extension at worlds where no tuples are given.  Equality is never
stored: its extension is the diagonal by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import BoundsTooLarge, ModelError, UnboundVariable
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
    TypeTag,
    Var,
    check_formula,
    free_vars,
)

Valuation = Mapping[str, "DomainElement"]


@dataclass(frozen=True)
class DomainElement:
    """A member of one of the two disjoint sorts; the sort is part of identity."""

    sort: TypeTag
    name: str

    def __post_init__(self) -> None:
        if self.sort is AGTOBJ:
            raise ModelError(f"domain element '{self.name}' must have sort agt or obj")

    def __str__(self) -> str:
        return self.name


def element_key(e: DomainElement) -> tuple[str, str]:
    """Canonical ordering key: agents before objects, then by name."""
    return (e.sort.value, e.name)


@dataclass(frozen=True)
class Frame:
    """Two sorted non-empty domains, non-empty worlds, and one accessibility
    relation per agent (omitted agents get the empty relation)."""

    agents: tuple[DomainElement, ...]
    objects: tuple[DomainElement, ...]
    worlds: tuple[str, ...]
    access: Mapping[DomainElement, frozenset[tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "worlds", tuple(self.worlds))
        if not self.agents:
            raise ModelError("the agent domain must be non-empty")
        if not self.objects:
            raise ModelError("the object domain must be non-empty")
        if not self.worlds:
            raise ModelError("the set of worlds must be non-empty")
        for e in self.agents:
            if e.sort is not AGT:
                raise ModelError(f"'{e.name}' listed as an agent but has sort {e.sort}")
        for e in self.objects:
            if e.sort is not OBJ:
                raise ModelError(f"'{e.name}' listed as an object but has sort {e.sort}")
        if len(set(self.agents)) != len(self.agents) or len(set(self.objects)) != len(self.objects):
            raise ModelError("domain elements must be distinct")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelError("worlds must be distinct")
        world_set = set(self.worlds)
        agent_set = set(self.agents)
        access = {agent: frozenset() for agent in self.agents}
        for agent, pairs in self.access.items():
            if agent not in agent_set:
                raise ModelError(f"accessibility given for unknown agent '{agent.name}'")
            pairs = frozenset(tuple(p) for p in pairs)
            for a, b in pairs:
                if a not in world_set or b not in world_set:
                    raise ModelError(f"accessibility pair ({a}, {b}) outside the worlds")
            access[agent] = pairs
        object.__setattr__(self, "access", access)
        world_index = {w: i for i, w in enumerate(self.worlds)}
        succ = {
            (agent, w): tuple(
                sorted((b for a, b in access[agent] if a == w), key=world_index.__getitem__)
            )
            for agent in self.agents
            for w in self.worlds
        }
        object.__setattr__(self, "_succ", succ)

    def elements(self, ty: TypeTag) -> tuple[DomainElement, ...]:
        if ty is AGT:
            return self.agents
        if ty is OBJ:
            return self.objects
        return self.agents + self.objects

    def successors(self, agent: DomainElement, world: str) -> tuple[str, ...]:
        return self._succ[(agent, world)]  # type: ignore[attr-defined]


def domain_product(frame: Frame, types: tuple[TypeTag, ...]) -> Iterator[tuple[DomainElement, ...]]:
    """All argument tuples of the given positional types, in canonical order."""
    return itertools.product(*(frame.elements(ty) for ty in types))


@dataclass(frozen=True)
class StandardModel:
    """World-relative interpretation over a frame (the Kripke semantics)."""

    signature: Signature
    frame: Frame
    constants: Mapping[tuple[str, str], DomainElement] = field(default_factory=dict)
    functions: Mapping[tuple[str, str], Mapping[tuple[DomainElement, ...], DomainElement]] = field(
        default_factory=dict
    )
    relations: Mapping[tuple[str, str], frozenset[tuple[DomainElement, ...]]] = field(
        default_factory=dict
    )

    def __post_init__(self) -> None:
        sig, frame = self.signature, self.frame
        members = {AGT: set(frame.agents), OBJ: set(frame.objects)}
        members[AGTOBJ] = members[AGT] | members[OBJ]

        constants = dict(self.constants)
        for key, value in constants.items():
            name, world = key
            if name not in sig.constants:
                raise ModelError(f"interpretation for undeclared constant '{name}'")
            if world not in frame.worlds:
                raise ModelError(f"interpretation of '{name}' at unknown world '{world}'")
            if value not in members[sig.constants[name]]:
                raise ModelError(
                    f"value of constant '{name}' at '{world}' is not a {sig.constants[name]} element"
                )
        for name in sig.constants:
            for world in frame.worlds:
                if (name, world) not in constants:
                    raise ModelError(f"constant '{name}' has no interpretation at world '{world}'")

        functions = {key: dict(table) for key, table in self.functions.items()}
        for (name, world), table in functions.items():
            if name not in sig.functions:
                raise ModelError(f"interpretation for undeclared function '{name}'")
            if world not in frame.worlds:
                raise ModelError(f"interpretation of '{name}' at unknown world '{world}'")
            arg_types, result = sig.functions[name]
            expected = set(domain_product(frame, arg_types))
            given = {tuple(args) for args in table}
            if given - expected:
                raise ModelError(f"table for '{name}' at '{world}' has entries outside its domain")
            missing = expected - given
            if missing:
                args = ", ".join(e.name for e in sorted(missing, key=lambda t: [element_key(e) for e in t])[0])
                raise ModelError(f"table for '{name}' at '{world}' is not total (missing ({args}))")
            for value in table.values():
                if value not in members[result]:
                    raise ModelError(f"table for '{name}' at '{world}' has a non-{result} value")
        for name in sig.functions:
            for world in frame.worlds:
                if (name, world) not in functions:
                    raise ModelError(f"function '{name}' has no table at world '{world}'")

        relations = {key: frozenset(tuple(t) for t in tuples) for key, tuples in self.relations.items()}
        for (name, world), tuples in relations.items():
            if name == "=" or name not in sig.relations:
                raise ModelError(f"interpretation for undeclared relation '{name}'")
            if world not in frame.worlds:
                raise ModelError(f"interpretation of '{name}' at unknown world '{world}'")
            arg_types = sig.relations[name]
            for tup in tuples:
                if len(tup) != len(arg_types):
                    raise ModelError(
                        f"tuple of arity {len(tup)} in '{name}' at '{world}' (expected {len(arg_types)})"
                    )
                for e, ty in zip(tup, arg_types):
                    if e not in members[ty]:
                        raise ModelError(
                            f"element '{e.name}' in '{name}' at '{world}' is not a {ty} element"
                        )
        for name in sig.relations:
            for world in frame.worlds:
                relations.setdefault((name, world), frozenset())

        object.__setattr__(self, "constants", constants)
        object.__setattr__(self, "functions", functions)
        object.__setattr__(self, "relations", relations)


def extension_std(model: StandardModel, world: str, valuation: Valuation, term: Term) -> DomainElement:
    """The element a term denotes at a world under a valuation."""
    match term:
        case Var(name):
            try:
                return valuation[name]
            except KeyError:
                raise UnboundVariable(f"variable '{name}' has no value in the valuation") from None
        case Const(name):
            return model.constants[(name, world)]
        case App(fn, args):
            table = model.functions[(fn, world)]
            return table[tuple(extension_std(model, world, valuation, a) for a in args)]
    raise TypeError(f"not a term: {term!r}")


def satisfies_std(model: StandardModel, world: str, valuation: Valuation, formula: Formula) -> bool:
    """Truth at a world under a valuation covering the free variables."""
    match formula:
        case Atom("=", (left, right)):
            return extension_std(model, world, valuation, left) == extension_std(
                model, world, valuation, right
            )
        case Atom(rel, args):
            tup = tuple(extension_std(model, world, valuation, a) for a in args)
            return tup in model.relations[(rel, world)]
        case Neg(body):
            return not satisfies_std(model, world, valuation, body)
        case Conj(left, right):
            return satisfies_std(model, world, valuation, left) and satisfies_std(
                model, world, valuation, right
            )
        case Forall(var, body):
            ty = model.signature.var_type(var)
            base = dict(valuation)
            for d in model.frame.elements(ty):
                base[var] = d
                if not satisfies_std(model, world, base, body):
                    return False
            return True
        case Know(agent, body):
            who = extension_std(model, world, valuation, agent)
            return all(
                satisfies_std(model, w2, valuation, body)
                for w2 in model.frame.successors(who, world)
            )
    raise TypeError(f"not a formula: {formula!r}")


def iter_valuations(
    model_frame: Frame, sig: Signature, variables: tuple[str, ...]
) -> Iterator[dict[str, DomainElement]]:
    """All assignments of the given variables into their sorted domains,
    in canonical order (last variable varies fastest)."""
    domains = [model_frame.elements(sig.var_type(v)) for v in variables]
    for combo in itertools.product(*domains):
        yield dict(zip(variables, combo))


def find_falsifying_std(
    model: StandardModel, formula: Formula
) -> tuple[str, dict[str, DomainElement]] | None:
    """First (world, valuation) falsifying the formula, scanning worlds in
    frame order and free-variable assignments in canonical order."""
    fvs = tuple(sorted(free_vars(formula)))
    for world in model.frame.worlds:
        for valuation in iter_valuations(model.frame, model.signature, fvs):
            if not satisfies_std(model, world, valuation, formula):
                return world, valuation
    return None


def valid_in_model_std(model: StandardModel, formula: Formula) -> bool:
    """Truth at every world under every assignment of the free variables."""
    return find_falsifying_std(model, formula) is None


# ---------------------------------------------------------------------------
# Bounded countermodel enumeration


@dataclass(frozen=True)
class SearchBounds:
    max_agents: int = 2
    max_objects: int = 1
    max_worlds: int = 2

    def __post_init__(self) -> None:
        if min(self.max_agents, self.max_objects, self.max_worlds) < 1:
            raise ValueError("all search bounds must be at least 1")


DEFAULT_ENUM_CEILING = 5_000_000


@dataclass(frozen=True)
class Countermodel:
    model: StandardModel
    world: str
    valuation: dict[str, DomainElement]


@dataclass(frozen=True)
class SearchResult:
    found: Countermodel | None
    models_checked: int


def occurring_symbols(sig: Signature, formula: Formula) -> tuple[list[str], list[str], list[str]]:
    """Sorted constants, functions and relations mentioned by the formula
    (equality excluded; it is interpreted by construction)."""
    consts: set[str] = set()
    funs: set[str] = set()
    rels: set[str] = set()

    def walk_term(t: Term) -> None:
        match t:
            case Var(_):
                pass
            case Const(name):
                consts.add(name)
            case App(fn, args):
                funs.add(fn)
                for a in args:
                    walk_term(a)

    def walk(f: Formula) -> None:
        match f:
            case Atom(rel, args):
                if rel != "=":
                    rels.add(rel)
                for a in args:
                    walk_term(a)
            case Neg(body):
                walk(body)
            case Conj(left, right):
                walk(left)
                walk(right)
            case Know(agent, body):
                walk_term(agent)
                walk(body)
            case Forall(_, body):
                walk(body)

    walk(formula)
    return sorted(consts), sorted(funs), sorted(rels)


def _restricted_signature(sig: Signature, consts: list[str], funs: list[str], rels: list[str]) -> Signature:
    return Signature(
        variables=dict(sig.variables),
        constants={c: sig.constants[c] for c in consts},
        functions={f: sig.functions[f] for f in funs},
        relations={r: sig.relations[r] for r in rels},
    )


def count_models(sig: Signature, formula: Formula, bounds: SearchBounds) -> int:
    """Exact number of models the bounded enumeration would visit."""
    consts, funs, rels = occurring_symbols(sig, formula)
    total = 0
    for n_w in range(1, bounds.max_worlds + 1):
        for n_a in range(1, bounds.max_agents + 1):
            for n_o in range(1, bounds.max_objects + 1):
                size = {AGT: n_a, OBJ: n_o, AGTOBJ: n_a + n_o}
                block = 2 ** (n_w * n_w * n_a)
                for c in consts:
                    block *= size[sig.constants[c]] ** n_w
                for f in funs:
                    arg_types, result = sig.functions[f]
                    tuples = 1
                    for ty in arg_types:
                        tuples *= size[ty]
                    block *= size[result] ** (tuples * n_w)
                for r in rels:
                    tuples = 1
                    for ty in sig.relations[r]:
                        tuples *= size[ty]
                    block *= 2 ** (tuples * n_w)
                total += block
    return total


def enumerate_countermodel(
    sig: Signature,
    formula: Formula,
    bounds: SearchBounds,
    *,
    enum_ceiling: int = DEFAULT_ENUM_CEILING,
) -> SearchResult:
    """Exhaustively search all standard models up to the bounds.

    Canonical enumeration order: domain sizes ascend with worlds outermost,
    then agents, then objects; within a size, accessibility relations run
    through all subsets of world pairs per agent (row-major pair list,
    subsets by ascending bitmask, last agent varying fastest); then the
    interpretations of the symbols occurring in the formula advance as an
    odometer (constants, then functions, then relations, each name-sorted,
    worlds in index order, last slot varying fastest).  Returns the first
    falsifying (model, world, valuation); its absence within the bounds is
    reported as such and is not a validity proof.
    """
    check_formula(sig, formula)
    total = count_models(sig, formula, bounds)
    if total > enum_ceiling:
        raise BoundsTooLarge(
            f"bounded search would enumerate {total} models, above the ceiling {enum_ceiling}"
        )
    consts, funs, rels = occurring_symbols(sig, formula)
    model_sig = _restricted_signature(sig, consts, funs, rels)

    checked = 0
    for n_w in range(1, bounds.max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n_w))
        pair_list = [(a, b) for a in worlds for b in worlds]
        for n_a in range(1, bounds.max_agents + 1):
            agents = tuple(DomainElement(AGT, f"a{i}") for i in range(n_a))
            for n_o in range(1, bounds.max_objects + 1):
                objects = tuple(DomainElement(OBJ, f"o{i}") for i in range(n_o))

                # Interpretation slots, fixed for this block of sizes.
                probe = Frame(agents, objects, worlds)
                slots: list[tuple] = []
                for c in consts:
                    choices = probe.elements(model_sig.constants[c])
                    for w in worlds:
                        slots.append(("const", c, w, choices))
                for f in funs:
                    arg_types, result = model_sig.functions[f]
                    arg_tuples = tuple(domain_product(probe, arg_types))
                    choices = probe.elements(result)
                    for w in worlds:
                        for args in arg_tuples:
                            slots.append(("fun", f, w, args, choices))
                for r in rels:
                    tuples = tuple(domain_product(probe, model_sig.relations[r]))
                    for w in worlds:
                        slots.append(("rel", r, w, tuples))

                slot_ranges = [
                    range(1 << len(s[3])) if s[0] == "rel" else range(len(s[-1]))
                    for s in slots
                ]
                for masks in itertools.product(range(1 << len(pair_list)), repeat=n_a):
                    access = {
                        agents[k]: frozenset(
                            pair for bit, pair in enumerate(pair_list) if masks[k] >> bit & 1
                        )
                        for k in range(n_a)
                    }
                    frame = Frame(agents, objects, worlds, access)
                    for picks in itertools.product(*slot_ranges):
                        constants: dict = {}
                        functions: dict = {}
                        relations: dict = {}
                        for slot, pick in zip(slots, picks):
                            if slot[0] == "const":
                                _, name, w, choices = slot
                                constants[(name, w)] = choices[pick]
                            elif slot[0] == "fun":
                                _, name, w, args, choices = slot
                                functions.setdefault((name, w), {})[args] = choices[pick]
                            else:
                                _, name, w, tuples = slot
                                relations[(name, w)] = frozenset(
                                    t for bit, t in enumerate(tuples) if pick >> bit & 1
                                )
                        model = StandardModel(model_sig, frame, constants, functions, relations)
                        checked += 1
                        hit = find_falsifying_std(model, formula)
                        if hit is not None:
                            world, valuation = hit
                            assert not satisfies_std(model, world, valuation, formula)
                            return SearchResult(Countermodel(model, world, valuation), checked)
    return SearchResult(None, checked)
