"""Executable verification suite: deterministic reports over the built-in
countermodels, bounded validity sweeps, and seeded fuzzing of the proof
system against the extension-keyed semantics.

Every report is a pure function of its inputs: a fixed seed and
configuration yield byte-identical machine-readable output (``CLAIM``
lines).  Failing items carry a re-checkable witness (serialized model,
world, valuation and formula).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import CaptureRisk
from .hilbert import (
    AxK,
    Barcan,
    Dd,
    Eid,
    Id,
    Kni,
    Ps,
    Ue,
    check_proof,
    instantiate_axiom,
    load_proof,
)
from .modelio import serialize_nonstandard, serialize_standard
from .nonstandard import (
    EMPTY_EXTENSION,
    NonStandardModel,
    RelExtension,
    build_transfer_countermodel,
    build_lewis_model,
    extension_ns,
    find_falsifying_ns,
    lift_standard,
    satisfies_ns,
)
from .parser import parse_formula
from .resources import data_path
from .semantics import (
    AGT,
    DomainElement,
    Frame,
    SearchBounds,
    StandardModel,
    DEFAULT_ENUM_CEILING,
    domain_product,
    enumerate_countermodel,
    extension_std,
    satisfies_std,
)
from .syntax import (
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
    disj,
    eq,
    format_formula,
    implies,
    substitute,
    substitute_term,
    term_vars,
)

# ---------------------------------------------------------------------------
# Reports


@dataclass
class Witness:
    """A re-checkable counterexample: feed the serialized model, world,
    valuation and formula back through satisfaction to reproduce it."""

    model_kind: str  # "standard" | "nonstandard"
    model_text: str
    world: str
    valuation: dict[str, str]
    formula: str
    observed: bool

    def to_lines(self) -> list[str]:
        val = ", ".join(f"{k}={v}" for k, v in sorted(self.valuation.items())) or "(empty)"
        head = [
            f"formula: {self.formula}",
            f"world: {self.world}",
            f"valuation: {val}",
            f"observed: {'true' if self.observed else 'false'}",
            f"model ({self.model_kind}):",
        ]
        return head + ["  " + line for line in self.model_text.splitlines()]


@dataclass
class ReportItem:
    label: str
    claim: str
    ok: bool
    cases: int = 1
    detail: str | None = None
    witness: Witness | None = None


@dataclass
class Report:
    title: str
    items: list[ReportItem]
    notes: list[str] = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(item.ok for item in self.items)

    def item(self, label: str) -> ReportItem:
        for item in self.items:
            if item.label == label:
                return item
        raise KeyError(label)

    def machine_lines(self) -> list[str]:
        seed = "-" if self.seed is None else str(self.seed)
        lines = [
            f"CLAIM {item.label} {'pass' if item.ok else 'fail'} {item.cases} {seed}"
            for item in self.items
        ]
        lines.append(f"RESULT {'pass' if self.passed else 'fail'}")
        return lines

    def to_machine(self) -> str:
        return "\n".join(self.machine_lines()) + "\n"

    def to_text(self) -> str:
        lines = [f"== {self.title} =="]
        for note in self.notes:
            lines.append(f"note: {note}")
        for item in self.items:
            status = "PASS" if item.ok else "FAIL"
            lines.append(f"[{status}] {item.label}: {item.claim} (cases={item.cases})")
            if item.detail:
                lines.append(f"    {item.detail}")
            if item.witness:
                lines.extend("    " + w for w in item.witness.to_lines())
        lines.append("")
        lines.extend(self.machine_lines())
        return "\n".join(lines) + "\n"


def _std_witness(model: StandardModel, world, valuation, formula, observed) -> Witness:
    return Witness(
        "standard",
        serialize_standard(model),
        world,
        {k: v.name for k, v in valuation.items()},
        format_formula(formula),
        observed,
    )


def _ns_witness(model: NonStandardModel, world, valuation, formula, observed) -> Witness:
    return Witness(
        "nonstandard",
        serialize_nonstandard(model),
        world,
        {k: v.name for k, v in valuation.items()},
        format_formula(formula),
        observed,
    )


# ---------------------------------------------------------------------------
# Fixed material


def basic_signature() -> Signature:
    """One agent variable, one agent constant, one unary agtobj relation —
    the signature of the shipped ``sig_basic.tms``."""
    return Signature(variables={"x": AGT}, constants={"c": AGT}, relations={"P": (AGTOBJ,)})


TRANSFER_FORMULA_TEXT = "x = c -> (P(x) -> P(c))"


def transfer_formula(sig: Signature | None = None) -> Formula:
    """The equality-transfer formula, valid in the standard semantics but
    falsifiable once constants are keyed by relation extensions."""
    return parse_formula(sig if sig is not None else basic_signature(), TRANSFER_FORMULA_TEXT)


#: Signature the fuzz generators draw from; extends the basic signature.
FUZZ_SIGNATURE = Signature(
    variables={"x": AGT, "y": AGT, "z": AGT, "u": OBJ, "v": OBJ},
    constants={"c": AGT, "d": AGT, "e": OBJ},
    functions={"f": ((AGTOBJ,), AGT), "g": ((OBJ,), OBJ), "mk": ((), AGT)},
    relations={"P": (AGTOBJ,), "U": (AGT,), "Q": (AGT, OBJ), "S": (OBJ,), "T": ()},
)


@dataclass(frozen=True)
class FuzzBounds:
    max_agents: int = 3
    max_objects: int = 2
    max_worlds: int = 3
    max_formula_depth: int = 5
    max_term_depth: int = 2
    max_overrides: int = 4

    def __post_init__(self) -> None:
        low = min(
            self.max_agents,
            self.max_objects,
            self.max_worlds,
            self.max_formula_depth,
            self.max_term_depth,
            self.max_overrides,
        )
        if low < 1:
            raise ValueError("all fuzz bounds must be at least 1")

    def describe(self) -> str:
        return (
            f"agents<={self.max_agents}, objects<={self.max_objects}, "
            f"worlds<={self.max_worlds}, formula depth<={self.max_formula_depth}, "
            f"term depth<={self.max_term_depth}, overrides<={self.max_overrides}"
        )


@dataclass(frozen=True)
class FuzzConfig:
    seed: int
    samples: int
    bounds: FuzzBounds = FuzzBounds()

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be at least 1")


# ---------------------------------------------------------------------------
# Random generators (all draws from deterministically ordered collections)


def _vars_of(sig: Signature, ty: TypeTag) -> list[str]:
    return sorted(n for n, t in sig.variables.items() if t is ty)


def _consts_of(sig: Signature, ty: TypeTag) -> list[str]:
    return sorted(n for n, t in sig.constants.items() if t is ty)


def random_frame(rng: random.Random, bounds: FuzzBounds) -> Frame:
    n_a = rng.randint(1, bounds.max_agents)
    n_o = rng.randint(1, bounds.max_objects)
    n_w = rng.randint(1, bounds.max_worlds)
    agents = tuple(DomainElement(AGT, f"a{i}") for i in range(n_a))
    objects = tuple(DomainElement(OBJ, f"o{i}") for i in range(n_o))
    worlds = tuple(f"w{i}" for i in range(n_w))
    access = {
        agent: frozenset(
            (w1, w2) for w1 in worlds for w2 in worlds if rng.random() < 0.4
        )
        for agent in agents
    }
    return Frame(agents, objects, worlds, access)


def random_standard_model(rng: random.Random, sig: Signature, bounds: FuzzBounds) -> StandardModel:
    frame = random_frame(rng, bounds)
    constants = {
        (name, world): rng.choice(frame.elements(sig.constants[name]))
        for name in sorted(sig.constants)
        for world in frame.worlds
    }
    functions = {}
    for name in sorted(sig.functions):
        arg_types, result = sig.functions[name]
        choices = frame.elements(result)
        for world in frame.worlds:
            functions[(name, world)] = {
                args: rng.choice(choices) for args in domain_product(frame, arg_types)
            }
    relations = {}
    for name in sorted(sig.relations):
        for world in frame.worlds:
            relations[(name, world)] = frozenset(
                t for t in domain_product(frame, sig.relations[name]) if rng.random() < 0.5
            )
    return StandardModel(sig, frame, constants, functions, relations)


def _random_small_extension(rng: random.Random, frame: Frame) -> RelExtension:
    everything = frame.agents + frame.objects
    arity = rng.randint(1, 2)
    size = rng.randint(0, 3)
    tuples = [
        tuple(rng.choice(everything) for _ in range(arity)) for _ in range(size)
    ]
    return RelExtension.from_tuples(tuples)


def random_extension_key(
    rng: random.Random, frame: Frame, relations: dict[tuple[str, str], RelExtension]
) -> RelExtension:
    roll = rng.random()
    if roll < 0.25:
        return RelExtension.diagonal(frame.agents + frame.objects)
    if roll < 0.40:
        return EMPTY_EXTENSION
    if roll < 0.80 and relations:
        keys = sorted(relations)
        return relations[keys[rng.randrange(len(keys))]]
    return _random_small_extension(rng, frame)


def random_nonstandard_model(
    rng: random.Random, sig: Signature, bounds: FuzzBounds
) -> NonStandardModel:
    frame = random_frame(rng, bounds)
    relations = {}
    for name in sorted(sig.relations):
        for world in frame.worlds:
            relations[(name, world)] = RelExtension.from_tuples(
                t for t in domain_product(frame, sig.relations[name]) if rng.random() < 0.5
            )
    defaults = {}
    for name in sorted(sig.constants):
        for world in frame.worlds:
            defaults[(name, world)] = rng.choice(frame.elements(sig.constants[name]))
    for name in sorted(sig.functions):
        arg_types, result = sig.functions[name]
        choices = frame.elements(result)
        for world in frame.worlds:
            defaults[(name, world)] = {
                args: rng.choice(choices) for args in domain_product(frame, arg_types)
            }
    overrides = {}
    symbols = sorted(sig.constants) + sorted(sig.functions)
    for _ in range(rng.randint(0, bounds.max_overrides)):
        sym = rng.choice(symbols)
        world = rng.choice(frame.worlds)
        key = random_extension_key(rng, frame, relations)
        if sym in sig.constants:
            value = rng.choice(frame.elements(sig.constants[sym]))
        else:
            arg_types, result = sig.functions[sym]
            choices = frame.elements(result)
            value = {args: rng.choice(choices) for args in domain_product(frame, arg_types)}
        overrides[(sym, world, key)] = value
    return NonStandardModel(sig, frame, defaults, overrides, relations)


def random_term(rng: random.Random, sig: Signature, ty: TypeTag, depth: int) -> Term:
    leaves = [Var(n) for n in _vars_of(sig, ty)] + [Const(n) for n in _consts_of(sig, ty)]
    candidates = sorted(n for n, (_args, res) in sig.functions.items() if res is ty)
    if depth <= 0 or not candidates or rng.random() < 0.6:
        return rng.choice(leaves)
    fn = rng.choice(candidates)
    arg_types, _res = sig.functions[fn]
    args = []
    for want in arg_types:
        actual = want if want is not AGTOBJ else rng.choice((AGT, OBJ))
        args.append(random_term(rng, sig, actual, depth - 1))
    return App(fn, tuple(args))


def _random_atom(rng: random.Random, sig: Signature, term_depth: int) -> Formula:
    rels = sorted(sig.relations) + ["="]
    rel = rng.choice(rels)
    if rel == "=":
        tys = (rng.choice((AGT, OBJ)), rng.choice((AGT, OBJ)))
        return eq(
            random_term(rng, sig, tys[0], term_depth), random_term(rng, sig, tys[1], term_depth)
        )
    args = []
    for want in sig.relations[rel]:
        actual = want if want is not AGTOBJ else rng.choice((AGT, OBJ))
        args.append(random_term(rng, sig, actual, term_depth))
    return Atom(rel, tuple(args))


def random_formula(rng: random.Random, sig: Signature, depth: int, term_depth: int = 2) -> Formula:
    if depth <= 0:
        return _random_atom(rng, sig, term_depth)
    roll = rng.random()
    if roll < 0.34:
        return _random_atom(rng, sig, term_depth)
    if roll < 0.48:
        return Neg(random_formula(rng, sig, depth - 1, term_depth))
    if roll < 0.64:
        return Conj(
            random_formula(rng, sig, depth - 1, term_depth),
            random_formula(rng, sig, depth - 1, term_depth),
        )
    if roll < 0.76:
        return implies(
            random_formula(rng, sig, depth - 1, term_depth),
            random_formula(rng, sig, depth - 1, term_depth),
        )
    if roll < 0.88:
        return Know(
            random_term(rng, sig, AGT, term_depth),
            random_formula(rng, sig, depth - 1, term_depth),
        )
    var = rng.choice(sorted(sig.variables))
    return Forall(var, random_formula(rng, sig, depth - 1, term_depth))


SCHEMA_NAMES = ("ue", "id", "ps", "eid", "dd", "k", "barcan", "kni")


def _random_justification(rng: random.Random, sig: Signature, name: str, depth: int, term_depth: int):
    if name == "ue":
        ty = rng.choice((AGT, OBJ))
        pool = _vars_of(sig, ty)
        return Ue(rng.choice(pool), rng.choice(pool), random_formula(rng, sig, depth, term_depth))
    if name == "id":
        return Id(random_term(rng, sig, rng.choice((AGT, OBJ)), term_depth))
    if name == "ps":
        ty = rng.choice((AGT, OBJ))
        pool = _vars_of(sig, ty)
        return Ps(
            rng.choice(pool),
            rng.choice(pool),
            rng.choice(pool),
            random_formula(rng, sig, depth, term_depth),
        )
    if name == "eid":
        const = rng.choice(sorted(sig.constants))
        return Eid(const, rng.choice(_vars_of(sig, sig.constants[const])))
    if name == "dd":
        x = rng.choice(_vars_of(sig, AGT))
        y = rng.choice(_vars_of(sig, OBJ))
        return Dd(x, y) if rng.random() < 0.5 else Dd(y, x)
    if name == "k":
        return AxK(
            random_term(rng, sig, AGT, term_depth),
            random_formula(rng, sig, depth, term_depth),
            random_formula(rng, sig, depth, term_depth),
        )
    if name == "barcan":
        var = rng.choice(sorted(sig.variables))
        term = random_term(rng, sig, AGT, term_depth)
        while var in _term_var_names(term):
            term = random_term(rng, sig, AGT, term_depth)
        return Barcan(var, term, random_formula(rng, sig, depth, term_depth))
    if name == "kni":
        pool = sorted(sig.variables)
        return Kni(
            rng.choice(pool), rng.choice(pool), random_term(rng, sig, AGT, term_depth)
        )
    raise ValueError(f"unknown schema '{name}'")


def _term_var_names(term: Term) -> frozenset[str]:
    return term_vars(term)


def random_schema_instance(
    rng: random.Random, sig: Signature, name: str, bounds: FuzzBounds
) -> Formula:
    """An admissible instance of the named schema; draws whose side
    conditions fail (a bound variable clash) are retried, falling back to
    quantifier-free bodies so the loop always terminates."""
    attempts = 0
    while True:
        depth = bounds.max_formula_depth if attempts < 25 else 0
        just = _random_justification(rng, sig, name, depth, bounds.max_term_depth)
        try:
            return instantiate_axiom(sig, just)
        except CaptureRisk:
            attempts += 1


_TAUTOLOGY_TEMPLATES = 6


def random_tautology_instance(rng: random.Random, sig: Signature, bounds: FuzzBounds) -> Formula:
    a = random_formula(rng, sig, bounds.max_formula_depth - 1, bounds.max_term_depth)
    b = random_formula(rng, sig, bounds.max_formula_depth - 1, bounds.max_term_depth)
    match rng.randrange(_TAUTOLOGY_TEMPLATES):
        case 0:
            return implies(a, a)
        case 1:
            return implies(a, implies(b, a))
        case 2:
            return implies(Conj(a, b), a)
        case 3:
            return implies(a, disj(a, b))
        case 4:
            return implies(Neg(Neg(a)), a)
        case _:
            return implies(implies(a, b), implies(Neg(b), Neg(a)))


def _transfer_shaped_body(rng: random.Random, sig: Signature, ty: TypeTag, var: str) -> Formula:
    """``y = var -> (R(..y..) -> R(..var..))`` for a random same-sort y and a
    random relation position admitting the sort: rigidly universal over
    ``var``, but sensitive to constant instantiation."""
    other = rng.choice([v for v in _vars_of(sig, ty) if v != var])
    slots = sorted(
        (rel, pos)
        for rel, types in sig.relations.items()
        for pos, want in enumerate(types)
        if want is ty or want is AGTOBJ
    )
    rel, pos = slots[rng.randrange(len(slots))]
    fixed = []
    for want in sig.relations[rel]:
        actual = want if want is not AGTOBJ else rng.choice((AGT, OBJ))
        fixed.append(random_term(rng, sig, actual, 0))
    args_other = list(fixed)
    args_other[pos] = Var(other)
    args_var = list(fixed)
    args_var[pos] = Var(var)
    return implies(
        eq(Var(other), Var(var)),
        implies(Atom(rel, tuple(args_other)), Atom(rel, tuple(args_var))),
    )


def random_unrestricted_instantiation(
    rng: random.Random, sig: Signature, bounds: FuzzBounds
) -> Formula:
    """The deliberately unsound shape: a universal instantiated with a
    *constant* rather than a variable.  Half the draws use a fully random
    body, half the minimal discriminating template."""
    ty = rng.choice((AGT, OBJ))
    var = rng.choice(_vars_of(sig, ty))
    const = Const(rng.choice(_consts_of(sig, ty)))
    if rng.random() < 0.5:
        body = _transfer_shaped_body(rng, sig, ty, var)
        return implies(Forall(var, body), substitute(sig, body, const, var))
    attempts = 0
    while True:
        depth = bounds.max_formula_depth if attempts < 25 else 0
        body = random_formula(rng, sig, depth, bounds.max_term_depth)
        try:
            return implies(Forall(var, body), substitute(sig, body, const, var))
        except CaptureRisk:
            attempts += 1


def random_total_valuation(
    rng: random.Random, sig: Signature, frame: Frame
) -> dict[str, DomainElement]:
    return {
        name: rng.choice(frame.elements(sig.variables[name]))
        for name in sorted(sig.variables)
    }


# ---------------------------------------------------------------------------
# Reports over the fixed material


def verify_bounded_validity(
    bounds: SearchBounds = SearchBounds(2, 1, 2),
    *,
    enum_ceiling: int = DEFAULT_ENUM_CEILING,
) -> Report:
    """Exhaustive sweep of all standard models within the bounds: the
    transfer formula survives while a refutable control formula does not."""
    sig = basic_signature()
    target = transfer_formula(sig)
    result = enumerate_countermodel(sig, target, bounds, enum_ceiling=enum_ceiling)
    items = []
    if result.found is None:
        detail = "no countermodel within bounds"
        witness = None
    else:  # would mean a falsified sweep; carry the witness
        cm = result.found
        detail = None
        witness = _std_witness(cm.model, cm.world, cm.valuation, target, False)
    items.append(
        ReportItem(
            label="bounded-validity/transfer-formula",
            claim=f"{TRANSFER_FORMULA_TEXT} has no countermodel among the enumerated standard models",
            ok=result.found is None,
            cases=result.models_checked,
            detail=detail,
            witness=witness,
        )
    )
    control = parse_formula(sig, "P(c)")
    control_result = enumerate_countermodel(sig, control, bounds, enum_ceiling=enum_ceiling)
    control_witness = None
    if control_result.found is not None:
        cm = control_result.found
        control_witness = _std_witness(cm.model, cm.world, cm.valuation, control, False)
    items.append(
        ReportItem(
            label="bounded-validity/refutation-control",
            claim="the sweep refutes the control formula P(c), so it can find countermodels",
            ok=control_result.found is not None,
            cases=control_result.models_checked,
            witness=control_witness,
        )
    )
    return Report(
        title="bounded validity sweep",
        items=items,
        notes=[
            f"exhaustive over all standard models with sizes within {bounds.max_agents} agent(s), "
            f"{bounds.max_objects} object(s), {bounds.max_worlds} world(s), interpreting the symbols "
            "occurring in each formula",
            "absence of a countermodel within bounds is evidence, not a validity proof over all models",
        ],
    )


def verify_nonstandard_countermodel() -> Report:
    """Exact reproduction of the built-in countermodel's five facts."""
    sig = basic_signature()
    model, world, valuation = build_transfer_countermodel(sig)
    alpha = DomainElement(AGT, "alpha")
    singleton = RelExtension.from_tuples([(alpha,)])
    checks = [
        (
            "countermodel/equality-holds",
            "x = c is true under v(x) = alpha",
            satisfies_ns(model, world, valuation, parse_formula(sig, "x = c")) is True,
            None,
        ),
        (
            "countermodel/predicate-on-variable-holds",
            "P(x) is true under v(x) = alpha",
            satisfies_ns(model, world, valuation, parse_formula(sig, "P(x)")) is True,
            None,
        ),
        (
            "countermodel/predicate-on-constant-fails",
            "P(c) is false: under the key {(alpha)} the constant denotes beta",
            satisfies_ns(model, world, valuation, parse_formula(sig, "P(c)")) is False,
            None,
        ),
        (
            "countermodel/constant-at-diagonal-key",
            "the constant denotes alpha under the diagonal key",
            extension_ns(model, world, valuation, model.diagonal, Const("c"))
            == DomainElement(AGT, "alpha"),
            f"denotation: {extension_ns(model, world, valuation, model.diagonal, Const('c')).name}",
        ),
        (
            "countermodel/constant-at-singleton-key",
            "the constant denotes beta under the key {(alpha)}",
            extension_ns(model, world, valuation, singleton, Const("c"))
            == DomainElement(AGT, "beta"),
            f"denotation: {extension_ns(model, world, valuation, singleton, Const('c')).name}",
        ),
    ]
    formula = transfer_formula(sig)
    falsified = satisfies_ns(model, world, valuation, formula) is False
    items = [
        ReportItem(label, claim, ok, detail=detail) for label, claim, ok, detail in checks
    ]
    items.append(
        ReportItem(
            label="countermodel/transfer-formula-fails",
            claim=f"{TRANSFER_FORMULA_TEXT} is false in the built-in model",
            ok=falsified,
            witness=None
            if falsified
            else _ns_witness(model, world, valuation, formula, True),
        )
    )
    return Report(
        title="extension-keyed countermodel",
        items=items,
        notes=["model: " + "; ".join(serialize_nonstandard(model).splitlines())],
    )


def verify_lewis() -> Report:
    """The two-authors example: one constant, two extensions, two denotations."""
    model, world = build_lewis_model()
    sig = model.signature
    sl = parse_formula(sig, "SL(lewis)")
    cf = parse_formula(sig, "CF(lewis)")
    sl_denotation = extension_ns(model, world, {}, model.relations[("SL", world)], Const("lewis"))
    cf_denotation = extension_ns(model, world, {}, model.relations[("CF", world)], Const("lewis"))
    swapped, _ = build_lewis_model(swapped=True)
    items = [
        ReportItem(
            label="lewis/symbolic-logic-author",
            claim="SL(lewis) is true",
            ok=satisfies_ns(model, world, {}, sl) is True,
        ),
        ReportItem(
            label="lewis/counterfactuals-author",
            claim="CF(lewis) is true",
            ok=satisfies_ns(model, world, {}, cf) is True,
        ),
        ReportItem(
            label="lewis/denotations-differ",
            claim="the constant denotes different agents in the two atoms",
            ok=sl_denotation != cf_denotation,
            detail=f"under SL: {sl_denotation.name}; under CF: {cf_denotation.name}",
        ),
        ReportItem(
            label="lewis/swapped-override-falsifies",
            claim="redirecting the SL-key override makes SL(lewis) false",
            ok=satisfies_ns(swapped, world, {}, sl) is False,
        ),
    ]
    return Report(title="context-dependent denotation example", items=items)


# ---------------------------------------------------------------------------
# Fuzzing


def _shipped_accepted_proof_lines() -> list[Formula]:
    formulas: list[Formula] = []
    for name in ("exists_c.tmp", "knows_taut.tmp"):
        proof = load_proof(data_path(name))
        formulas.extend(line.formula for line in proof.lines)
    return formulas


def fuzz_soundness(cfg: FuzzConfig) -> Report:
    """Sampled models never falsify admissible schema instances, tautology
    instances, or the lines of the shipped accepted proofs, while the two
    deliberately unsound controls are falsified somewhere in the run."""
    rng = random.Random(cfg.seed)
    bounds = cfg.bounds
    proof_lines = _shipped_accepted_proof_lines()
    pseudo = transfer_formula(FUZZ_SIGNATURE)

    schema_violations = 0
    taut_violations = 0
    line_violations = 0
    control_ue_hits = 0
    control_pseudo_hits = 0
    override_models = 0
    schema_counts = {name: 0 for name in SCHEMA_NAMES}
    schema_witness: Witness | None = None
    taut_witness: Witness | None = None
    line_witness: Witness | None = None
    ue_witness: Witness | None = None
    pseudo_witness: Witness | None = None

    for _ in range(cfg.samples):
        model = random_nonstandard_model(rng, FUZZ_SIGNATURE, bounds)
        if model.overrides:
            override_models += 1
        for name in SCHEMA_NAMES:
            instance = random_schema_instance(rng, FUZZ_SIGNATURE, name, bounds)
            schema_counts[name] += 1
            hit = find_falsifying_ns(model, instance)
            if hit is not None:
                schema_violations += 1
                if schema_witness is None:
                    schema_witness = _ns_witness(model, hit[0], hit[1], instance, False)
        for _ in range(2):
            instance = random_tautology_instance(rng, FUZZ_SIGNATURE, bounds)
            hit = find_falsifying_ns(model, instance)
            if hit is not None:
                taut_violations += 1
                if taut_witness is None:
                    taut_witness = _ns_witness(model, hit[0], hit[1], instance, False)
        for formula in proof_lines:
            hit = find_falsifying_ns(model, formula)
            if hit is not None:
                line_violations += 1
                if line_witness is None:
                    line_witness = _ns_witness(model, hit[0], hit[1], formula, False)
        control = random_unrestricted_instantiation(rng, FUZZ_SIGNATURE, bounds)
        hit = find_falsifying_ns(model, control)
        if hit is not None:
            control_ue_hits += 1
            if ue_witness is None:
                ue_witness = _ns_witness(model, hit[0], hit[1], control, False)
        hit = find_falsifying_ns(model, pseudo)
        if hit is not None:
            control_pseudo_hits += 1
            if pseudo_witness is None:
                pseudo_witness = _ns_witness(model, hit[0], hit[1], pseudo, False)

    coverage_floor = min(50, cfg.samples)
    counts_text = ", ".join(f"{name}={schema_counts[name]}" for name in SCHEMA_NAMES)
    items = [
        ReportItem(
            label="soundness/axiom-schemas",
            claim="admissible instances of the eight schemas hold at every world and valuation",
            ok=schema_violations == 0,
            cases=cfg.samples * len(SCHEMA_NAMES),
            detail=f"violations: {schema_violations}",
            witness=schema_witness,
        ),
        ReportItem(
            label="soundness/tautology-instances",
            claim="substitution instances of propositional tautologies hold everywhere",
            ok=taut_violations == 0,
            cases=cfg.samples * 2,
            detail=f"violations: {taut_violations}",
            witness=taut_witness,
        ),
        ReportItem(
            label="soundness/accepted-proof-lines",
            claim="every line of the shipped accepted proofs holds everywhere",
            ok=line_violations == 0,
            cases=cfg.samples * len(proof_lines),
            detail=f"violations: {line_violations}",
            witness=line_witness,
        ),
        ReportItem(
            label="soundness/generator-coverage",
            claim=f"every schema was instantiated at least {coverage_floor} times",
            ok=all(count >= coverage_floor for count in schema_counts.values()),
            cases=cfg.samples,
            detail=counts_text,
        ),
        ReportItem(
            label="soundness/override-coverage",
            claim="at least one sampled model carries a non-default override",
            ok=override_models >= 1,
            cases=cfg.samples,
            detail=f"models with overrides: {override_models}",
        ),
        ReportItem(
            label="soundness/control-unrestricted-instantiation",
            claim="instantiating a universal with a constant is falsified somewhere in the run",
            ok=control_ue_hits >= 1,
            cases=cfg.samples,
            detail=f"violations: {control_ue_hits}",
            witness=ue_witness,
        ),
        ReportItem(
            label="soundness/control-transfer-pseudo-axiom",
            claim=f"treating {TRANSFER_FORMULA_TEXT} as an axiom is falsified somewhere in the run",
            ok=control_pseudo_hits >= 1,
            cases=cfg.samples,
            detail=f"violations: {control_pseudo_hits}",
            witness=pseudo_witness,
        ),
    ]
    return Report(
        title="soundness fuzz over extension-keyed models",
        items=items,
        notes=[f"seed {cfg.seed}, {cfg.samples} samples, {bounds.describe()}"],
        seed=cfg.seed,
    )


def fuzz_substitution_lemmas(cfg: FuzzConfig) -> Report:
    """Renaming a free variable equals re-pointing the valuation, for term
    extensions and satisfaction, in both semantics."""
    rng = random.Random(cfg.seed)
    bounds = cfg.bounds
    sig = FUZZ_SIGNATURE
    violations = {key: 0 for key in ("term-ns", "formula-ns", "term-std", "formula-std")}
    witnesses: dict[str, Witness | None] = {key: None for key in violations}

    def draw_pair(ty: TypeTag) -> tuple[str, str]:
        pool = _vars_of(sig, ty)
        return rng.choice(pool), rng.choice(pool)

    def draw_substitutable_formula(x: str, y: str) -> tuple[Formula, Formula]:
        attempts = 0
        while True:
            depth = bounds.max_formula_depth if attempts < 25 else 0
            formula = random_formula(rng, sig, depth, bounds.max_term_depth)
            try:
                return formula, substitute(sig, formula, Var(y), x)
            except CaptureRisk:
                attempts += 1

    for _ in range(cfg.samples):
        ns_model = random_nonstandard_model(rng, sig, bounds)
        frame = ns_model.frame
        world = rng.choice(frame.worlds)
        valuation = random_total_valuation(rng, sig, frame)
        ty = rng.choice((AGT, OBJ))
        x, y = draw_pair(ty)
        repointed = dict(valuation)
        repointed[x] = valuation[y]

        term = random_term(rng, sig, rng.choice((AGT, OBJ)), bounds.max_term_depth)
        key = random_extension_key(rng, frame, dict(ns_model.relations))
        left = extension_ns(ns_model, world, valuation, key, substitute_term(sig, term, Var(y), x))
        right = extension_ns(ns_model, world, repointed, key, term)
        if left != right:
            violations["term-ns"] += 1

        formula, renamed = draw_substitutable_formula(x, y)
        if satisfies_ns(ns_model, world, valuation, renamed) != satisfies_ns(
            ns_model, world, repointed, formula
        ):
            violations["formula-ns"] += 1
            if witnesses["formula-ns"] is None:
                witnesses["formula-ns"] = _ns_witness(
                    ns_model, world, valuation, renamed, False
                )

        std_model = random_standard_model(rng, sig, bounds)
        frame = std_model.frame
        world = rng.choice(frame.worlds)
        valuation = random_total_valuation(rng, sig, frame)
        ty = rng.choice((AGT, OBJ))
        x, y = draw_pair(ty)
        repointed = dict(valuation)
        repointed[x] = valuation[y]

        term = random_term(rng, sig, rng.choice((AGT, OBJ)), bounds.max_term_depth)
        left_std = extension_std(std_model, world, valuation, substitute_term(sig, term, Var(y), x))
        right_std = extension_std(std_model, world, repointed, term)
        if left_std != right_std:
            violations["term-std"] += 1

        formula, renamed = draw_substitutable_formula(x, y)
        if satisfies_std(std_model, world, valuation, renamed) != satisfies_std(
            std_model, world, repointed, formula
        ):
            violations["formula-std"] += 1
            if witnesses["formula-std"] is None:
                witnesses["formula-std"] = _std_witness(
                    std_model, world, valuation, renamed, False
                )

    claims = {
        "term-ns": "term extension commutes with variable renaming (extension-keyed models)",
        "formula-ns": "satisfaction commutes with variable renaming (extension-keyed models)",
        "term-std": "term extension commutes with variable renaming (standard models)",
        "formula-std": "satisfaction commutes with variable renaming (standard models)",
    }
    items = [
        ReportItem(
            label=f"substitution/{key}",
            claim=claims[key],
            ok=violations[key] == 0,
            cases=cfg.samples,
            detail=f"violations: {violations[key]}",
            witness=witnesses[key],
        )
        for key in ("term-ns", "formula-ns", "term-std", "formula-std")
    ]
    return Report(
        title="substitution lemma fuzz",
        items=items,
        notes=[f"seed {cfg.seed}, {cfg.samples} samples per form, {bounds.describe()}"],
        seed=cfg.seed,
    )


def fuzz_agreement(cfg: FuzzConfig) -> Report:
    """Lifting a standard model never changes any satisfaction verdict."""
    rng = random.Random(cfg.seed)
    bounds = cfg.bounds
    sig = FUZZ_SIGNATURE
    matches = 0
    witness: Witness | None = None
    for _ in range(cfg.samples):
        model = random_standard_model(rng, sig, bounds)
        lifted = lift_standard(model)
        formula = random_formula(rng, sig, bounds.max_formula_depth, bounds.max_term_depth)
        world = rng.choice(model.frame.worlds)
        valuation = random_total_valuation(rng, sig, model.frame)
        std = satisfies_std(model, world, valuation, formula)
        ns = satisfies_ns(lifted, world, valuation, formula)
        if std == ns:
            matches += 1
        elif witness is None:
            witness = _std_witness(model, world, valuation, formula, std)
    return Report(
        title="standard/extension-keyed agreement fuzz",
        items=[
            ReportItem(
                label="agreement/lifted-models",
                claim="satisfaction in a standard model equals satisfaction in its lift",
                ok=matches == cfg.samples,
                cases=cfg.samples,
                detail=f"{matches}/{cfg.samples} agree",
                witness=witness,
            )
        ],
        notes=[f"seed {cfg.seed}, {cfg.samples} samples, {bounds.describe()}"],
        seed=cfg.seed,
    )


# ---------------------------------------------------------------------------
# The composite demonstration


def _proof_items() -> list[ReportItem]:
    items = []

    def run(label: str, name: str, expect_ok: bool, expect_reason: str | None = None) -> None:
        proof = load_proof(data_path(name))
        result = check_proof(proof.signature, proof)
        if expect_ok:
            ok = result.ok
            detail = None if ok else f"unexpected rejection: line {result.line}: {result.reason}"
        else:
            ok = (not result.ok) and result.reason is not None
            if ok and expect_reason is not None:
                ok = expect_reason in result.reason  # type: ignore[operator]
            detail = f"line {result.line}: {result.reason}" if result.reason else None
        claim = f"{name} is {'accepted' if expect_ok else 'rejected'}"
        if expect_reason:
            claim += f" ({expect_reason})"
        items.append(ReportItem(label=f"proofs/{label}", claim=claim, ok=ok, detail=detail))

    run("identity-witness-accepted", "exists_c.tmp", True)
    run("necessitated-tautology-accepted", "knows_taut.tmp", True)
    run(
        "substitution-with-constant-rejected",
        "bogus_ps.tmp",
        False,
        "instantiation must use variables",
    )
    run(
        "instantiation-with-constant-rejected",
        "bogus_ue.tmp",
        False,
        "instantiation must use variables",
    )
    run("tautology-claim-rejected", "bogus_taut.tmp", False, "not a tautology")
    return items


def demonstrate_incompleteness(
    seed: int = 1,
    samples: int = 200,
    bounds: SearchBounds = SearchBounds(2, 1, 2),
) -> Report:
    """Composite report: bounded validity of the transfer formula, its exact
    falsification in the extension-keyed model, rejection of the attempted
    proofs, and the soundness fuzz."""
    sub_reports = [
        verify_bounded_validity(bounds),
        verify_nonstandard_countermodel(),
        Report(title="proof checking", items=_proof_items()),
        fuzz_soundness(FuzzConfig(seed=seed, samples=samples)),
    ]
    items = [item for sub in sub_reports for item in sub.items]
    notes = [
        "every rule and schema accepted by the checker stays valid when constants are "
        "interpreted relative to the extension of the relation symbol applying to them",
        f"the built-in model falsifies {TRANSFER_FORMULA_TEXT} under that reading, so no "
        "sequence of checkable lines can derive it",
        "the bounded sweep supports the formula's validity under the world-relative reading; "
        "a formula valid there but underivable shows the schema set cannot be complete for it",
    ]
    for sub in sub_reports:
        notes.extend(sub.notes)
    return Report(
        title="semantic incompleteness demonstration",
        items=items,
        notes=notes,
        seed=seed,
    )
