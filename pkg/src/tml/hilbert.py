"""The Hilbert-style proof system: schema instantiation and line checking.

Axiom schemas: all propositional tautologies, universal instantiation UE,
identity ID, substitution of equals PS, existence of a named individual
EID, sort disjointness DD, distribution K, the converse interaction schema
BARCAN, and knowledge of distinctness KNI.  Inference rules: modus ponens
MP, necessitation KG, and universal generalization UG.

UE and PS instantiate with *variables only*; passing a constant is a side
condition violation, never silently accepted.  Proof lines carry explicit
schema instantiations, so checking is substitution followed by literal
structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, SideConditionViolated, TmlError, TooManyAtoms
from .parser import TokenStream, formula_from_stream, parse_signature, term_from_stream, tokenize
from .syntax import (
    AGT,
    Conj,
    Const,
    Forall,
    Formula,
    Know,
    Neg,
    Signature,
    Term,
    Var,
    check_formula,
    eq,
    exists,
    format_formula,
    free_vars,
    implies,
    match_implication,
    substitute,
    term_vars,
    type_of_term,
)

DEFAULT_MAX_TAUT_ATOMS = 20


# ---------------------------------------------------------------------------
# Justifications


@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class Ue:
    x: str
    y: str
    body: Formula


@dataclass(frozen=True)
class Id:
    term: Term


@dataclass(frozen=True)
class Ps:
    x: str
    y: str
    z: str
    body: Formula


@dataclass(frozen=True)
class Eid:
    const: str
    var: str


@dataclass(frozen=True)
class Dd:
    x: str
    y: str


@dataclass(frozen=True)
class AxK:
    term: Term
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Barcan:
    var: str
    term: Term
    body: Formula


@dataclass(frozen=True)
class Kni:
    x: str
    y: str
    term: Term


@dataclass(frozen=True)
class Mp:
    implication: int
    antecedent: int


@dataclass(frozen=True)
class Kg:
    premise: int
    term: Term


@dataclass(frozen=True)
class Ug:
    premise: int
    var: str


Justification = (
    Taut | Ue | Id | Ps | Eid | Dd | AxK | Barcan | Kni | Mp | Kg | Ug
)

_SCHEMA_KINDS = (Ue, Id, Ps, Eid, Dd, AxK, Barcan, Kni)


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    signature: Signature
    lines: tuple[ProofLine, ...]


# ---------------------------------------------------------------------------
# Propositional skeletons and tautology checking


def propositional_skeleton(formula: Formula) -> tuple[tuple, list[Formula]]:
    """Abstract the maximal non-boolean subformulas into letters.

    Subformulas headed by an atom, a knowledge operator or a quantifier
    become letters (syntactically identical ones share a letter); negation
    and conjunction structure is preserved.  Returns the skeleton as nested
    tuples ``("letter", i) | ("neg", s) | ("conj", s, t)`` together with the
    letter subformulas in first-occurrence order.
    """
    letters: dict[Formula, int] = {}

    def go(f: Formula) -> tuple:
        match f:
            case Neg(body):
                return ("neg", go(body))
            case Conj(left, right):
                return ("conj", go(left), go(right))
            case _:
                idx = letters.setdefault(f, len(letters))
                return ("letter", idx)

    skeleton = go(formula)
    ordered = sorted(letters, key=letters.__getitem__)
    return skeleton, ordered


def _eval_skeleton(skeleton: tuple, assignment: int) -> bool:
    match skeleton:
        case ("letter", idx):
            return bool(assignment >> idx & 1)
        case ("neg", body):
            return not _eval_skeleton(body, assignment)
        case ("conj", left, right):
            return _eval_skeleton(left, assignment) and _eval_skeleton(right, assignment)
    raise TypeError(f"bad skeleton node: {skeleton!r}")


def is_tautology(formula: Formula, max_atoms: int = DEFAULT_MAX_TAUT_ATOMS) -> bool:
    """Truth-table evaluation of the propositional skeleton (letter i is
    true in assignment m iff bit i of m is set)."""
    skeleton, letters = propositional_skeleton(formula)
    if len(letters) > max_atoms:
        raise TooManyAtoms(
            f"skeleton has {len(letters)} distinct letters, above the limit {max_atoms}"
        )
    return all(_eval_skeleton(skeleton, m) for m in range(1 << len(letters)))


# ---------------------------------------------------------------------------
# Schema instantiation


def _schema_term(sig: Signature, name: str, schema: str) -> Term:
    kind = sig.kind_of(name)
    if kind == "variable":
        return Var(name)
    if kind == "constant":
        return Const(name)
    raise SideConditionViolated(f"{schema}: '{name}' is not a variable or constant")


def _require_variable(sig: Signature, name: str, schema: str) -> None:
    kind = sig.kind_of(name)
    if kind != "variable":
        what = kind if kind is not None else "an unknown identifier"
        raise SideConditionViolated(
            f"{schema} instantiation must use variables; '{name}' is {_article(what)}"
        )


def _article(kind: str) -> str:
    return f"a {kind}" if not kind.startswith("an ") else kind


def instantiate_axiom(sig: Signature, just: Justification) -> Formula:
    """The unique formula an explicit schema instantiation denotes.

    Side conditions are checked and reported by name; substitution errors
    (type mismatch, a bound variable of the replacement) propagate.
    """
    match just:
        case Ue(x, y, body):
            _require_variable(sig, x, "UE")
            check_formula(sig, body)
            y_term = _schema_term(sig, y, "UE")
            _require_variable(sig, y, "UE")
            result: Formula = implies(Forall(x, body), substitute(sig, body, y_term, x))
        case Id(term):
            type_of_term(sig, term)
            result = eq(term, term)
        case Ps(x, y, z, body):
            _require_variable(sig, z, "PS")
            check_formula(sig, body)
            x_term = _schema_term(sig, x, "PS")
            y_term = _schema_term(sig, y, "PS")
            _require_variable(sig, x, "PS")
            _require_variable(sig, y, "PS")
            result = implies(
                eq(x_term, y_term),
                implies(substitute(sig, body, x_term, z), substitute(sig, body, y_term, z)),
            )
        case Eid(const, var):
            if sig.kind_of(const) != "constant":
                raise SideConditionViolated(f"EID requires a constant; '{const}' is not one")
            _require_variable(sig, var, "EID")
            if sig.const_type(const) is not sig.var_type(var):
                raise SideConditionViolated(
                    f"EID requires type({var}) = type({const}); "
                    f"got {sig.var_type(var)} and {sig.const_type(const)}"
                )
            c = Const(const)
            result = implies(eq(c, c), exists(var, eq(Var(var), c)))
        case Dd(x, y):
            _require_variable(sig, x, "DD")
            _require_variable(sig, y, "DD")
            if sig.var_type(x) is sig.var_type(y):
                raise SideConditionViolated(
                    f"DD requires variables of different types; both have type {sig.var_type(x)}"
                )
            result = Neg(eq(Var(x), Var(y)))
        case AxK(term, left, right):
            if type_of_term(sig, term) is not AGT:
                raise SideConditionViolated("K requires a modal index of type agt")
            check_formula(sig, left)
            check_formula(sig, right)
            result = implies(
                Know(term, implies(left, right)),
                implies(Know(term, left), Know(term, right)),
            )
        case Barcan(var, term, body):
            _require_variable(sig, var, "BARCAN")
            if type_of_term(sig, term) is not AGT:
                raise SideConditionViolated("BARCAN requires a modal index of type agt")
            if var in term_vars(term):
                raise SideConditionViolated(
                    f"BARCAN requires '{var}' not to occur in the modal index"
                )
            check_formula(sig, body)
            result = implies(Forall(var, Know(term, body)), Know(term, Forall(var, body)))
        case Kni(x, y, term):
            _require_variable(sig, x, "KNI")
            _require_variable(sig, y, "KNI")
            if type_of_term(sig, term) is not AGT:
                raise SideConditionViolated("KNI requires a modal index of type agt")
            distinct = Neg(eq(Var(x), Var(y)))
            result = implies(distinct, Know(term, distinct))
        case _:
            raise TypeError(f"not an axiom-schema justification: {just!r}")
    check_formula(sig, result)
    return result


# ---------------------------------------------------------------------------
# Proof checking


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: int | None = None
    reason: str | None = None
    error: TmlError | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_proof(sig: Signature, proof: Proof, max_taut_atoms: int = DEFAULT_MAX_TAUT_ATOMS) -> CheckResult:
    """Check every line; stop at the first failure.

    Taut lines must have tautological skeletons; schema lines must equal
    the instantiated schema literally; MP/KG/UG check rule shape against
    the referenced earlier lines.
    """
    formulas: list[Formula] = []

    def fail(i: int, reason: str, error: TmlError | None = None) -> CheckResult:
        return CheckResult(False, i, reason, error)

    def ref(i: int, n: int) -> Formula | CheckResult:
        if not 1 <= n < i:
            return fail(i, f"reference to line {n} does not precede line {i}")
        return formulas[n - 1]

    for i, line in enumerate(proof.lines, start=1):
        formula, just = line.formula, line.justification
        try:
            check_formula(sig, formula)
        except TmlError as exc:
            return fail(i, f"ill-formed formula: {exc}", exc)

        if isinstance(just, Taut):
            try:
                if not is_tautology(formula, max_taut_atoms):
                    return fail(i, "not a tautology")
            except TooManyAtoms as exc:
                return fail(i, str(exc), exc)
        elif isinstance(just, _SCHEMA_KINDS):
            try:
                expected = instantiate_axiom(sig, just)
            except TmlError as exc:
                return fail(i, f"schema instantiation failed: {exc}", exc)
            if formula != expected:
                return fail(i, f"schema mismatch: expected {format_formula(expected)}")
        elif isinstance(just, Mp):
            premise = ref(i, just.implication)
            if isinstance(premise, CheckResult):
                return premise
            antecedent = ref(i, just.antecedent)
            if isinstance(antecedent, CheckResult):
                return antecedent
            parts = match_implication(premise)
            if parts is None:
                return fail(i, f"MP: line {just.implication} is not an implication")
            if antecedent != parts[0]:
                return fail(
                    i, f"MP: line {just.antecedent} does not match the antecedent of line {just.implication}"
                )
            if formula != parts[1]:
                return fail(i, f"MP: conclusion does not match the consequent of line {just.implication}")
        elif isinstance(just, Kg):
            premise = ref(i, just.premise)
            if isinstance(premise, CheckResult):
                return premise
            try:
                if type_of_term(sig, just.term) is not AGT:
                    return fail(i, "KG requires a modal index of type agt")
            except TmlError as exc:
                return fail(i, f"KG: {exc}", exc)
            if formula != Know(just.term, premise):
                return fail(i, f"KG: conclusion is not line {just.premise} under that knowledge operator")
        elif isinstance(just, Ug):
            premise = ref(i, just.premise)
            if isinstance(premise, CheckResult):
                return premise
            try:
                _require_variable(sig, just.var, "UG")
            except SideConditionViolated as exc:
                return fail(i, str(exc), exc)
            parts = match_implication(premise)
            if parts is None:
                return fail(i, f"UG: line {just.premise} is not an implication")
            antecedent, consequent = parts
            if just.var in free_vars(antecedent):
                error = SideConditionViolated(
                    f"UG requires '{just.var}' not free in the antecedent"
                )
                return fail(i, str(error), error)
            if formula != implies(antecedent, Forall(just.var, consequent)):
                return fail(i, "UG: conclusion does not generalize the consequent of the premise")
        else:
            return fail(i, f"unknown justification {just!r}")
        formulas.append(formula)
    return CheckResult(True)


# ---------------------------------------------------------------------------
# Proof files (.tmp)


def parse_justification(sig: Signature, st: TokenStream) -> Justification:
    tok = st.expect_ident("a justification")
    name = tok.text
    if name == "taut":
        return Taut()
    st.expect_punct("(")
    just: Justification
    if name == "id":
        just = Id(term_from_stream(sig, st))
    elif name == "ue":
        x = st.expect_ident("a variable").text
        st.expect_punct(",")
        y = st.expect_ident("an identifier").text
        st.expect_punct(",")
        just = Ue(x, y, formula_from_stream(sig, st))
    elif name == "ps":
        x = st.expect_ident("an identifier").text
        st.expect_punct(",")
        y = st.expect_ident("an identifier").text
        st.expect_punct(",")
        z = st.expect_ident("a variable").text
        st.expect_punct(",")
        just = Ps(x, y, z, formula_from_stream(sig, st))
    elif name == "eid":
        c = st.expect_ident("a constant").text
        st.expect_punct(",")
        x = st.expect_ident("a variable").text
        just = Eid(c, x)
    elif name == "dd":
        x = st.expect_ident("a variable").text
        st.expect_punct(",")
        y = st.expect_ident("a variable").text
        just = Dd(x, y)
    elif name == "k":
        term = term_from_stream(sig, st)
        st.expect_punct(",")
        left = formula_from_stream(sig, st)
        st.expect_punct(",")
        just = AxK(term, left, formula_from_stream(sig, st))
    elif name == "barcan":
        x = st.expect_ident("a variable").text
        st.expect_punct(",")
        term = term_from_stream(sig, st)
        st.expect_punct(",")
        just = Barcan(x, term, formula_from_stream(sig, st))
    elif name == "kni":
        x = st.expect_ident("a variable").text
        st.expect_punct(",")
        y = st.expect_ident("a variable").text
        st.expect_punct(",")
        just = Kni(x, y, term_from_stream(sig, st))
    elif name == "mp":
        i = st.expect_int()
        st.expect_punct(",")
        just = Mp(i, st.expect_int())
    elif name == "kg":
        i = st.expect_int()
        st.expect_punct(",")
        just = Kg(i, term_from_stream(sig, st))
    elif name == "ug":
        i = st.expect_int()
        st.expect_punct(",")
        just = Ug(i, st.expect_ident("a variable").text)
    else:
        raise ParseError(f"unknown justification '{name}'", tok.line, tok.col)
    st.expect_punct(")")
    return just


def parse_proof(sig: Signature, text: str, first_line: int = 1) -> Proof:
    """Parse numbered ``N: <formula> ; <justification>`` lines."""
    lines: list[ProofLine] = []
    for line_no, raw in enumerate(text.splitlines(), start=first_line):
        tokens = tokenize(raw, first_line=line_no)
        if not tokens:
            continue
        st = TokenStream(tokens)
        number = st.expect_int()
        if number != len(lines) + 1:
            raise ParseError(f"expected line number {len(lines) + 1}, got {number}", line_no)
        st.expect_punct(":")
        formula = formula_from_stream(sig, st)
        st.expect_punct(";")
        just = parse_justification(sig, st)
        st.expect_eof()
        lines.append(ProofLine(formula, just))
    return Proof(sig, tuple(lines))


def load_proof(path: str | Path) -> Proof:
    """Load a ``.tmp`` file: a ``proof`` header, a ``sig <path>`` line
    (relative to the proof file), then the numbered lines."""
    path = Path(path)
    raw_lines = path.read_text(encoding="utf-8").splitlines()
    sig: Signature | None = None
    seen_header = False
    body_start = 0
    for idx, raw in enumerate(raw_lines):
        stripped = raw.split("#", 1)[0].strip() if not raw.strip().startswith("sig ") else raw.strip()
        if not stripped:
            continue
        if not seen_header:
            if stripped != "proof":
                raise ParseError("proof files must start with a 'proof' header", idx + 1)
            seen_header = True
            continue
        if stripped.startswith("sig "):
            if sig is not None:
                raise ParseError("duplicate 'sig' line", idx + 1)
            sig_path = (path.parent / stripped[4:].strip()).resolve()
            sig = parse_signature(sig_path.read_text(encoding="utf-8"))
            continue
        body_start = idx
        break
    else:
        body_start = len(raw_lines)
    if not seen_header:
        raise ParseError("proof files must start with a 'proof' header")
    if sig is None:
        raise ParseError("proof files must name a signature with a 'sig' line")
    body = "\n".join(raw_lines[body_start:])
    return parse_proof(sig, body, first_line=body_start + 1)
