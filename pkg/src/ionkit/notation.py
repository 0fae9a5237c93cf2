"""Compile ordinals to notation programs; recognize, verify, and bound them.

A notation program is one whose outputs are all themselves notation programs;
its value is the least ordinal strictly above the values of its outputs. This
module compiles every CNF ordinal below epsilon_0 to a canonical program with
that value, inverts the compiler on its image (``decompile``), checks
membership under an explicit fuel budget (``verify``, three-valued because the
full property is undecidable), and computes certified lower bounds on the
value of arbitrary programs (``value_lower_bound``).

Compilation shapes:

* 0 is the empty program ``End``.
* A successor prints the predecessor's source once:
  ``Print('<source>');End``.
* A limit ``base + w*c`` prints the base source, then re-wraps it in a fresh
  ``Print('...');End`` each iteration (an escape loop keeps the quoting
  right), so output n is exactly the program for ``base + w*(c-1) + n``.
* Every other limit compiles to a fixed self-replicating driver plus two data
  literals: ``C``, an encoding of the ordinal, and ``L``, the driver's own
  source text. Each iteration the driver computes the encoding of the n-th
  member of the ordinal's fundamental sequence and rebuilds the matching
  source text, quoting ``L`` into child drivers where the member is again a
  deep limit.

The normative contract is compositional: output n of a compiled limit is
byte-equal to the serialization of the compiled n-th fundamental-sequence
member, for every n.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .objlang import (
    Assign,
    Concat,
    Equals,
    EvalError,
    Expr,
    Fuel,
    Head,
    IfElse,
    Literal,
    Not,
    OpenProgramError,
    ParseError,
    Print,
    Program,
    Statement,
    Tail,
    Trace,
    TraceStatus,
    TrueCond,
    Var,
    While,
    concat,
    evaluate,
    parse,
    serialize,
)
from .ordinals import (
    ONE,
    ZERO,
    Kind,
    Ordinal,
    add,
    classify,
    compare,
    Comparison,
    format_ordinal,
    parse_ordinal,
    predecessor,
)

__all__ = [
    "compile_ordinal",
    "source_of",
    "decompile",
    "succ_notation",
    "ProvenMember",
    "Refuted",
    "Inconclusive",
    "Verdict",
    "FuelSpent",
    "VerificationResult",
    "verify",
    "value_lower_bound",
    "certificate_text",
    "parse_certificate",
]


# ---------------------------------------------------------------------------
# ordinal encoding used by the driver
#
# An ordinal is encoded smallest-term-first as a string over ( ) I:
# each CNF term (exponent e, coefficient c) becomes "(" enc(e) ")" followed by
# c copies of "I". Smallest-first means every fundamental-sequence step only
# touches a prefix of the string, and the alphabet needs no escaping inside
# object-language literals.
# ---------------------------------------------------------------------------

def _encode(a: Ordinal) -> str:
    parts: list[str] = []
    for exp, coeff in reversed(a.terms):
        parts.append("(" + _encode(exp) + ")" + "I" * coeff)
    return "".join(parts)


def _decode(s: str) -> Ordinal:
    """Inverse of :func:`_encode`; raises ValueError on malformed input."""
    terms_small_first: list[tuple[Ordinal, int]] = []
    pos = 0
    n = len(s)
    while pos < n:
        if s[pos] != "(":
            raise ValueError(f"expected '(' at {pos}")
        depth = 1
        j = pos + 1
        while depth > 0:
            if j >= n:
                raise ValueError("unbalanced parentheses")
            if s[j] == "(":
                depth += 1
            elif s[j] == ")":
                depth -= 1
            j += 1
        exp = _decode(s[pos + 1 : j - 1])
        k = j
        while k < n and s[k] == "I":
            k += 1
        if k == j:
            raise ValueError(f"missing coefficient at {j}")
        terms_small_first.append((exp, k - j))
        pos = k
    try:
        return Ordinal(tuple(reversed(terms_small_first)))
    except ValueError as exc:
        raise ValueError(f"not a canonical encoding: {exc}") from exc


# ---------------------------------------------------------------------------
# skeleton A0: limits of the form base + w*c
#
# X holds the current output's source; each iteration prints it and re-wraps
# it in Print('...');End, escaping quotes and backslashes by hand.
# ---------------------------------------------------------------------------

_A0_WHILE = While(
    TrueCond(),
    (
        Print(Var("X")),
        Assign("E", Literal("")),
        Assign("R", Var("X")),
        While(
            Not(Equals(Var("R"), Literal(""))),
            (
                Assign("H", Head(Var("R"))),
                Assign("R", Tail(Var("R"))),
                IfElse(
                    Equals(Var("H"), Literal("'")),
                    (Assign("E", concat(Var("E"), Literal("\\'"))),),
                    (
                        IfElse(
                            Equals(Var("H"), Literal("\\")),
                            (Assign("E", concat(Var("E"), Literal("\\\\"))),),
                            (Assign("E", concat(Var("E"), Var("H"))),),
                        ),
                    ),
                ),
            ),
        ),
        Assign("X", concat(Literal("Print('"), Var("E"), Literal("');End"))),
    ),
)

# Serialization of everything after the X= assignment, shared with the driver.
_A0_REST = serialize(Program((_A0_WHILE,)))


def _a0_program(base_source: str) -> Program:
    return Program((Assign("X", Literal(base_source)), _A0_WHILE))


# ---------------------------------------------------------------------------
# universal driver: all other limits
#
# Register map (single letters keep the quoted source small):
#   C encoding of the compiled ordinal      L driver source text (quine data)
#   N unary output counter                  T current child source text
#   A encoding being stepped    S stack of pending wrap frames (comma-separated)
#   F loop flag                 G rest-of-ordinal frame
#   D encoding of the current fundamental-sequence member
#   B first exponent   K first coefficient (unary)   W walk/rest of encoding
#   P unary paren depth   M current character   Q scan flag
#   J pending successor wraps   Y pending omega wraps
#   U escaped text   V escape-loop walk
# ---------------------------------------------------------------------------

def _esc_stmts(src: str, dst: str) -> tuple[Statement, ...]:
    """dst = src with backslashes doubled and quotes backslashed."""
    return (
        Assign(dst, Literal("")),
        Assign("V", Var(src)),
        While(
            Not(Equals(Var("V"), Literal(""))),
            (
                Assign("M", Head(Var("V"))),
                Assign("V", Tail(Var("V"))),
                IfElse(
                    Equals(Var("M"), Literal("'")),
                    (Assign(dst, concat(Var(dst), Literal("\\'"))),),
                    (
                        IfElse(
                            Equals(Var("M"), Literal("\\")),
                            (Assign(dst, concat(Var(dst), Literal("\\\\"))),),
                            (Assign(dst, concat(Var(dst), Var("M"))),),
                        ),
                    ),
                ),
            ),
        ),
    )


def _first_split_stmts(src: str) -> tuple[Statement, ...]:
    """Split the leading term of a nonempty encoding held in ``src``.

    Leaves the exponent encoding in B, the unary coefficient in K, and the
    remaining terms in W.
    """
    return (
        Assign("B", Literal("")),
        Assign("P", Literal("I")),
        Assign("W", Tail(Var(src))),
        While(
            Not(Equals(Var("P"), Literal(""))),
            (
                Assign("M", Head(Var("W"))),
                Assign("W", Tail(Var("W"))),
                IfElse(
                    Equals(Var("M"), Literal("(")),
                    (
                        Assign("P", concat(Var("P"), Literal("I"))),
                        Assign("B", concat(Var("B"), Var("M"))),
                    ),
                    (
                        IfElse(
                            Equals(Var("M"), Literal(")")),
                            (
                                Assign("P", Tail(Var("P"))),
                                IfElse(
                                    Equals(Var("P"), Literal("")),
                                    (),
                                    (Assign("B", concat(Var("B"), Var("M"))),),
                                ),
                            ),
                            (Assign("B", concat(Var("B"), Var("M"))),),
                        ),
                    ),
                ),
            ),
        ),
        Assign("K", Literal("")),
        Assign("Q", Literal("x")),
        While(
            Not(Equals(Var("Q"), Literal(""))),
            (
                IfElse(
                    Equals(Var("W"), Literal("")),
                    (Assign("Q", Literal("")),),
                    (
                        IfElse(
                            Equals(Head(Var("W")), Literal("I")),
                            (
                                Assign("K", concat(Var("K"), Literal("I"))),
                                Assign("W", Tail(Var("W"))),
                            ),
                            (Assign("Q", Literal("")),),
                        ),
                    ),
                ),
            ),
        ),
    )


# Fundamental-sequence step: from C (encoding of the limit) and N (unary n),
# leave the encoding of the n-th member in D. Iterative descent: successor
# exponents terminate, limit exponents push their rest-frame onto S and recurse
# into the exponent; afterwards the frames are unwound as w^(...)·1 wraps.
_FS_STMTS: tuple[Statement, ...] = (
    Assign("S", Literal("")),
    Assign("A", Var("C")),
    Assign("F", Literal("")),
    While(
        Equals(Var("F"), Literal("")),
        _first_split_stmts("A")
        + (
            IfElse(
                Equals(Var("K"), Literal("I")),
                (Assign("G", Var("W")),),
                (
                    Assign(
                        "G",
                        concat(
                            Literal("("), Var("B"), Literal(")"), Tail(Var("K")), Var("W")
                        ),
                    ),
                ),
            ),
            IfElse(
                Equals(Head(Tail(Var("B"))), Literal(")")),
                (
                    # successor exponent: drop its "()" term and one I
                    Assign("B", Tail(Tail(Tail(Var("B"))))),
                    IfElse(
                        Equals(Var("B"), Literal("")),
                        (),
                        (
                            IfElse(
                                Equals(Head(Var("B")), Literal("I")),
                                (Assign("B", concat(Literal("()"), Var("B"))),),
                                (),
                            ),
                        ),
                    ),
                    IfElse(
                        Equals(Var("N"), Literal("")),
                        (Assign("D", Var("G")),),
                        (
                            Assign(
                                "D",
                                concat(
                                    Literal("("), Var("B"), Literal(")"), Var("N"), Var("G")
                                ),
                            ),
                        ),
                    ),
                    Assign("F", Literal("x")),
                ),
                (
                    # limit exponent: remember the rest, step into the exponent
                    Assign("S", concat(Var("G"), Literal(","), Var("S"))),
                    Assign("A", Var("B")),
                ),
            ),
        ),
    ),
    While(
        Not(Equals(Var("S"), Literal(""))),
        (
            Assign("G", Literal("")),
            While(
                Not(Equals(Head(Var("S")), Literal(","))),
                (
                    Assign("G", concat(Var("G"), Head(Var("S")))),
                    Assign("S", Tail(Var("S"))),
                ),
            ),
            Assign("S", Tail(Var("S"))),
            Assign("D", concat(Literal("("), Var("D"), Literal(")I"), Var("G"))),
        ),
    ),
)

# Source build: from D (encoding of the member), leave its source text in T.
# Peel a finite part into J and a trailing w-coefficient into Y; the remaining
# core is 0 or a deep limit, which becomes End or a child driver.
_SB_STMTS: tuple[Statement, ...] = (
    Assign("J", Literal("")),
    IfElse(
        Equals(Var("D"), Literal("")),
        (),
        _first_split_stmts("D")
        + (
            IfElse(
                Equals(Var("B"), Literal("")),
                (Assign("J", Var("K")), Assign("D", Var("W"))),
                (),
            ),
        ),
    ),
    Assign("Y", Literal("")),
    IfElse(
        Equals(Var("D"), Literal("")),
        (),
        _first_split_stmts("D")
        + (
            IfElse(
                Equals(Var("B"), Literal("()I")),
                (Assign("Y", Var("K")), Assign("D", Var("W"))),
                (),
            ),
        ),
    ),
    IfElse(
        Equals(Var("D"), Literal("")),
        (Assign("T", Literal("End")),),
        _esc_stmts("L", "U")
        + (
            Assign(
                "T",
                concat(
                    Literal("C='"),
                    Var("D"),
                    Literal("';L='"),
                    Var("U"),
                    Literal("';"),
                    Var("L"),
                ),
            ),
        ),
    ),
    While(
        Not(Equals(Var("Y"), Literal(""))),
        (Assign("Y", Tail(Var("Y"))),)
        + _esc_stmts("T", "U")
        + (
            Assign(
                "T",
                concat(Literal("X='"), Var("U"), Literal("';" + _A0_REST)),
            ),
        ),
    ),
    While(
        Not(Equals(Var("J"), Literal(""))),
        (Assign("J", Tail(Var("J"))),)
        + _esc_stmts("T", "U")
        + (
            Assign(
                "T",
                concat(Literal("Print('"), Var("U"), Literal("');End")),
            ),
        ),
    ),
)

# Working registers are zeroed up front so the program is statically closed;
# the first loop iteration assigns them all before use anyway.
_DRIVER_STMTS: tuple[Statement, ...] = tuple(
    Assign(reg, Literal("")) for reg in "ABDFGJKMNPQSTUVWY"
) + (
    While(
        TrueCond(),
        _FS_STMTS
        + _SB_STMTS
        + (
            Print(Var("T")),
            Assign("N", concat(Var("N"), Literal("I"))),
        ),
    ),
)

_DRIVER_CODE_TEXT = serialize(Program(_DRIVER_STMTS))


def _driver_program(enc: str) -> Program:
    # Serialization is concatenative, so the program text after the two data
    # assignments is byte-equal to _DRIVER_CODE_TEXT, which is also the value
    # of L: the driver can rebuild its own kind.
    return Program(
        (Assign("C", Literal(enc)), Assign("L", Literal(_DRIVER_CODE_TEXT)))
        + _DRIVER_STMTS
    )


# ---------------------------------------------------------------------------
# compiler
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def compile_ordinal(a: Ordinal) -> Program:
    """Canonical notation program whose value is exactly ``a``.

    Output n of a compiled limit is byte-equal to
    ``serialize(compile_ordinal(fundamental_sequence(a, n)))`` for every n.
    """
    kind = classify(a)
    if kind is Kind.ZERO:
        return Program(())
    if kind is Kind.SUCCESSOR:
        return Program((Print(Literal(source_of(predecessor(a)))),))
    exp, coeff = a.terms[-1]
    if exp == ONE:
        # a = base + w; the A0 skeleton counts upward from the base.
        if coeff > 1:
            base = Ordinal(a.terms[:-1] + ((exp, coeff - 1),))
        else:
            base = Ordinal(a.terms[:-1])
        return _a0_program(source_of(base))
    return _driver_program(_encode(a))


@lru_cache(maxsize=None)
def source_of(a: Ordinal) -> str:
    """serialize(compile_ordinal(a)), memoized."""
    return serialize(compile_ordinal(a))


def succ_notation(p: Program) -> Program:
    """The program that prints ``p``'s source once; value = value(p) + 1."""
    return Program((Print(Literal(serialize(p))),))


# ---------------------------------------------------------------------------
# decompiler
# ---------------------------------------------------------------------------

def _candidate(p: Program) -> Ordinal | None:
    ss = p.statements
    if not ss:
        return ZERO
    if len(ss) == 1 and isinstance(ss[0], Print) and isinstance(ss[0].expr, Literal):
        try:
            inner = parse(ss[0].expr.text)
        except ParseError:
            return None
        base = _candidate(inner)
        return None if base is None else add(base, ONE)
    if (
        len(ss) == 2
        and isinstance(ss[0], Assign)
        and ss[0].name == "X"
        and isinstance(ss[0].expr, Literal)
        and ss[1] == _A0_WHILE
    ):
        try:
            inner = parse(ss[0].expr.text)
        except ParseError:
            return None
        base = _candidate(inner)
        return None if base is None else add(base, Ordinal(((ONE, 1),)))
    if (
        len(ss) == len(_DRIVER_STMTS) + 2
        and isinstance(ss[0], Assign)
        and ss[0].name == "C"
        and isinstance(ss[0].expr, Literal)
        and ss[1] == Assign("L", Literal(_DRIVER_CODE_TEXT))
        and ss[2:] == _DRIVER_STMTS
    ):
        try:
            return _decode(ss[0].expr.text)
        except ValueError:
            return None
    return None


def decompile(p: Program) -> Ordinal | None:
    """Invert the compiler: the ordinal ``a`` with compile_ordinal(a) == p.

    Returns None when ``p`` is not in the compiler's image (this is a value,
    not an error; most programs are not canonical).
    """
    a = _candidate(p)
    if a is None:
        return None
    return a if compile_ordinal(a) == p else None


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ProvenMember:
    """Every reachable output was exhaustively checked and halted in fuel."""

    exact_value: Ordinal | None = None


@dataclass(frozen=True, slots=True)
class Refuted:
    """Concrete counterexample: output indices leading to the failure."""

    path: tuple[int, ...]
    reason: str


@dataclass(frozen=True, slots=True)
class Inconclusive:
    outputs_checked: int
    depth_reached: int


Verdict = Union[ProvenMember, Refuted, Inconclusive]


@dataclass(frozen=True, slots=True)
class FuelSpent:
    steps: int
    outputs: int
    evaluations: int


@dataclass(frozen=True, slots=True)
class VerificationResult:
    verdict: Verdict
    fuel_spent: FuelSpent


class _Acct:
    __slots__ = ("steps", "outputs", "evals", "max_level")

    def __init__(self) -> None:
        self.steps = 0
        self.outputs = 0
        self.evals = 0
        self.max_level = 0


def _split_fuel(fuel: Fuel, n: int) -> list[Fuel]:
    """Divide fuel among n children: remainder to the earliest, floor of 1."""
    if n == 0:
        return []
    qs, rs = divmod(fuel.max_steps, n)
    qo, ro = divmod(fuel.max_outputs, n)
    return [
        Fuel(max(qs + (1 if i < rs else 0), 1), max(qo + (1 if i < ro else 0), 1))
        for i in range(n)
    ]


def _verify_at(
    p: Program,
    fuel: Fuel,
    level: int,
    path: tuple[int, ...],
    max_depth: int,
    acct: _Acct,
) -> Verdict:
    acct.evals += 1
    if level > acct.max_level:
        acct.max_level = level
    try:
        tr = evaluate(p, fuel)
    except (EvalError, OpenProgramError) as exc:
        return Refuted(path, f"runtime error: {exc}")
    acct.steps += tr.steps_used
    children: list[Program] = []
    for i, text in enumerate(tr.outputs):
        try:
            children.append(parse(text))
        except ParseError as exc:
            acct.outputs += i + 1
            return Refuted(path + (i,), f"output does not parse: {exc}")
    acct.outputs += len(children)
    halted = tr.status is TraceStatus.HALTED
    if level == max_depth:
        if halted and not children:
            return ProvenMember(ZERO)
        return Inconclusive(len(children), level)
    inconclusive = not halted
    child_values: list[Ordinal] = []
    for i, (child, child_fuel) in enumerate(zip(children, _split_fuel(fuel, len(children)))):
        v = _verify_at(child, child_fuel, level + 1, path + (i,), max_depth, acct)
        if isinstance(v, Refuted):
            return v
        if isinstance(v, ProvenMember) and v.exact_value is not None:
            child_values.append(v.exact_value)
        else:
            inconclusive = True
    if inconclusive:
        return Inconclusive(len(children), level)
    exact = ZERO
    for cv in child_values:
        cand = add(cv, ONE)
        if cand > exact:
            exact = cand
    return ProvenMember(exact)


def verify(p: Program, fuel: Fuel, max_depth: int) -> VerificationResult:
    """Fuel-bounded membership check, recursing through printed outputs.

    Outputs are explored in emission order, fuel split evenly among children
    with the remainder going to the earliest. Any output that fails to parse,
    or any runtime error, refutes membership with the output-index path as
    the counterexample. ProvenMember requires every execution in the tree to
    halt within fuel; then the exact value is the least ordinal above all
    child values. Everything else is Inconclusive: membership is not
    computably enumerable, so no fuel setting can decide it in general.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    acct = _Acct()
    verdict = _verify_at(p, fuel, 1, (), max_depth, acct)
    if isinstance(verdict, Inconclusive):
        verdict = Inconclusive(acct.outputs, acct.max_level)
    return VerificationResult(verdict, FuelSpent(acct.steps, acct.outputs, acct.evals))


def _bound_at(p: Program, fuel: Fuel, level: int, max_depth: int) -> tuple[Ordinal, bool]:
    try:
        tr = evaluate(p, fuel)
    except (EvalError, OpenProgramError):
        return ZERO, True
    children: list[Program] = []
    for text in tr.outputs:
        try:
            children.append(parse(text))
        except ParseError:
            return ZERO, True
    if level == max_depth:
        # A child that at least parses is a candidate of value >= 0.
        return (ONE if children else ZERO), False
    best = ZERO
    for child, child_fuel in zip(children, _split_fuel(fuel, len(children))):
        b, refuted = _bound_at(child, child_fuel, level + 1, max_depth)
        if refuted:
            return ZERO, True
        cand = add(b, ONE)
        if cand > best:
            best = cand
    return best, False


def value_lower_bound(p: Program, fuel: Fuel, max_depth: int) -> tuple[Ordinal, bool]:
    """Lower bound on the value of ``p``: sup of (bound(output) + 1).

    Returns (bound, refuted). Non-decreasing in fuel and depth, and never
    above the true value for genuine notations. If membership is refuted
    anywhere in the explored tree the value is undefined; (0, True) is
    returned and the bound must be ignored.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    return value_lower_bound_with_flag(p, fuel, max_depth)


def value_lower_bound_with_flag(
    p: Program, fuel: Fuel, max_depth: int
) -> tuple[Ordinal, bool]:
    bound, refuted = _bound_at(p, fuel, 1, max_depth)
    return (ZERO, True) if refuted else (bound, False)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def certificate_text(a: Ordinal, source: str) -> str:
    """Two-line certificate binding an ordinal claim to program bytes."""
    sha = hashlib.sha256(source.encode("utf-8")).hexdigest()
    return f"ordinal: {format_ordinal(a)}\nsha256: {sha}\n"


def parse_certificate(text: str) -> tuple[str, str]:
    """Return (ordinal surface syntax, sha256 hex) from certificate text."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("ordinal: ") or not lines[1].startswith(
        "sha256: "
    ):
        raise ValueError("certificate must have 'ordinal: ...' and 'sha256: ...' lines")
    return lines[0][len("ordinal: ") :], lines[1][len("sha256: ") :]
