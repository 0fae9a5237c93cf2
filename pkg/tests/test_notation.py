import hashlib
import random

import hypothesis as hyp
import pytest
from hypothesis import strategies as st

from conftest import random_ordinal
from ionkit.objlang import Fuel, Literal, Print, Program, evaluate, parse, serialize
from ionkit.notation import (
    Inconclusive,
    ProvenMember,
    Refuted,
    certificate_text,
    compile_ordinal,
    decompile,
    parse_certificate,
    source_of,
    succ_notation,
    value_lower_bound,
    verify,
)
from ionkit.ordinals import (
    ONE,
    ZERO,
    from_int,
    fundamental_sequence,
    parse_ordinal,
    predecessor,
)


def o(text):
    return parse_ordinal(text)


AMPLE = Fuel(10**6, 16)


# ---------------------------------------------------------------------------
# compilation goldens
# ---------------------------------------------------------------------------

def test_compile_finite_chain():
    assert source_of(ZERO) == "End"
    assert source_of(ONE) == "Print('End');End"
    assert source_of(from_int(2)) == "Print('Print(\\'End\\');End');End"


def test_compile_omega_first_outputs():
    t = evaluate(compile_ordinal(o("w")), Fuel(10**5, 5))
    assert t.outputs == tuple(source_of(from_int(n)) for n in range(5))


def test_compile_omega_plus_one_is_print_of_omega():
    p = compile_ordinal(o("w+1"))
    assert p == Program((Print(Literal(source_of(o("w")))),))
    assert p == succ_notation(compile_ordinal(o("w")))


def test_succ_notation_goldens():
    assert serialize(succ_notation(parse("End"))) == "Print('End');End"
    assert succ_notation(succ_notation(parse("End"))) == compile_ordinal(from_int(2))


def test_compile_is_cached_and_pure():
    assert compile_ordinal(o("w^2")) is compile_ordinal(o("w^2"))


@pytest.mark.parametrize("expr", ["w", "w*2", "w^2", "w^w", "w^(w+1)", "w^2*3+w"])
def test_compositional_contract_samples(expr):
    lam = o(expr)
    t = evaluate(compile_ordinal(lam), Fuel(10**6, 4))
    assert len(t.outputs) == 4
    for n, out in enumerate(t.outputs):
        assert out == source_of(fundamental_sequence(lam, n)), (expr, n)


def test_successor_of_limit_prints_limit_source():
    for expr in ["w^w+1", "w^2+2"]:
        a = o(expr)
        t = evaluate(compile_ordinal(a), AMPLE)
        assert t.outputs == (source_of(predecessor(a)),)


# ---------------------------------------------------------------------------
# decompile
# ---------------------------------------------------------------------------

def test_decompile_goldens():
    assert decompile(parse("End")) == ZERO
    assert decompile(compile_ordinal(o("w^2+3"))) == o("w^2+3")
    assert decompile(parse("X='a';Print(X);End")) is None


def test_decompile_rejects_near_misses():
    # a print of something that is not a notation source
    assert decompile(parse("Print('nonsense');End")) is None
    # tampering with the generator's data literal must not decode
    src = source_of(o("w^2"))
    assert decompile(parse(src)) == o("w^2")
    broken = parse(src.replace("C='", "C='x", 1))
    assert decompile(broken) is None


@hyp.given(st.integers(0, 2**31))
def test_decompile_compile_roundtrip(seed):
    a = random_ordinal(random.Random(seed), 2)
    assert decompile(compile_ordinal(a)) == a


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_empty_program_is_member():
    r = verify(parse("End"), AMPLE, 1)
    assert r.verdict == ProvenMember(exact_value=ZERO)


def test_verify_finite_chain_exact_values():
    r = verify(compile_ordinal(from_int(3)), AMPLE, 8)
    assert r.verdict == ProvenMember(exact_value=from_int(3))


def test_verify_refutes_garbage_output():
    r = verify(parse("Print('garbage(');End"), AMPLE, 2)
    assert isinstance(r.verdict, Refuted)
    assert r.verdict.path == (0,)


def test_verify_refutes_runtime_error():
    r = verify(parse("Print(Head(''));End"), AMPLE, 2)
    assert isinstance(r.verdict, Refuted)
    assert r.verdict.path == ()


def test_verify_refutation_path_is_positional():
    # second output breaks; path must name index 1
    good = source_of(ZERO)
    p = parse(f"Print('{good}');Print('oops(');End")
    r = verify(p, AMPLE, 3)
    assert isinstance(r.verdict, Refuted)
    assert r.verdict.path == (1,)


def test_verify_nested_refutation_path():
    # outer program prints an inner program whose own output 0 is garbage
    inner = "Print('@@@');End"
    outer = serialize(Program((Print(Literal(inner)),)))
    r = verify(parse(outer), AMPLE, 4)
    assert isinstance(r.verdict, Refuted)
    assert r.verdict.path == (0, 0)


def test_verify_omega_inconclusive_with_proven_children():
    p = compile_ordinal(o("w"))
    r = verify(p, Fuel(10**6, 10), 12)
    assert isinstance(r.verdict, Inconclusive)
    assert r.verdict.outputs_checked == 55  # 10 direct + 45 nested
    assert r.fuel_spent.evaluations == 56
    # each emitted child is itself fully provable
    t = evaluate(p, Fuel(10**6, 10))
    for out in t.outputs:
        child = verify(parse(out), AMPLE, 12)
        assert isinstance(child.verdict, ProvenMember)


def test_verify_depth_limit_forces_inconclusive():
    r = verify(compile_ordinal(from_int(3)), AMPLE, 2)
    assert isinstance(r.verdict, Inconclusive)


def test_verify_never_refutes_compiled_spot_checks():
    for expr in ["0", "4", "w", "w+2", "w*3", "w^2", "w^w+w"]:
        p = compile_ordinal(o(expr))
        for fuel in (Fuel(500, 2), Fuel(5000, 4), Fuel(10**5, 8)):
            r = verify(p, fuel, 6)
            assert not isinstance(r.verdict, Refuted), (expr, fuel)


# ---------------------------------------------------------------------------
# value lower bounds
# ---------------------------------------------------------------------------

def test_value_goldens():
    assert value_lower_bound(parse("End"), AMPLE, 8) == (ZERO, False)
    assert value_lower_bound(compile_ordinal(o("w")), Fuel(10**6, 5), 8) == (from_int(5), False)
    assert value_lower_bound(compile_ordinal(from_int(3)), AMPLE, 8) == (from_int(3), False)


def test_value_refuted_flag():
    bound, refuted = value_lower_bound(parse("Print('###');End"), AMPLE, 4)
    assert bound == ZERO
    assert refuted is True


def test_value_agreement_with_convention():
    # frozen from the documented child-budget split (each child re-receives
    # the full output budget divided by sibling count)
    cases = [
        ("w+1", 6, "7"), ("w+1", 3, "4"),
        ("w*2", 6, "7"), ("w*2", 12, "8"),
        ("w^2", 4, "4"),
    ]
    for expr, mo, expect in cases:
        bound, refuted = value_lower_bound(compile_ordinal(o(expr)), Fuel(10**6, mo), 8)
        assert not refuted
        assert bound == o(expect), (expr, mo)


def test_value_monotone_in_fuel():
    p = compile_ordinal(o("w*2"))
    bounds = [
        value_lower_bound(p, Fuel(10**6, mo), 8)[0] for mo in (1, 2, 4, 8, 16)
    ]
    assert all(a <= b for a, b in zip(bounds, bounds[1:]))
    deep = value_lower_bound(p, Fuel(10**6, 4), 12)[0]
    assert deep >= bounds[2]


def test_value_never_exceeds_true_value():
    for expr in ["2", "5", "w", "w+3", "w*2", "w^2"]:
        a = o(expr)
        bound, _ = value_lower_bound(compile_ordinal(a), Fuel(10**5, 6), 8)
        assert bound <= a, expr


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_certificate_format():
    src = source_of(o("w"))
    text = certificate_text(o("w"), src)
    lines = text.splitlines()
    assert lines[0] == "ordinal: w"
    assert lines[1] == f"sha256: {hashlib.sha256(src.encode()).hexdigest()}"
    assert text.endswith("\n")


def test_certificate_roundtrip():
    src = source_of(o("w^2+1"))
    surface, digest = parse_certificate(certificate_text(o("w^2+1"), src))
    assert surface == "w^2+1"
    assert digest == hashlib.sha256(src.encode()).hexdigest()


def test_certificate_rejects_malformed():
    for bad in ("", "ordinal: w", "sha256: ff\nordinal: w\n", "ordinal w\nsha256: ff\n"):
        with pytest.raises(ValueError):
            parse_certificate(bad)
