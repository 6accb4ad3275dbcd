import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lambdaq.catalog import STOCHASTIC_MATRIX, REFLECTION, catalog, identity
from lambdaq.compiler import (MalformedConfiguration, ScaleLedger, ZeroTotalCount, compile_spec,
                              decode_config, decode_superposition, digit_joiner, digit_splitter,
                              emit_accept_term, emit_iter_term, emit_sigma_term,
                              emit_transition_term, encode_config, encode_state,
                              encode_superposition, numeral_forcer, pad, read_manifest,
                              run_compiled, scale_matrix, scale_superposition, write_manifest)
from lambdaq.canonical import CanonicalSuperposition, combine
from lambdaq.encodings import church, unchurch, unchurch_bool
from lambdaq.pqca import PqcaSpec, basis, run, sigma
from lambdaq.reduction import reduce
from lambdaq.terms import Var, alpha_eq, apply, parse_term, show


def spec_of(matrix, sub=(1, 2, 1), width=1, **kw):
    return PqcaSpec(sub, width, matrix, **kw)


def test_scale_stochastic_matrix():
    assert scale_matrix(STOCHASTIC_MATRIX) == (9, [[6, 3], [0, 9]])


def test_scale_reflection_uses_product_of_denominators():
    assert scale_matrix(REFLECTION) == (625, [[375, 500], [500, -375]])
    assert scale_matrix(REFLECTION, lcm=True) == (5, [[3, 4], [4, -3]])


def test_scale_identity():
    assert scale_matrix(identity(3)) == (1, identity(3))


def test_scale_superposition():
    assert scale_superposition({(0,): F(1, 2), (1,): F(-1, 3)}) == (6, {(0,): 3, (1,): -2})
    assert scale_superposition({(0,): F(1, 2), (1,): F(1, 4)}, lcm=True) == (4, {(0,): 2,
                                                                                (1,): 1})
    with pytest.raises(ValueError):
        scale_superposition({})


def test_ledger():
    ledger = ScaleLedger(b=9, d=2, width=3)
    assert ledger.total_scale == 2
    assert ledger.advanced(2).total_scale == 2 * 9 ** 6


def q_counts(spec, state, lcm=False):
    q = emit_transition_term(spec, lcm=lcm)
    canon = reduce(apply(q, encode_state(state))).canonical
    return {unchurch(t): n for t, n in canon}


def test_transition_term_stochastic_rows():
    spec = spec_of(STOCHASTIC_MATRIX)
    assert q_counts(spec, 0) == {0: 6, 1: 3}
    assert q_counts(spec, 1) == {1: 9}


def test_transition_term_shape():
    q = emit_transition_term(spec_of(STOCHASTIC_MATRIX))
    text = show(q)
    assert text.startswith(r"\s.")
    assert ": 6" in text and ": 3" in text and ": 9" in text


def test_transition_term_negative_counts():
    spec = spec_of(REFLECTION)
    assert q_counts(spec, 1) == {0: 500, 1: -375}
    assert q_counts(spec, 0, lcm=True) == {0: 3, 1: 4}


def test_transition_term_out_of_range_is_empty():
    q = emit_transition_term(spec_of(STOCHASTIC_MATRIX))
    assert len(reduce(apply(q, church(5))).canonical) == 0


@given(st.lists(st.integers(0, 6), max_size=6))
def test_config_round_trip(config):
    assert decode_config(encode_config(config)) == tuple(config)


def test_decode_rejects_malformed():
    with pytest.raises(MalformedConfiguration):
        decode_config(parse_term(r"\x. x"))
    with pytest.raises(MalformedConfiguration):
        decode_config(parse_term(r"\s. s (\y. y) (\x a b. a)"))


def test_distinct_configs_have_distinct_encodings():
    configs = [(a, b) for a in range(3) for b in range(3)] + [(0,), (1,), (), (0, 0, 0)]
    keys = {show(encode_config(c)) for c in configs}
    assert len(keys) == len(configs)
    assert not alpha_eq(encode_config((0, 1)), encode_config((1, 0)))


def test_decode_superposition_modes():
    canon = combine([(encode_config((0,)), 6), (encode_config((1,)), 3)])
    ledger = ScaleLedger(b=9, d=1, width=1, steps_applied=1)
    assert decode_superposition(canon, ledger) == {(0,): F(2, 3), (1,): F(1, 3)}
    assert decode_superposition(canon, ledger, "paper") == {(0,): F(2, 3), (1,): F(1, 3)}
    skew = combine([(encode_config((0,)), 3), (encode_config((1,)), -3)])
    assert decode_superposition(skew, ledger) == {(0,): F(1, 3), (1,): F(-1, 3)}
    with pytest.raises(ZeroTotalCount):
        decode_superposition(skew, ledger, "paper")
    with pytest.raises(ValueError):
        decode_superposition(canon, ledger, "other")


def test_pad_costs_p_plus_two_steps():
    for p in range(5):
        trace = reduce(pad(p, Var("v")))
        assert trace.final == Var("v") and trace.steps == p + 2


def test_splitter_joiner_forcer():
    spec = spec_of(identity(12), sub=(2, 3, 2))
    split, join = digit_splitter(spec), digit_joiner(spec)
    k = parse_term(r"\l m r. PAIR l (PAIR m r)")
    for q in range(12):
        out = reduce(apply(split, church(q), Var("k"))).final
        assert show(out).startswith("k ")
        digits = [unchurch(a) for a in (out.fn.fn.arg, out.fn.arg, out.arg)]
        assert tuple(digits) == spec.split(q)
        assert unchurch(apply(join, *[church(d) for d in digits])) == q
    force = numeral_forcer(4)
    thunk = apply(parse_term(r"\m n f x. m f (n f x)"), church(1), church(2))
    assert unchurch(reduce(apply(force, thunk, Var("k"))).final.arg) == 3
    del k


@given(st.integers(0, 10 ** 6))
def test_sigma_term_matches_reference(seed):
    rng = random.Random(seed)
    spec, _ = catalog(1, seed=seed)[0]
    config = tuple(rng.randrange(spec.n_states) for _ in range(spec.width))
    out = reduce(apply(emit_sigma_term(spec), encode_config(config))).final
    assert decode_config(out) == sigma(config, spec)


def test_accept_term():
    spec = spec_of(identity(4), sub=(1, 4, 1), width=3, accept_states={1, 3}, accept_cell=2)
    acc = emit_accept_term(spec)
    for c in [(0, 0, 1), (2, 2, 3), (1, 1, 0), (3, 3, 2)]:
        assert unchurch_bool(apply(acc, encode_config(c))) == (c[2] in {1, 3})
    none = emit_accept_term(spec_of(identity(2)))
    assert not unchurch_bool(apply(none, encode_config((1,))))


def test_step_term_on_stochastic_example():
    spec = spec_of(STOCHASTIC_MATRIX)
    compiled = compile_spec(spec)
    canon = reduce(apply(compiled.step_term, encode_config((0,)))).canonical
    assert {decode_config(t): n for t, n in canon} == {(0,): 6, (1,): 3}


def test_iter_term_applies_step_k_times():
    spec = spec_of(identity(2), width=2)
    compiled = compile_spec(spec)
    canon = reduce(apply(emit_iter_term(compiled.step_term, 3), encode_config((1, 0)))).canonical
    assert [(decode_config(t), n) for t, n in canon] == [((1, 0), 1)]


def test_synchronised_and_unsynchronised_agree():
    spec, initial = catalog(1, seed=4)[0]
    fast = run_compiled(compile_spec(spec), initial, 2)
    slow = run_compiled(compile_spec(spec, sync=False), initial, 2)
    assert fast.final.canonical == slow.final.canonical
    steps = [it.steps for it in fast.iterations[1:]]
    assert steps[0] == steps[1]


def test_run_compiled_matches_reference_on_catalog():
    for spec, initial in catalog(12, seed=2, max_width=3):
        compiled = compile_spec(spec)
        result = run_compiled(compiled, initial, 2)
        for it in result.iterations:
            assert decode_superposition(it.canonical, it.ledger) == run(spec, initial, it.k)


def test_run_compiled_superposed_initial_state():
    spec = spec_of(REFLECTION, sub=(2, 1, 1), width=2)
    initial = {(0, 1): F(3, 5), (1, 1): F(-4, 5)}
    result = run_compiled(compile_spec(spec, initial), initial, 1)
    assert result.final.ledger.d == 5 * 5
    assert decode_superposition(result.final.canonical, result.final.ledger) == run(spec,
                                                                                   initial, 1)


def test_run_compiled_fuel():
    spec = spec_of(STOCHASTIC_MATRIX)
    result = run_compiled(compile_spec(spec), basis([0]), 3, fuel=50)
    assert result.fuel_exhausted and len(result.iterations) == 2


def test_run_compiled_rejects_bad_configuration():
    with pytest.raises(ValueError):
        run_compiled(compile_spec(spec_of(STOCHASTIC_MATRIX)), basis([2]), 1)


def test_encode_superposition():
    d, canon = encode_superposition({(0,): F(1, 2), (1,): F(-1, 2)})
    assert d == 4
    assert {decode_config(t): n for t, n in canon} == {(0,): 2, (1,): -2}


def test_manifest_round_trip():
    spec = spec_of(STOCHASTIC_MATRIX)
    compiled = compile_spec(spec)
    text = write_manifest(compiled)
    back = read_manifest(text)
    assert back["b"] == 9 and back["d"] == 1 and back["w"] == 1
    assert back["T"] == [[6, 3], [0, 9]]
    assert alpha_eq(back["P"], compiled.sigma_term)
    assert alpha_eq(back["Q"], compiled.transition_term)
    assert alpha_eq(back["STEP"], compiled.step_term)
    assert alpha_eq(back["ACC"], compiled.accept_term)


def test_identity_manifest_has_unit_scale():
    assert read_manifest(write_manifest(compile_spec(spec_of(identity(2)))))["b"] == 1


def test_printed_step_term_reparses():
    for spec, _ in catalog(5, seed=11):
        step = compile_spec(spec).step_term
        assert alpha_eq(parse_term(show(step)), step)


def test_emitted_terms_are_closed():
    compiled = compile_spec(spec_of(REFLECTION, width=3))
    for t in (compiled.sigma_term, compiled.transition_term, compiled.step_term,
              compiled.accept_term):
        assert not t.free_vars
