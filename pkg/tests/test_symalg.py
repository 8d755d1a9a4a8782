import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import Q03, random_element, random_word
from qcuntz.coeff import ConfigError, PhaseCoeff
from qcuntz.fockrep import build_fock_rep, evaluate, evaluate_word
from qcuntz.symalg import (
    AlgebraConfig,
    Alpha,
    Beta,
    Element,
    Gauge,
    Letter,
    ModeError,
    Monomial,
    Rho,
    S,
    T,
    adjoint,
    apply_aut,
    apply_rule,
    expectation_gauge,
    gauge_component,
    multiply,
    normal_order,
    normal_order_word,
    s,
    t,
)

UNI = AlgebraConfig.single(2, 2)
GEN = AlgebraConfig.generic(2, 2)
MULTI = AlgebraConfig.multi(2, 2)
CONFIGS = [UNI, GEN, MULTI]
CFG_IDS = ["unimodular", "generic", "multi"]


def mono(creation="", annihilation=""):
    """``mono("s1t2", "s1")`` is s1 t2 s1^*."""

    def letters(text):
        out = []
        for k in range(0, len(text), 2):
            out.append(Letter(S if text[k] == "s" else T, int(text[k + 1])))
        return tuple(out)

    return Monomial(letters(creation), letters(annihilation))


def is_normal(m: Monomial, unimodular: bool) -> bool:
    if not unimodular:
        return True
    for word in (m.creation, m.annihilation):
        fams = [f for f, _ in word]
        if fams != sorted(fams):
            return False
    return True


q = PhaseCoeff.q(UNI.vars)
qc = PhaseCoeff.qc(UNI.vars)


# --- individual rules -------------------------------------------------------


def test_isometry_relation():
    assert normal_order([s(1, True), s(1)], UNI) == Element.one(UNI)


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
def test_orthogonal_ranges(cfg):
    assert normal_order([s(1, True), s(2)], cfg).is_zero()
    assert normal_order([t(2, True), t(1)], cfg).is_zero()


def test_star_s_past_t():
    assert normal_order([s(1, True), t(2)], UNI) == Element.monomial(UNI, mono("t2", "s1"), q)


def test_t_past_s_in_unimodular_mode():
    assert normal_order([t(1), s(2)], UNI) == Element.monomial(UNI, mono("s2t1"), q)


def test_starred_pair_picks_up_conjugate_phase():
    # adjoint of t1 s1 = q s1 t1
    got = normal_order([s(1, True), t(1, True)], UNI)
    assert got == Element.monomial(UNI, mono("", "s1t1"), qc)
    rep = build_fock_rep(2, 2, 3, 3, Q03, "B")
    lhs = evaluate_word([s(1, True), t(1, True)], rep).mat
    rhs = Q03.conjugate() * evaluate_word([t(1, True), s(1, True)], rep).mat
    assert abs(lhs - rhs).max() < 1e-14


def test_generic_star_t_past_s():
    got = normal_order([t(1, True), s(1), t(1)], GEN)
    assert got == Element.monomial(GEN, mono("s1"), PhaseCoeff.qc(GEN.vars))


def test_generic_mode_keeps_mixed_order():
    x = normal_order([t(1), s(2)], GEN)
    assert list(x.monomials()) == [mono("t1s2")]


@pytest.mark.parametrize("rule, word", [("R5", [t(1), s(1)]), ("R6", [s(1, True), t(1, True)])])
def test_unimodular_rules_refused_in_generic_mode(rule, word):
    with pytest.raises(ModeError):
        apply_rule(word, 0, rule, GEN)
    assert apply_rule(word, 0, rule, UNI) is not None


def test_apply_rule_rejects_mismatched_letters():
    with pytest.raises(ValueError):
        apply_rule([s(1), t(1)], 0, "R3", UNI)


def test_multi_phases_follow_the_matrix_entries():
    x = normal_order([t(2), s(1)], MULTI)
    assert x == Element.monomial(MULTI, mono("s1t2"), PhaseCoeff.qij(MULTI.vars, 1, 2, -1))
    y = normal_order([t(2, True), s(1)], MULTI)
    assert y == Element.monomial(MULTI, mono("s1", "t2"), PhaseCoeff.qij(MULTI.vars, 1, 2))


def test_letters_out_of_range():
    with pytest.raises(ConfigError):
        normal_order([s(3)], UNI)


# --- products, adjoint, grading ---------------------------------------------


def test_simple_products():
    s1, s2 = Element.s(UNI, 1), Element.s(UNI, 2)
    assert multiply(s1, adjoint(s1)) == Element.monomial(UNI, mono("s1", "s1"))
    assert multiply(adjoint(s1), s2).is_zero()


def test_adjoint_examples():
    x = Element.s(UNI, 1) * Element.t(UNI, 2)
    assert adjoint(x) == Element.monomial(UNI, mono("", "s1t2"))
    y = Element.monomial(UNI, mono("t2", "s1"), q)
    assert adjoint(y) == Element.monomial(UNI, mono("s1", "t2"), qc)


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
def test_normal_forms(cfg, rng):
    for _ in range(100):
        x = random_element(rng, cfg, max_len=5)
        for m in x.monomials():
            assert is_normal(m, cfg.unimodular)


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
@given(seed=st.integers(0, 2**32 - 1))
def test_product_is_associative_and_bilinear(cfg, seed):
    r = random.Random(seed)
    a, b, c = (random_element(r, cfg) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
@given(seed=st.integers(0, 2**32 - 1))
def test_adjoint_is_an_antimultiplicative_involution(cfg, seed):
    r = random.Random(seed)
    a, b = random_element(r, cfg), random_element(r, cfg)
    assert adjoint(adjoint(a)) == a
    assert adjoint(a * b) == adjoint(b) * adjoint(a)


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
@given(seed=st.integers(0, 2**32 - 1))
def test_grading(cfg, seed):
    r = random.Random(seed)
    a, b = random_element(r, cfg), random_element(r, cfg)
    degrees = a.degrees() | {(0, 0)}
    total = Element.zero(cfg)
    for p in degrees:
        total = total + gauge_component(a, p)
    assert total == a
    for p in a.degrees():
        for p2 in b.degrees():
            target = (p[0] + p2[0], p[1] + p2[1])
            part = gauge_component(a * b, target)
            expect = Element.zero(cfg)
            for x in a.degrees():
                y = (target[0] - x[0], target[1] - x[1])
                expect = expect + gauge_component(a, x) * gauge_component(b, y)
            assert part == expect


def test_gauge_component_examples():
    x = Element.s(UNI, 1) + Element.monomial(UNI, mono("t1", "t1"))
    assert gauge_component(x, (1, 0)) == Element.s(UNI, 1)
    y = Element.monomial(UNI, mono("s1t1", "s2t1"))
    assert gauge_component(y, (0, 0)) == y


# --- termination and confluence ---------------------------------------------


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
def test_rewrite_steps_are_quadratically_bounded(cfg, rng):
    for _ in range(200):
        w = random_word(rng, 2, 2, 12)
        stats = {}
        normal_order_word(w, cfg.vars, stats=stats)
        L = len(w)
        assert stats["steps"] <= L * L


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
def test_random_strategy_agrees_with_leftmost(cfg, rng):
    for _ in range(100):
        w = random_word(rng, 2, 2, 10)
        a = normal_order(w, cfg)
        b = normal_order(w, cfg, strategy="random", rng=random.Random(rng.random()))
        assert a == b


# --- numeric oracle ---------------------------------------------------------


def test_products_match_fock_matrices(rng):
    rep = build_fock_rep(2, 2, 5, 5, Q03, "A")
    idx = rep.interior(4).indices
    for _ in range(30):
        a, b = random_element(rng, UNI, max_len=2), random_element(rng, UNI, max_len=2)
        lhs = evaluate(a * b, rep).mat[:, idx]
        rhs = (evaluate(a, rep).mat @ evaluate(b, rep).mat)[:, idx]
        assert np.abs((lhs - rhs).toarray()).max() < 1e-10


# --- automorphisms and expectations -----------------------------------------


def test_alpha_and_beta_examples():
    assert apply_aut(Element.t(UNI, 2), Alpha(1)) == Element.t(UNI, 2).scale(q)
    assert apply_aut(Element.s(UNI, 1), Alpha(1)) == Element.s(UNI, 1)
    x = Element.monomial(UNI, mono("s1t1", "s2"))
    assert apply_aut(x, Beta(2)) == x
    assert apply_aut(Element.s(UNI, 1), Beta(2)) == Element.s(UNI, 1).scale(q ** -2)


@pytest.mark.parametrize(
    "aut", [Alpha(1), Alpha(-2), Beta(3), Rho(PhaseCoeff.q(UNI.vars), PhaseCoeff.q(UNI.vars, -2))], ids=str
)
@given(seed=st.integers(0, 2**32 - 1))
def test_automorphisms_are_star_homomorphisms(aut, seed):
    r = random.Random(seed)
    a, b = random_element(r, UNI), random_element(r, UNI)
    assert apply_aut(a * b, aut) == apply_aut(a, aut) * apply_aut(b, aut)
    assert apply_aut(adjoint(a), aut) == adjoint(apply_aut(a, aut))


def test_alpha_needs_single_unimodular_mode():
    with pytest.raises(ModeError):
        apply_aut(Element.t(GEN, 1), Alpha(1))


def test_expectation_examples():
    bal = Element.monomial(UNI, mono("s1t1", "s1t1"))
    assert expectation_gauge(bal) == bal
    assert expectation_gauge(Element.s(UNI, 1)).is_zero()
    x = Element.monomial(UNI, mono("s1t2", "s2"))
    assert expectation_gauge(x, "phi1") == x
    assert expectation_gauge(x, "phi2").is_zero()


@pytest.mark.parametrize("which", ["phi", "phi1", "phi2"])
@given(seed=st.integers(0, 2**32 - 1))
def test_expectations_are_idempotent_bimodule_maps(which, seed):
    r = random.Random(seed)
    x = random_element(r, UNI)
    e = expectation_gauge(x, which)
    assert expectation_gauge(e, which) == e
    a = expectation_gauge(random_element(r, UNI), "phi")
    b = expectation_gauge(random_element(r, UNI), "phi")
    assert expectation_gauge(a * x * b, which) == a * e * b


def test_expectation_matches_torus_average(rng):
    cfg = UNI.specialized(Q03)
    x = random_element(rng, UNI, n_terms=5).specialize(Q03)
    K = 8
    for which, weights in [("phi1", (1, 0)), ("phi2", (0, 1)), ("phi", (1, 1))]:
        acc = Element.zero(cfg)
        for a in range(K):
            for b in range(K):
                th = (a / K if weights[0] else 0.0, b / K if weights[1] else 0.0)
                acc = acc + apply_aut(x, Gauge(*th))
        acc = acc.scale(1 / (K * K))
        diff = acc - expectation_gauge(x, which)
        assert diff.coeff_norm1() < 1e-12


# --- serialization ----------------------------------------------------------


@pytest.mark.parametrize("cfg", CONFIGS, ids=CFG_IDS)
def test_json_roundtrip(cfg, rng):
    for _ in range(20):
        x = random_element(rng, cfg)
        back = Element.from_json(x.to_json())
        assert back == x
        assert back.text() == x.text()


def test_numeric_json_roundtrip(rng):
    x = random_element(rng, UNI).specialize(Q03)
    back = Element.from_json(x.to_json())
    assert (back - x).coeff_norm1() == 0.0


def test_specialize_commutes_with_products(rng):
    for _ in range(20):
        a, b = random_element(rng, UNI), random_element(rng, UNI)
        lhs = (a * b).specialize(Q03)
        rhs = a.specialize(Q03) * b.specialize(Q03)
        assert (lhs - rhs).coeff_norm1() < 1e-12


def test_text_is_sorted_and_stable():
    x = Element.s(UNI, 2) + Element.one(UNI) + Element.t(UNI, 1)
    assert x.text() == "(1+0i) + (1+0i)*s2 + (1+0i)*t1"
    assert np.isclose(x.specialize(Q03).coeff_norm1(), 3.0)
