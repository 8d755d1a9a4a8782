"""Acceptance criteria, one PASS/FAIL line each (shown in the pytest summary or when run as a script).

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""
import cmath
import itertools
import random
import sys
import time
from fractions import Fraction
from math import gcd

import numpy as np

from conftest import record_acceptance
from qcuntz.cuntzq import (
    _pair_words,
    commutation_phase_residual,
    implementing_isometry,
    pure_infinite_witness,
    quotient_equal,
    random_level_element,
)
from qcuntz.fockrep import (
    braid_residual,
    build_fock_rep,
    build_multi_fock_rep,
    evaluate,
    evaluate_word,
    operator_norm,
    relation_residuals,
    wick_T,
)
from qcuntz.kgroups import FgAbGroup, k_table
from qcuntz.rieffel import (
    GradedOperator,
    crossed_untwist_check,
    deform_rep,
    double_deform_check,
    theta_from_q,
    twisted_product,
)
from qcuntz.symalg import (
    AlgebraConfig,
    Element,
    Letter,
    Monomial,
    RawLetter,
    S,
    T,
    adjoint,
    expectation_gauge,
    gauge_components,
    normal_order,
    word_rise,
)
from qcuntz.untwist import generic_rep, partial_sum_identity, roundtrip_check

Q03 = cmath.exp(2j * cmath.pi * 0.3)

# tolerances and budgets, fixed by the acceptance criteria
RELATION_TOL = 1e-12
RELATION_BUDGET_S = 5.0
ROUNDTRIP_TOL = 1e-10
PARTIAL_SUM_TOL = 1e-12
UNTWIST_BUDGET_S = 10.0
ORACLE_TOL = 1e-10
WITNESS_TOL = 1e-8
WITNESS_BUDGET_S = 30.0
KTABLE_BUDGET_S = 1.0
DEFORM_TOL = 1e-13
WICK_TOL = 1e-12


def verdict(criterion, label, ok, detail):
    record_acceptance(criterion, label, ok, detail)
    assert ok, detail


def random_word(rng, n, m, max_len):
    out = []
    for _ in range(rng.randint(1, max_len)):
        fam = rng.choice((S, T))
        out.append(RawLetter(fam, rng.randint(1, n if fam == S else m), rng.random() < 0.5))
    return out


def unit_monomial(cfg, creation, annihilation):
    return Element(cfg, {Monomial(creation, annihilation): cfg.one_coeff()})


# ---------------------------------------------------------------------------


def test_criterion_1_relations():
    start = time.perf_counter()
    worst = 0.0
    tables = 0
    for q0 in (1.0 + 0j, Q03, 1j):
        for form in "ABC":
            res = relation_residuals(build_fock_rep(2, 2, 4, 4, q0, form), order=2)
            assert set(res) == {
                "s_i^* s_j - delta_ij",
                "t_r^* t_l - delta_rl",
                "s_j^* t_r - q t_r s_j^*",
                "t_r s_j - q s_j t_r",
            }
            worst = max(worst, max(res.values()))
            tables += 1
    elapsed = time.perf_counter() - start
    ok = worst < RELATION_TOL and elapsed < RELATION_BUDGET_S
    verdict("1", "relation suite", ok, f"{tables} tables, max residual {worst:.2e} (< 1e-12), {elapsed:.2f}s (< 5s)")


def test_criterion_2_untwist():
    start = time.perf_counter()
    rt = ps = 0.0
    for q0 in (0.0, 0.5, 0.5 * cmath.exp(2j * cmath.pi * 0.2)):
        rt = max(rt, roundtrip_check(2, 2, q0, 5)["that_r - v_{n+r}"])
        for N in range(4):
            ps = max(ps, partial_sum_identity(2, 2, q0, 5, N))
    elapsed = time.perf_counter() - start
    ok = rt < ROUNDTRIP_TOL and ps < PARTIAL_SUM_TOL and elapsed < UNTWIST_BUDGET_S
    verdict(
        "2", "untwist suite", ok,
        f"round trip {rt:.2e} (< 1e-10), partial sums {ps:.2e} (< 1e-12), {elapsed:.2f}s (< 10s)",
    )


def test_criterion_3_symbolic_matches_matrices():
    rng = random.Random(3)
    qmat = np.array([[Q03, 1j], [cmath.exp(2j * cmath.pi * 0.7), 1.0]])
    models = [
        ("unimodular", AlgebraConfig.single(2, 2), build_fock_rep(2, 2, 5, 5, Q03, "A")),
        ("multi", AlgebraConfig.multi(2, 2), build_multi_fock_rep(2, 2, 5, 5, qmat)),
        ("generic", AlgebraConfig.generic(2, 2), generic_rep(2, 2, 0.5 * cmath.exp(2j * cmath.pi * 0.2), 5)),
    ]
    worst = 0.0
    count = 0
    for _, cfg, rep in models:
        for _ in range(200):
            items = [((rng.randint(-3, 3), rng.randint(-3, 3)), random_word(rng, 2, 2, 4)) for _ in range(rng.randint(1, 3))]
            rs = max(word_rise(w)[0] for _, w in items)
            rt = max(word_rise(w)[1] for _, w in items)
            idx = rep.interior(rs, rt).indices
            assert len(idx) > 0
            symbolic = evaluate(normal_order(items, cfg), rep).mat
            raw = sum(complex(*c) * evaluate_word(w, rep).mat for c, w in items)
            diff = (symbolic - raw)[:, idx]
            worst = max(worst, float(np.abs(diff.toarray()).max()) if diff.nnz else 0.0)
            count += 1
    ok = worst < ORACLE_TOL
    verdict("3", "symbolic vs matrix oracle", ok, f"{count} elements over 3 modes, max deviation {worst:.2e} (< 1e-10)")


def test_criterion_4_confluence():
    rng = random.Random(4)
    configs = [AlgebraConfig.single(2, 2), AlgebraConfig.generic(2, 2), AlgebraConfig.multi(2, 2)]
    mismatches = 0
    total = 0
    for cfg in configs:
        for _ in range(500):
            w = random_word(rng, 2, 2, 10)
            a = normal_order(w, cfg, strategy="random", rng=random.Random(rng.random()))
            b = normal_order(w, cfg, strategy="random", rng=random.Random(rng.random()))
            mismatches += a != b
            total += 1
    verdict("4", "rewrite confluence", mismatches == 0, f"{total} words, {mismatches} mismatching normal forms")


# --- criterion 5: several exact identities ----------------------------------

UNI = AlgebraConfig.single(2, 2)


def matrix_unit_defects(k, l):
    words = _pair_words(UNI, k, l)
    units = {(a, b): unit_monomial(UNI, a[0] + a[1], b[0] + b[1]) for a in words for b in words}
    bad = 0
    for (a, b), x in units.items():
        bad += adjoint(x) != units[(b, a)]
        for c in words:
            for d in words:
                expected = units[(a, d)] if b == c else Element.zero(UNI)
                bad += x * units[(c, d)] != expected
    diag = sum((units[(a, a)] for a in words), Element.zero(UNI))
    bad += not quotient_equal(diag, Element.one(UNI))
    return bad, len(units)


def spanning_monomials(max_len):
    sw = [tuple(Letter(S, i) for i in w) for k in range(max_len + 1) for w in itertools.product((1, 2), repeat=k)]
    tw = [tuple(Letter(T, j) for j in w) for k in range(max_len + 1) for w in itertools.product((1, 2), repeat=k)]
    return [unit_monomial(UNI, mu + mup, nu + nup) for mu, mup, nup, nu in itertools.product(sw, tw, tw, sw)]


def test_criterion_5_matrix_units():
    bad11, n11 = matrix_unit_defects(1, 1)
    bad21, n21 = matrix_unit_defects(2, 1)
    ok = bad11 == 0 and bad21 == 0
    verdict("5a", "matrix units F_{1,1}, F_{2,1}", ok, f"{n11} + {n21} units, {bad11 + bad21} defects")


def test_criterion_5_expectations():
    rng = random.Random(5)
    bad = 0
    samples = spanning_monomials(1)
    for _ in range(100):
        terms = rng.sample(samples, 4)
        x = sum((m.scale((rng.randint(-3, 3), rng.randint(-3, 3))) for m in terms), Element.zero(UNI))
        for which in ("phi1", "phi2", "phi"):
            e = expectation_gauge(x, which)
            bad += expectation_gauge(e, which) != e
            bad += expectation_gauge(adjoint(x), which) != adjoint(e)
        phi = expectation_gauge(x, "phi")
        bad += expectation_gauge(expectation_gauge(x, "phi1"), "phi2") != phi
        bad += expectation_gauge(expectation_gauge(x, "phi2"), "phi1") != phi
        bad += phi != gauge_components(x).get((0, 0), Element.zero(UNI))
    verdict("5b", "gauge expectations idempotent", bad == 0, f"100 random elements, {bad} defects")


def test_criterion_5_implementing_isometry():
    w = implementing_isometry(UNI, 1, 1)
    wH = adjoint(w)
    bad = 0
    bad += not quotient_equal(wH * w, Element.one(UNI))
    words = _pair_words(UNI, 1, 1)
    for a in words:
        for b in words:
            y = unit_monomial(UNI, a[0] + a[1], b[0] + b[1])
            bad += not quotient_equal(w * y, y * w)
    ys = spanning_monomials(1)
    for y in ys:
        bad += not quotient_equal(wH * y * w, expectation_gauge(y, "phi"))
    verdict(
        "5c", "implementing isometry, k = l = 1", bad == 0,
        f"w^*w = 1, commutation with 16 units, w^*yw = phi(y) on {len(ys)} words: {bad} defects",
    )


def test_criterion_5_commutation_phase_as_stated():
    count, failures = commutation_phase_residual(UNI, 2, "printed")
    verdict(
        "5d", "commutation phase q^{(|nu1|-|mu1|)(|mu2|-|nu2|)}", not failures,
        f"{len(failures)} of {count} index tuples violate the stated exponent",
    )


def test_criterion_5_commutation_phase_recomputed():
    count, failures = commutation_phase_residual(UNI, 2, "derived")
    verdict(
        "5e", "supplementary: phase q^{(|mu1|-|nu1|)(|mu2|-|nu2|)}", not failures,
        f"{len(failures)} of {count} index tuples fail",
    )


# ---------------------------------------------------------------------------


def test_criterion_6_witness():
    cfg = AlgebraConfig.single(2, 2).specialized(Q03)
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    residuals = []
    for _ in range(20):
        x = random_level_element(cfg, 1, 1, rng)
        residuals.append(pure_infinite_witness(x).residual)
    elapsed = time.perf_counter() - start
    worst = max(residuals)
    ok = len(residuals) == 20 and worst < WITNESS_TOL and elapsed < WITNESS_BUDGET_S
    verdict("6", "pure-infiniteness witness", ok, f"20 inputs, max |axb - 1| {worst:.2e} (< 1e-8), {elapsed:.2f}s (< 30s)")


def test_criterion_7_ktable():
    start = time.perf_counter()
    disagree = 0
    ext_wrong = 0
    for n, m in itertools.product(range(2, 31), repeat=2):
        row = k_table(n, m)
        disagree += not row["routes_agree"]
        if row["d"] == 1:
            ext_wrong += not row["Ext_trivial"]
    ref = k_table(3, 5)
    elapsed = time.perf_counter() - start
    z2 = FgAbGroup.cyclic(2)
    ref_ok = (
        ref["d"] == 2
        and ref["K0_OnOm"] == z2
        and ref["K1_OnOm"] == z2
        and ref["K0_Mq"] == z2 + FgAbGroup.Z()
        and ref["K1_Mq"].is_trivial
        and ref["KK1_order"] == 8
        and gcd(3 - 1, 5 - 1) == 2
    )
    ok = disagree == 0 and ext_wrong == 0 and ref_ok and elapsed < KTABLE_BUDGET_S
    verdict(
        "7", "K-table", ok,
        f"841 pairs, {disagree} route disagreements, {ext_wrong} Ext errors, (3,5) reference "
        f"{'ok' if ref_ok else 'wrong'}, {elapsed:.2f}s (< 1s)",
    )


def test_criterion_8_rieffel():
    th = theta_from_q(Q03, exact=True)
    s1, t1 = Element.s(UNI, 1), Element.t(UNI, 1)
    a, b = GradedOperator((1, 0), s1), GradedOperator((0, 1), t1)
    phases_ok = twisted_product(a, b, th).turns == Fraction(-3, 20) and twisted_product(b, a, th).turns == Fraction(3, 20)
    rng = random.Random(8)
    samples = []
    for _ in range(4):
        x = normal_order([((1, 0), random_word(rng, 2, 2, 3)) for _ in range(2)], UNI)
        samples.extend(GradedOperator(p, comp) for p, comp in gauge_components(x).items())
    double = double_deform_check(samples, th)
    base = build_fock_rep(2, 2, 4, 4, 1.0, "A")
    deformed = deform_rep(base, theta_from_q(Q03))
    target = build_fock_rep(2, 2, 4, 4, Q03, "A")
    rep_dev = max(abs(x.mat - y.mat).max() for x, y in zip(deformed.S + deformed.T, target.S + target.T))
    crossed = max(crossed_untwist_check(2, 2, Q03, 4, 4).values())
    ok = phases_ok and double == 0.0 and rep_dev < DEFORM_TOL and crossed < DEFORM_TOL
    verdict(
        "8", "Rieffel suite", ok,
        f"phases exact: {phases_ok}, double deformation {double:.1e} (exact), "
        f"deformed rep {rep_dev:.2e} (< 1e-13), crossed untwist {crossed:.2e} (< 1e-13)",
    )


def test_criterion_9_wick():
    norm_dev = braid = 0.0
    for (n, m), q0 in itertools.product([(1, 1), (2, 2)], [0.5, Q03]):
        Top = wick_T(n, m, q0)
        norm_dev = max(norm_dev, abs(operator_norm(Top) - abs(q0)))
        braid = max(braid, braid_residual(Top, "standard"))
    ok = norm_dev < WICK_TOL and braid < WICK_TOL
    verdict("9", "Wick operator", ok, f"| ||T|| - |q| | {norm_dev:.2e}, braid {braid:.2e} (both < 1e-12)")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
