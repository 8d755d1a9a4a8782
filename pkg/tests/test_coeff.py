import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcuntz.coeff import (
    ConfigError,
    DeformVars,
    DomainError,
    GaussRational,
    PhaseCoeff,
    coeff_mul,
    coeff_specialize,
    phase_turns,
)

GENERIC = DeformVars.generic()
UNI = DeformVars.unimodular()
MULTI = DeformVars.multi(2, 2)
ALL_VARS = [GENERIC, UNI, MULTI]

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
gauss = st.builds(GaussRational, small, small)


def exps_for(vars):
    if vars is GENERIC:
        return st.tuples(st.integers(0, 3), st.integers(0, 3))
    return st.tuples(*[st.integers(-3, 3)] * vars.nvars)


def coeffs(vars):
    return st.dictionaries(exps_for(vars), gauss, max_size=3).map(lambda d: PhaseCoeff(vars, d))


def points(vars):
    """Numeric points where specialization is defined."""
    angle = st.floats(0, 1, allow_nan=False)
    if vars is GENERIC:
        return st.builds(lambda r, a: r * cmath.exp(2j * cmath.pi * a), st.floats(0, 1.5), angle)
    if vars is UNI:
        return angle.map(lambda a: cmath.exp(2j * cmath.pi * a))
    return st.lists(angle, min_size=4, max_size=4).map(
        lambda a: [[cmath.exp(2j * cmath.pi * a[0]), cmath.exp(2j * cmath.pi * a[1])],
                   [cmath.exp(2j * cmath.pi * a[2]), cmath.exp(2j * cmath.pi * a[3])]]
    )


@pytest.mark.parametrize("vars", ALL_VARS, ids=lambda v: v.mode.value)
@given(data=st.data())
def test_ring_axioms(vars, data):
    a, b, c = (data.draw(coeffs(vars)) for _ in range(3))
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + PhaseCoeff.zero(vars) == a
    assert a * PhaseCoeff.one(vars) == a
    assert a - a == PhaseCoeff.zero(vars)


@pytest.mark.parametrize("vars", ALL_VARS, ids=lambda v: v.mode.value)
@given(data=st.data())
def test_conjugation_is_antimultiplicative_involution(vars, data):
    a, b = data.draw(coeffs(vars)), data.draw(coeffs(vars))
    assert a.conj().conj() == a
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()


@pytest.mark.parametrize("vars", ALL_VARS, ids=lambda v: v.mode.value)
@given(data=st.data())
def test_specialization_is_a_ring_homomorphism(vars, data):
    a, b = data.draw(coeffs(vars)), data.draw(coeffs(vars))
    pt = data.draw(points(vars))
    va, vb = coeff_specialize(a, pt), coeff_specialize(b, pt)
    assert abs(coeff_specialize(a * b, pt) - va * vb) < 1e-9
    assert abs(coeff_specialize(a + b, pt) - (va + vb)) < 1e-9
    assert abs(coeff_specialize(a.conj(), pt) - va.conjugate()) < 1e-9


@pytest.mark.parametrize("vars", ALL_VARS, ids=lambda v: v.mode.value)
@given(data=st.data())
def test_json_roundtrip(vars, data):
    a = data.draw(coeffs(vars))
    back = PhaseCoeff.from_json(vars, json.loads(json.dumps(a.to_json())))
    assert back == a
    assert hash(back) == hash(a)


def test_q_times_conjugate_is_one_when_unimodular():
    assert PhaseCoeff.q(UNI) * PhaseCoeff.qc(UNI) == PhaseCoeff.one(UNI)


def test_q_times_conjugate_stays_a_monomial_in_generic_mode():
    prod = PhaseCoeff.q(GENERIC) * PhaseCoeff.qc(GENERIC)
    assert prod == PhaseCoeff.monomial(GENERIC, (1, 1))
    assert prod != PhaseCoeff.one(GENERIC)


def test_multiparameter_exponents_cancel():
    a = PhaseCoeff.qij(MULTI, 1, 2) * PhaseCoeff.scalar(MULTI, GaussRational(Fraction(1, 2), Fraction(1, 2)))
    b = PhaseCoeff.qij(MULTI, 1, 2, -1) * PhaseCoeff.scalar(MULTI, 2)
    assert a * b == PhaseCoeff.scalar(MULTI, GaussRational(1, 1))


def test_specialize_q_on_circle():
    q0 = cmath.exp(2j * cmath.pi * 0.3)
    assert coeff_specialize(PhaseCoeff.q(UNI), q0) == pytest.approx(q0, abs=1e-15)


def test_specialize_generic_q_qc():
    prod = PhaseCoeff.q(GENERIC) * PhaseCoeff.qc(GENERIC)
    assert coeff_specialize(prod, 0.5) == pytest.approx(0.25)


@pytest.mark.parametrize("a, b", [(UNI, GENERIC), (UNI, MULTI), (GENERIC, MULTI)])
def test_mixed_modes_are_rejected(a, b):
    with pytest.raises(ConfigError):
        coeff_mul(PhaseCoeff.one(a), PhaseCoeff.one(b))


@pytest.mark.parametrize("vars, value", [(UNI, 0.5), (UNI, 1.01j), (MULTI, [[1, 1], [1, 0.9]])])
def test_off_circle_values_are_rejected(vars, value):
    with pytest.raises(DomainError):
        coeff_specialize(PhaseCoeff.one(vars), value)


def test_generic_mode_has_no_inverse_of_q():
    with pytest.raises(ZeroDivisionError):
        PhaseCoeff.q(GENERIC).inverse()
    with pytest.raises(ConfigError):
        PhaseCoeff.q(GENERIC, -1)


def test_floats_are_not_exact_scalars():
    with pytest.raises(TypeError):
        PhaseCoeff.scalar(UNI, 0.5)


@pytest.mark.parametrize("turns", [0.0, 0.3, 0.75, 0.999])
def test_phase_turns_inverts_exponential(turns):
    assert phase_turns(cmath.exp(2j * cmath.pi * turns)) == pytest.approx(turns, abs=1e-12)


def test_rendering():
    assert PhaseCoeff.q(UNI, 2).text() == "(1+0i)*q^2"
    assert PhaseCoeff.qij(MULTI, 2, 1).text() == "(1+0i)*q[2,1]"
    assert PhaseCoeff.zero(UNI).text() == "0"
