"""Cuntz quotients of the twisted Toeplitz algebra: canonical forms, matrix blocks, witnesses, ideals.

Imposing ``sum_j s_j s_j^* = 1`` (and/or ``sum_r t_r t_r^* = 1``) makes
monomials of different lengths comparable.  Inside one graded component every
normal monomial ``s_mu t_mu' t_nu'^* s_nu^*`` is rewritten at a common
profile by inserting ``1 = sum s_delta t_eps t_eps^* s_delta^*`` between its
creation and annihilation halves.  At a fixed profile the monomials are
linearly independent, so equality in the quotient is a coefficient comparison.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .coeff import ConfigError, DomainError, Mode, PhaseCoeff
from .symalg import (
    IDENTITY,
    S,
    T,
    AlgebraConfig,
    Element,
    Letter,
    ModeError,
    Monomial,
    RawLetter,
    adjoint,
    expectation_gauge,
    gauge_components,
    normal_order,
)

__all__ = [
    "Profile",
    "QuotientElement",
    "MatrixBlock",
    "raise_profile",
    "canonical_form",
    "quotient_equal",
    "quotient_norm_bound",
    "to_matrix",
    "from_matrix",
    "level_words",
    "implementing_isometry",
    "pure_infinite_witness",
    "WitnessResult",
    "matrix_unit",
    "matrix_units_toeplitz",
    "commutation_phase_residual",
    "random_level_element",
    "ideal_membership",
]

NUMERIC_TOL = 1e-10


@dataclass(frozen=True, order=True)
class Profile:
    """Lengths ``(|mu|, |mu'|, |nu'|, |nu|)`` of ``s_mu t_mu' t_nu'^* s_nu^*``."""

    a: int
    b: int
    c: int
    d: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def degree(self) -> tuple[int, int]:
        return (self.a - self.d, self.b - self.c)


def _require_unimodular(cfg: AlgebraConfig):
    if not cfg.unimodular:
        raise ModeError("Cuntz quotients are defined for the unimodular (|q| = 1) algebras")


def level_words(d: int, k: int) -> list[tuple[Letter, ...]]:
    return [tuple(w) for w in itertools.product(range(1, d + 1), repeat=k)]


@functools.lru_cache(maxsize=256)
def _insertion(config: AlgebraConfig, ds: int, dt: int) -> Element:
    """``sum_{|delta|=ds, |eps|=dt} s_delta t_eps t_eps^* s_delta^*``."""
    terms = {}
    one = config.one_coeff()
    for delta in itertools.product(range(1, config.n + 1), repeat=ds):
        for eps in itertools.product(range(1, config.m + 1), repeat=dt):
            word = tuple(Letter(S, i) for i in delta) + tuple(Letter(T, j) for j in eps)
            terms[Monomial(word, word)] = one
    return Element(config, terms, _clean=True)


def _split(mono: Monomial, config: AlgebraConfig) -> tuple[Element, Element]:
    one = config.one_coeff()
    left = Element(config, {Monomial(mono.creation, ()): one}, _clean=True)
    right = Element(config, {Monomial((), mono.annihilation): one}, _clean=True)
    return left, right


def raise_profile(x: Element, target, which: str = "both") -> Element:
    """Rewrite ``x`` at ``target`` using the range-sum relation(s) named by ``which``.

    ``which`` is ``"both"`` (insert ``s_delta t_eps t_eps^* s_delta^*``),
    ``"S"`` (insert ``s_delta s_delta^*`` only) or ``"T"`` (``t_eps t_eps^*`` only).
    With ``"S"`` only the S-lengths of ``target`` are used, and vice versa.
    """
    cfg = x.config
    _require_unimodular(cfg)
    A, B, C, D = target.as_tuple() if isinstance(target, Profile) else tuple(target)
    out = Element.zero(cfg)
    for mono, coeff in x.items():
        a, b, c, d = mono.profile()
        ds = A - a if which in ("both", "S") else 0
        dt = B - b if which in ("both", "T") else 0
        if which in ("both", "S") and (ds < 0 or D - d != ds):
            raise ValueError(f"profile {(a, b, c, d)} cannot be raised to S-lengths {(A, D)}")
        if which in ("both", "T") and (dt < 0 or C - c != dt):
            raise ValueError(f"profile {(a, b, c, d)} cannot be raised to T-lengths {(B, C)}")
        mono_el = Element(cfg, {mono: coeff}, _clean=True)
        if ds == 0 and dt == 0:
            out = out + mono_el
            continue
        left, right = _split(mono, cfg)
        out = out + (left * _insertion(cfg, ds, dt) * right).scale(coeff)
    return out


def _component_target(comp: Element, p: tuple[int, int], which: str) -> tuple[int, int, int, int]:
    prof = np.array([m.profile() for m in comp.monomials()])
    A = int(prof[:, 0].max())
    Bt = int(prof[:, 1].max())
    if which == "S":
        return (A, 0, 0, A - p[0])
    if which == "T":
        return (0, Bt, Bt - p[1], 0)
    return (A, Bt, Bt - p[1], A - p[0])


def canonical_form(x: Element, which: str = "both") -> dict:
    """Graded components of ``x`` each raised to its componentwise-maximal profile."""
    _require_unimodular(x.config)
    out = {}
    for p, comp in gauge_components(x).items():
        target = _component_target(comp, p, which)
        raised = raise_profile(comp, target, which)
        if not raised.is_zero():
            out[p] = raised
    return out


class QuotientElement:
    """An Element read in the Cuntz quotient, stored in canonical form."""

    def __init__(self, x: Element, which: str = "both"):
        self.which = which
        self.components = canonical_form(x, which)
        self.config = x.config

    @property
    def element(self) -> Element:
        out = Element.zero(self.config)
        for comp in self.components.values():
            out = out + comp
        return out

    def is_zero(self, tol: float | None = None) -> bool:
        if not self.components:
            return True
        if self.config.numeric:
            tol = NUMERIC_TOL if tol is None else tol
            return all(abs(c) <= tol for comp in self.components.values() for _, c in comp.items())
        return False

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return quotient_equal(self.element, other.element, which=self.which)


def quotient_equal(x: Element, y: Element, which: str = "both", tol: float | None = None) -> bool:
    """Decide ``x == y`` in the quotient (exact, or to ``tol`` on coefficients for numeric configs)."""
    if x.config != y.config:
        raise ConfigError("Elements from different configurations")
    return QuotientElement(x - y, which).is_zero(tol)


# ----------------------------------------------------------------------------
# matrix blocks


@dataclass
class MatrixBlock:
    level: tuple[int, int]
    matrix: np.ndarray
    rows: list


def _pair_words(cfg: AlgebraConfig, k: int, l: int) -> list[tuple]:
    return [
        (tuple(Letter(S, i) for i in mu), tuple(Letter(T, j) for j in mup))
        for mu in itertools.product(range(1, cfg.n + 1), repeat=k)
        for mup in itertools.product(range(1, cfg.m + 1), repeat=l)
    ]


def to_matrix(x: Element, k: int, l: int) -> MatrixBlock:
    """Matrix of a degree-(0, 0) element at level ``(k, l)``; entry ``[(mu,mu'),(nu,nu')]`` is the coefficient of ``s_mu t_mu' t_nu'^* s_nu^*``."""
    cfg = x.config
    if any(m.degree() != (0, 0) for m in x.monomials()):
        raise ValueError("to_matrix needs a balanced (degree (0, 0)) element")
    raised = raise_profile(x, (k, l, l, k))
    rows = _pair_words(cfg, k, l)
    index = {w: i for i, w in enumerate(rows)}
    size = len(rows)
    if cfg.numeric:
        M = np.zeros((size, size), dtype=complex)
    else:
        M = np.empty((size, size), dtype=object)
        M.fill(PhaseCoeff.zero(cfg.vars))
    for mono, c in raised.items():
        cr = mono.creation
        an = mono.annihilation
        r = index[(cr[:k], cr[k:])]
        col = index[(an[:k], an[k:])]
        M[r, col] = c
    return MatrixBlock((k, l), M, rows)


def from_matrix(M, k: int, l: int, config: AlgebraConfig) -> Element:
    if isinstance(M, MatrixBlock):
        M = M.matrix
    rows = _pair_words(config, k, l)
    terms = {}
    for r, (mu, mup) in enumerate(rows):
        for col, (nu, nup) in enumerate(rows):
            c = M[r, col]
            if isinstance(c, PhaseCoeff):
                if c.is_zero():
                    continue
            elif c == 0:
                continue
            terms[Monomial(mu + mup, nu + nup)] = c
    return Element(config, terms)


def quotient_norm_bound(x: Element) -> float:
    """Upper bound for the C*-norm of ``x`` in the quotient (numeric configs).

    The balanced component is measured exactly by the spectral norm of its
    matrix block; other components contribute the sum of absolute coefficients.
    """
    cfg = x.config
    if not cfg.numeric:
        raise ConfigError("norm bound needs a numeric config")
    total = 0.0
    for p, comp in canonical_form(x).items():
        if p == (0, 0):
            A, B, _, _ = comp.max_degree_lengths()
            M = to_matrix(comp, A, B).matrix
            total += float(np.linalg.norm(M, 2))
        else:
            total += comp.coeff_norm1()
    return total


# ----------------------------------------------------------------------------
# implementing isometry and the pure-infiniteness witness


def implementing_isometry(config: AlgebraConfig, k: int, l: int) -> Element:
    """``w = sum_{|delta|=k, |eps|=l} s_delta t_eps s_gamma t_eps^* s_delta^*`` with ``s_gamma = s_1^{2k} s_2 t_1^{2l} t_2``."""
    _require_unimodular(config)
    if config.n < 2 or config.m < 2:
        raise ValueError("the implementing isometry needs n, m >= 2")
    gamma = [RawLetter(S, 1)] * (2 * k) + [RawLetter(S, 2)] + [RawLetter(T, 1)] * (2 * l) + [RawLetter(T, 2)]
    items = []
    for delta in itertools.product(range(1, config.n + 1), repeat=k):
        for eps in itertools.product(range(1, config.m + 1), repeat=l):
            word = [RawLetter(S, i) for i in delta] + [RawLetter(T, j) for j in eps] + gamma
            word += [RawLetter(T, j, True) for j in reversed(eps)] + [RawLetter(S, i, True) for i in reversed(delta)]
            items.append((1, word))
    return normal_order(items, config)


@dataclass
class WitnessResult:
    a: Element
    b: Element
    residual: float
    eigenvalue: float
    level: int


def _householder_to_e0(xi: np.ndarray) -> np.ndarray:
    """Unitary ``u`` with ``u @ xi = e_0`` for a unit vector ``xi``."""
    size = len(xi)
    e0 = np.zeros(size, dtype=complex)
    e0[0] = 1.0
    theta = np.angle(xi[0]) if abs(xi[0]) > 0 else 0.0
    v = xi - np.exp(1j * theta) * e0
    nv = np.linalg.norm(v)
    if nv < 1e-15:
        H = np.eye(size, dtype=complex)
    else:
        v = v / nv
        H = np.eye(size, dtype=complex) - 2.0 * np.outer(v, v.conj())
    return np.exp(-1j * theta) * H


def pure_infinite_witness(x: Element, q0=None) -> WitnessResult:
    """Elements ``a, b`` with ``a x b = 1`` in the Cuntz quotient, for nonzero ``x``.

    Exact-input variant: ``y = x^* x`` already lies in the algebraic span, so
    the approximation step of the analytic argument is not needed.
    """
    cfg = x.config
    if not cfg.numeric:
        if q0 is None:
            raise ConfigError("an exact element needs a numeric q0 for the witness")
        x = x.specialize(q0)
        cfg = x.config
    _require_unimodular(cfg)
    if QuotientElement(x).is_zero():
        raise DomainError("x is zero in the quotient; no witness exists")
    y = adjoint(x) * x
    r = max(max(m.profile()) for m in y.monomials())
    r = max(r, 1)
    phi_y = expectation_gauge(y, "phi")
    H = to_matrix(phi_y, r, r).matrix
    H = 0.5 * (H + H.conj().T)
    evals, evecs = np.linalg.eigh(H)
    lam = float(evals[-1])
    assert lam > 0, "the expectation of x^* x must be nonzero for nonzero x"
    xi = evecs[:, -1]
    u = _householder_to_e0(xi)
    ue = np.outer(u @ xi, xi.conj())
    ue_el = from_matrix(ue, r, r, cfg)
    w = implementing_isometry(cfg, r, r)
    lead = Element.one(cfg)
    for _ in range(r):
        lead = lead * Element.t(cfg, 1, starred=True)
    for _ in range(r):
        lead = lead * Element.s(cfg, 1, starred=True)
    z = ((lead * ue_el) * adjoint(w)).scale(lam ** -0.5)
    b = adjoint(z)
    a = z * adjoint(x)
    axb = (z * y) * b
    residual = quotient_norm_bound(axb - Element.one(cfg))
    return WitnessResult(a, b, residual, lam, r)


# ----------------------------------------------------------------------------
# matrix units in the Toeplitz algebra and ideal membership


def matrix_unit(config: AlgebraConfig, kind: str, mu: tuple, nu: tuple) -> Element:
    """``s_mu (1 - Q) s_nu^*`` for kind ``"S"``; ``t_mu (1 - P) t_nu^*`` for kind ``"T"``."""
    fam = S if kind == "S" else T
    if kind not in ("S", "T"):
        raise ValueError("kind must be 'S' or 'T'")
    proj = Element.Q(config) if fam == S else Element.P(config)
    one = config.one_coeff()
    left = Element(config, {Monomial(tuple(Letter(fam, i) for i in mu), ()): one}, _clean=True)
    right = Element(config, {Monomial((), tuple(Letter(fam, i) for i in nu)): one}, _clean=True)
    return left * (Element.one(config) - proj) * right


def matrix_units_toeplitz(config: AlgebraConfig, kind: str, max_len: int) -> dict:
    d = config.n if kind == "S" else config.m
    idx = [w for k in range(max_len + 1) for w in itertools.product(range(1, d + 1), repeat=k)]
    return {(mu, nu): matrix_unit(config, kind, mu, nu) for mu in idx for nu in idx}


def commutation_phase_residual(config: AlgebraConfig, max_len: int, sign: str = "derived") -> tuple[int, list]:
    """Compare ``t_mu2 t_nu2^* E_{mu1 nu1}`` with ``phase * E_{mu1 nu1} t_mu2 t_nu2^*`` exactly.

    ``sign="derived"`` uses ``q^{(|mu1|-|nu1|)(|mu2|-|nu2|)}``; ``sign="printed"``
    uses the opposite exponent ``q^{(|nu1|-|mu1|)(|mu2|-|nu2|)}``.  Returns the
    number of index tuples checked and the list of tuples where the identity fails.
    """
    if config.vars.mode is not Mode.SINGLE_UNIMODULAR or config.numeric:
        raise ModeError("phase check runs in the exact single-parameter unimodular mode")
    sw = [w for k in range(max_len + 1) for w in itertools.product(range(1, config.n + 1), repeat=k)]
    tw = [w for k in range(max_len + 1) for w in itertools.product(range(1, config.m + 1), repeat=k)]
    one = config.one_coeff()
    failures = []
    count = 0
    tt_cache = {}
    for mu2 in tw:
        for nu2 in tw:
            mono = Monomial(tuple(Letter(T, j) for j in mu2), tuple(Letter(T, j) for j in nu2))
            tt_cache[(mu2, nu2)] = Element(config, {mono: one}, _clean=True)
    for mu1 in sw:
        for nu1 in sw:
            E = matrix_unit(config, "S", mu1, nu1)
            for (mu2, nu2), tt in tt_cache.items():
                k = (len(mu1) - len(nu1)) * (len(mu2) - len(nu2))
                if sign == "printed":
                    k = -k
                lhs = tt * E
                rhs = (E * tt).scale(PhaseCoeff.q(config.vars, k))
                count += 1
                if lhs != rhs:
                    failures.append((mu1, nu1, mu2, nu2))
    return count, failures


def ideal_membership(x: Element, q0=None, tol: float | None = None) -> dict[str, bool]:
    """Membership flags for the four ideals generated by (1-Q)(1-P), 1-Q, 1-P and {1-Q, 1-P}.

    ``in_I1``: zero once ``sum s s^* = 1`` is imposed; ``in_I2``: once
    ``sum t t^* = 1``; ``in_Mq``: once both; ``in_Iq = in_I1 and in_I2``.
    """
    if q0 is not None and not x.config.numeric:
        x = x.specialize(q0)
    _require_unimodular(x.config)
    in_I1 = QuotientElement(x, "S").is_zero(tol)
    in_I2 = QuotientElement(x, "T").is_zero(tol)
    in_Mq = QuotientElement(x, "both").is_zero(tol)
    return {"in_Iq": in_I1 and in_I2, "in_I1": in_I1, "in_I2": in_I2, "in_Mq": in_Mq}


def random_level_element(config: AlgebraConfig, k: int, l: int, rng: np.random.Generator) -> Element:
    """Random nonzero element of the level-(k, l) block, mixing in lower levels.

    Every balanced monomial with S-lengths <= k and T-lengths <= l is kept
    with probability 1/2 and given a standard complex Gaussian coefficient.
    """
    monos = []
    for a in range(k + 1):
        for b in range(l + 1):
            for mu, mup in _pair_words(config, a, b):
                for nu, nup in _pair_words(config, a, b):
                    monos.append(Monomial(mu + mup, nu + nup))
    while True:
        keep = rng.random(len(monos)) < 0.5
        coeffs = rng.normal(size=len(monos)) + 1j * rng.normal(size=len(monos))
        terms = {mono: complex(c) for mono, c, flag in zip(monos, coeffs, keep) if flag}
        x = Element(config, terms)
        if not QuotientElement(x).is_zero():
            return x
