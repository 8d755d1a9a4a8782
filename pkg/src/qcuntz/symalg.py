"""Free *-algebra on the isometries s_1..s_n, t_1..t_m with a normal-ordering rewrite system.

Words are rewritten until no starred letter stands left of an unstarred one
(and, in unimodular modes, until each block is S-letters first).  Every rule
maps a pair of adjacent letters to at most one pair times a phase, so a word
normal-orders to a single monomial times a deformation monomial, or to zero.

Rule table (``q_ij`` is the multiparameter symbol, ``qc_ij`` its conjugate)::

    R1  S_i* S_j -> delta_ij          R2  T_r* T_l -> delta_rl
    R3  S_i* T_j -> qc_ij T_j S_i*    R4  T_j* S_i -> q_ij S_i T_j*
    R5  T_j  S_i -> qc_ij S_i T_j     R6  S_i* T_j* -> q_ij T_j* S_i*   (unimodular only)

The single-parameter algebras use the dictionary ``q_ij := qc``.
"""
from __future__ import annotations

import functools
import json
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

from .coeff import (
    ConfigError,
    DeformVars,
    GaussRational,
    Mode,
    PhaseCoeff,
    monomial_value,
    variable_values,
)

__all__ = [
    "S",
    "T",
    "ModeError",
    "Letter",
    "RawLetter",
    "Monomial",
    "AlgebraConfig",
    "Element",
    "normal_order",
    "normal_order_word",
    "apply_rule",
    "multiply",
    "adjoint",
    "gauge_component",
    "apply_aut",
    "expectation_gauge",
    "Alpha",
    "Beta",
    "Rho",
    "Gauge",
]

S, T = 0, 1
_FAMILY_NAME = {S: "s", T: "t"}

NUMERIC_DROP = 1e-13


class ModeError(ConfigError):
    """A rewrite rule or symbol is not available in the configured mode."""


class Letter(NamedTuple):
    family: int
    index: int

    def __str__(self):
        return f"{_FAMILY_NAME[self.family]}{self.index}"


class RawLetter(NamedTuple):
    family: int
    index: int
    starred: bool = False

    def __str__(self):
        return f"{_FAMILY_NAME[self.family]}{self.index}" + ("'" if self.starred else "")

    @property
    def star(self) -> "RawLetter":
        return RawLetter(self.family, self.index, not self.starred)


def s(i: int, starred: bool = False) -> RawLetter:
    return RawLetter(S, i, starred)


def t(i: int, starred: bool = False) -> RawLetter:
    return RawLetter(T, i, starred)


class Monomial(NamedTuple):
    """``creation`` word followed by the adjoint of the ``annihilation`` word."""

    creation: tuple = ()
    annihilation: tuple = ()

    def raw(self) -> list:
        out = [RawLetter(f, i, False) for f, i in self.creation]
        out.extend(RawLetter(f, i, True) for f, i in reversed(self.annihilation))
        return out

    def swap(self) -> "Monomial":
        return Monomial(self.annihilation, self.creation)

    @property
    def length(self) -> int:
        return len(self.creation) + len(self.annihilation)

    def degree(self) -> tuple[int, int]:
        c = [0, 0]
        for f, _ in self.creation:
            c[f] += 1
        for f, _ in self.annihilation:
            c[f] -= 1
        return c[0], c[1]

    def profile(self) -> tuple[int, int, int, int]:
        """Lengths (|mu|, |mu'|, |nu'|, |nu|) of an S-first normal monomial."""
        a = sum(1 for f, _ in self.creation if f == S)
        b = len(self.creation) - a
        d = sum(1 for f, _ in self.annihilation if f == S)
        c = len(self.annihilation) - d
        return a, b, c, d

    def sort_key(self):
        return (self.length, self.creation, self.annihilation)

    def text(self) -> str:
        parts = [str(x) for x in self.raw()]
        return "*".join(parts) if parts else "1"

    def __str__(self):
        return self.text()


IDENTITY = Monomial((), ())


@dataclass(frozen=True)
class AlgebraConfig:
    """Generator counts, deformation variables and an optional numeric specialization.

    When ``values`` is set the Elements of this config carry complex
    coefficients; ``values`` then holds the numeric value of every variable slot.
    """

    n: int
    m: int
    vars: DeformVars
    values: tuple | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ConfigError("need n, m >= 1")
        if self.vars.mode is Mode.MULTI_UNIMODULAR and (self.vars.n, self.vars.m) != (self.n, self.m):
            raise ConfigError("multiparameter variables must match (n, m)")

    @classmethod
    def single(cls, n: int, m: int, unimodular: bool = True) -> "AlgebraConfig":
        return cls(n, m, DeformVars.unimodular() if unimodular else DeformVars.generic())

    @classmethod
    def generic(cls, n: int, m: int) -> "AlgebraConfig":
        return cls(n, m, DeformVars.generic())

    @classmethod
    def multi(cls, n: int, m: int) -> "AlgebraConfig":
        return cls(n, m, DeformVars.multi(n, m))

    @property
    def unimodular(self) -> bool:
        return self.vars.unimodular_mode

    @property
    def numeric(self) -> bool:
        return self.values is not None

    def specialized(self, assignment) -> "AlgebraConfig":
        return replace(self, values=tuple(variable_values(self.vars, assignment)))

    def exact(self) -> "AlgebraConfig":
        return replace(self, values=None)

    def q_value(self) -> complex:
        if not self.numeric:
            raise ConfigError("config is not numeric")
        return self.values[0]

    # coefficient plumbing
    def one_coeff(self):
        return 1.0 + 0j if self.numeric else PhaseCoeff.one(self.vars)

    def coerce(self, c):
        if self.numeric:
            if isinstance(c, PhaseCoeff):
                return _phase_numeric(self.vars, self.values, c)
            if isinstance(c, GaussRational):
                return complex(c)
            return complex(c)
        if isinstance(c, PhaseCoeff):
            if c.vars != self.vars:
                raise ConfigError("coefficient mode mismatch")
            return c
        return PhaseCoeff.scalar(self.vars, GaussRational.coerce(c))

    def phase(self, exps: tuple):
        if self.numeric:
            return _monomial_numeric(self.vars, self.values, exps)
        return PhaseCoeff.monomial(self.vars, exps)

    def is_zero(self, c) -> bool:
        if self.numeric:
            return abs(c) <= NUMERIC_DROP
        return c.is_zero()

    def check_letter(self, family: int, index: int):
        bound = self.n if family == S else self.m
        if not (1 <= index <= bound):
            raise ConfigError(f"{_FAMILY_NAME[family]}{index} out of range (1..{bound})")

    def to_json(self) -> dict:
        d = {"n": self.n, "m": self.m, "vars": self.vars.to_json()}
        if self.numeric:
            d["values"] = [[v.real, v.imag] for v in self.values]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "AlgebraConfig":
        vals = d.get("values")
        return cls(
            int(d["n"]),
            int(d["m"]),
            DeformVars.from_json(d["vars"]),
            None if vals is None else tuple(complex(a, b) for a, b in vals),
        )


@functools.lru_cache(maxsize=1 << 16)
def _monomial_numeric(vars: DeformVars, values: tuple, exps: tuple) -> complex:
    return monomial_value(vars, list(values), exps)


def _phase_numeric(vars: DeformVars, values: tuple, c: PhaseCoeff) -> complex:
    return sum((complex(g) * _monomial_numeric(vars, values, e) for e, g in c.items()), 0j)


# ----------------------------------------------------------------------------
# rewrite engine

R1, R2, R3, R4, R5, R6 = "R1", "R2", "R3", "R4", "R5", "R6"
_UNIMODULAR_ONLY = (R5, R6)


def _rule_for(x, y, unimodular: bool):
    xf, xs = x[0], x[2]
    yf, ys = y[0], y[2]
    if xs and not ys:
        if xf == yf:
            return R1 if xf == S else R2
        return R3 if xf == S else R4
    if unimodular:
        if not xs and not ys and xf == T and yf == S:
            return R5
        if xs and ys and xf == S and yf == T:
            return R6
    return None


def _phase_delta(vars: DeformVars, rule: str, i: int, j: int) -> tuple[int, int]:
    """(slot, exponent change) for the phase produced by rule on S-index i, T-index j.

    R3 and R5 produce ``qc_ij``, R4 and R6 produce ``q_ij``.
    """
    conj = rule in (R3, R5)
    mode = vars.mode
    if mode is Mode.MULTI_UNIMODULAR:
        return vars.var_index(i, j), (-1 if conj else 1)
    if mode is Mode.SINGLE_UNIMODULAR:
        # q_ij = qc = q^-1 and qc_ij = q
        return 0, (1 if conj else -1)
    # generic: qc_ij = q sits in slot 0, q_ij = qc in slot 1
    return (0 if conj else 1), 1


def _apply_at(word: list, pos: int, rule: str, vars: DeformVars, exps: list) -> bool:
    """Rewrite word[pos:pos+2] in place.  Returns False when the word became zero."""
    x, y = word[pos], word[pos + 1]
    if rule in (R1, R2):
        if x[1] != y[1]:
            return False
        del word[pos:pos + 2]
        return True
    if rule in (R3, R6):
        i, j = x[1], y[1]
    else:
        i, j = y[1], x[1]
    slot, k = _phase_delta(vars, rule, i, j)
    exps[slot] += k
    word[pos], word[pos + 1] = y, x
    return True


def apply_rule(word: Sequence[RawLetter], pos: int, rule: str, config: AlgebraConfig):
    """Apply a single named rule at ``pos``; returns ``(phase, new_word)`` or ``None`` for zero.

    Raises :class:`ModeError` when R5/R6 are requested outside the unimodular
    modes, and ``ValueError`` when the rule does not match the letters at ``pos``.
    """
    if rule in _UNIMODULAR_ONLY and not config.unimodular:
        raise ModeError(f"{rule} only holds when |q| = 1; refused in generic mode")
    w = [RawLetter(*x) for x in word]
    if not 0 <= pos < len(w) - 1:
        raise ValueError("position out of range")
    found = _rule_for(w[pos], w[pos + 1], True)
    if found != rule:
        raise ValueError(f"{rule} does not match {w[pos]} {w[pos + 1]}")
    exps = list(config.vars.zero_exps())
    if not _apply_at(w, pos, rule, config.vars, exps):
        return None
    return config.phase(tuple(exps)), w


def _finish(word: list, exps: list):
    k = 0
    while k < len(word) and not word[k][2]:
        k += 1
    creation = tuple(Letter(f, i) for f, i, _ in word[:k])
    annihilation = tuple(Letter(f, i) for f, i, _ in reversed(word[k:]))
    return tuple(exps), Monomial(creation, annihilation)


def normal_order_word(
    word: Sequence,
    vars: DeformVars,
    strategy: str = "leftmost",
    rng: random.Random | None = None,
    start: int = 0,
    stats: dict | None = None,
):
    """Normal-order one raw word.

    Returns ``(exponent_vector, Monomial)`` or ``None`` when the word is zero.
    ``strategy`` is ``"leftmost"`` (deterministic, resumes one step left of the
    last rewrite) or ``"random"`` (picks a uniformly random redex each step).
    """
    unimodular = vars.unimodular_mode
    w = list(word)
    exps = list(vars.zero_exps())
    steps = 0
    if strategy == "leftmost":
        i = max(0, start)
        while i < len(w) - 1:
            rule = _rule_for(w[i], w[i + 1], unimodular)
            if rule is None:
                i += 1
                continue
            steps += 1
            if not _apply_at(w, i, rule, vars, exps):
                if stats is not None:
                    stats["steps"] = steps
                return None
            i = max(i - 1, 0)
    elif strategy == "random":
        rng = rng or random.Random()
        while True:
            redexes = [
                (i, r)
                for i in range(len(w) - 1)
                if (r := _rule_for(w[i], w[i + 1], unimodular)) is not None
            ]
            if not redexes:
                break
            i, rule = rng.choice(redexes)
            steps += 1
            if not _apply_at(w, i, rule, vars, exps):
                if stats is not None:
                    stats["steps"] = steps
                return None
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if stats is not None:
        stats["steps"] = steps
    return _finish(w, exps)


@functools.lru_cache(maxsize=1 << 18)
def _product_cached(vars: DeformVars, a: Monomial, b: Monomial):
    ra = a.raw()
    return normal_order_word(ra + b.raw(), vars, start=len(ra) - 1)


# ----------------------------------------------------------------------------
# Element


class Element:
    """Finite linear combination of normal-form monomials."""

    __slots__ = ("config", "_terms")

    def __init__(self, config: AlgebraConfig, terms: Mapping[Monomial, object] | None = None, *, _clean=False):
        self.config = config
        if _clean:
            self._terms = dict(terms)
            return
        out = {}
        if terms:
            for mono, c in terms.items():
                c = config.coerce(c)
                if mono in out:
                    c = out[mono] + c
                out[mono] = c
        self._terms = {k: v for k, v in out.items() if not config.is_zero(v)}

    # constructors
    @classmethod
    def zero(cls, config: AlgebraConfig) -> "Element":
        return cls(config, {}, _clean=True)

    @classmethod
    def one(cls, config: AlgebraConfig) -> "Element":
        return cls(config, {IDENTITY: config.one_coeff()}, _clean=True)

    @classmethod
    def scalar(cls, config: AlgebraConfig, c) -> "Element":
        return cls(config, {IDENTITY: c})

    @classmethod
    def gen(cls, config: AlgebraConfig, family: int, index: int, starred: bool = False) -> "Element":
        config.check_letter(family, index)
        letter = (Letter(family, index),)
        mono = Monomial((), letter) if starred else Monomial(letter, ())
        return cls(config, {mono: config.one_coeff()}, _clean=True)

    @classmethod
    def s(cls, config, i, starred=False):
        return cls.gen(config, S, i, starred)

    @classmethod
    def t(cls, config, i, starred=False):
        return cls.gen(config, T, i, starred)

    @classmethod
    def word(cls, config: AlgebraConfig, letters: Iterable, coeff=1) -> "Element":
        return normal_order([(coeff, letters)], config)

    @classmethod
    def monomial(cls, config: AlgebraConfig, mono: Monomial, coeff=1) -> "Element":
        return cls(config, {mono: coeff})

    @classmethod
    def Q(cls, config: AlgebraConfig) -> "Element":
        return cls(config, {Monomial((Letter(S, j),), (Letter(S, j),)): 1 for j in range(1, config.n + 1)})

    @classmethod
    def P(cls, config: AlgebraConfig) -> "Element":
        return cls(config, {Monomial((Letter(T, r),), (Letter(T, r),)): 1 for r in range(1, config.m + 1)})

    # access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coefficient(self, mono: Monomial):
        return self._terms.get(mono, 0.0j if self.config.numeric else PhaseCoeff.zero(self.config.vars))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "Element"):
        if other.config != self.config:
            raise ConfigError("Elements from different configurations")

    # arithmetic
    def _lift(self, other):
        if isinstance(other, Element):
            self._check(other)
            return other
        return Element.scalar(self.config, other)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ConfigError):
            return NotImplemented
        out = dict(self._terms)
        for k, v in o._terms.items():
            out[k] = out[k] + v if k in out else v
        z = self.config.is_zero
        return Element(self.config, {k: v for k, v in out.items() if not z(v)}, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.config, {k: -v for k, v in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ConfigError):
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Element":
        c = self.config.coerce(c)
        z = self.config.is_zero
        out = {}
        for k, v in self._terms.items():
            w = v * c
            if not z(w):
                out[k] = w
        return Element(self.config, out, _clean=True)

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = Element.one(self.config)
        for _ in range(k):
            out = out * self
        return out

    @property
    def H(self) -> "Element":
        return adjoint(self)

    def adjoint(self) -> "Element":
        return adjoint(self)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.config == other.config and self._terms == other._terms
        if isinstance(other, (int, float, complex)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.config, frozenset(self._terms.items())))

    # numeric helpers
    def specialize(self, assignment) -> "Element":
        cfg = self.config.specialized(assignment) if not self.config.numeric else self.config
        if self.config.numeric:
            return self
        return Element(cfg, {k: cfg.coerce(v) for k, v in self._terms.items()})

    def coeff_norm1(self) -> float:
        if not self.config.numeric:
            raise ConfigError("coefficient norm needs a numeric config")
        return float(sum(abs(c) for c in self._terms.values()))

    def max_degree_lengths(self) -> tuple[int, int, int, int]:
        prof = [0, 0, 0, 0]
        for mono in self._terms:
            for k, x in enumerate(mono.profile()):
                prof[k] = max(prof[k], x)
        return tuple(prof)

    def max_length(self) -> int:
        return max((m.length for m in self._terms), default=0)

    def degrees(self) -> set:
        return {m.degree() for m in self._terms}

    # serialization
    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_items():
            if self.config.numeric:
                cs = f"({c.real:.15g}{c.imag:+.15g}i)"
            else:
                cs = c.text() if c.is_monomial() else f"({c.text()})"
            parts.append(cs if mono == IDENTITY else f"{cs}*{mono.text()}")
        return " + ".join(parts)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Element({self.text()})"

    def to_json_obj(self) -> dict:
        terms = []
        for mono, c in self.sorted_items():
            entry = {
                "creation": [[f, i] for f, i in mono.creation],
                "annihilation": [[f, i] for f, i in mono.annihilation],
            }
            entry["coeff"] = [c.real, c.imag] if self.config.numeric else c.to_json()
            terms.append(entry)
        return {"config": self.config.to_json(), "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "Element":
        if isinstance(data, str):
            data = json.loads(data)
        cfg = AlgebraConfig.from_json(data["config"])
        terms = {}
        for e in data["terms"]:
            mono = Monomial(
                tuple(Letter(f, i) for f, i in e["creation"]),
                tuple(Letter(f, i) for f, i in e["annihilation"]),
            )
            c = e["coeff"]
            terms[mono] = complex(*c) if cfg.numeric else PhaseCoeff.from_json(cfg.vars, c)
        return cls(cfg, terms)


RawInput = Union[Element, Sequence, Sequence[tuple]]


def _is_raw_letter(x) -> bool:
    return isinstance(x, tuple) and len(x) == 3 and isinstance(x[0], (int, np.integer)) and isinstance(x[2], (bool, np.bool_))


def normal_order(w, config: AlgebraConfig, strategy: str = "leftmost", rng: random.Random | None = None) -> Element:
    """Normal-order a raw word or a linear combination ``[(coeff, word), ...]``."""
    if isinstance(w, Element):
        if w.config != config:
            raise ConfigError("Element belongs to a different configuration")
        return w
    items = w
    if len(w) == 0 or _is_raw_letter(w[0]):
        items = [(1, w)]
    out: dict[Monomial, object] = {}
    for coeff, word in items:
        letters = [RawLetter(*x) for x in word]
        for x in letters:
            config.check_letter(x.family, x.index)
        res = normal_order_word(letters, config.vars, strategy=strategy, rng=rng)
        if res is None:
            continue
        exps, mono = res
        c = config.coerce(coeff) * config.phase(exps)
        out[mono] = out[mono] + c if mono in out else c
    return Element(config, out)


def multiply(a: Element, b: Element) -> Element:
    """Algebra product: concatenate and normal-order each pair of monomials."""
    a._check(b)
    cfg = a.config
    vars = cfg.vars
    out: dict[Monomial, object] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            res = _product_cached(vars, ma, mb)
            if res is None:
                continue
            exps, mono = res
            c = ca * cb
            if any(exps):
                c = c * cfg.phase(exps)
            if mono in out:
                out[mono] = out[mono] + c
            else:
                out[mono] = c
    z = cfg.is_zero
    return Element(cfg, {k: v for k, v in out.items() if not z(v)}, _clean=True)


def adjoint(a: Element) -> Element:
    if a.config.numeric:
        return Element(a.config, {m.swap(): c.conjugate() for m, c in a._terms.items()}, _clean=True)
    return Element(a.config, {m.swap(): c.conj() for m, c in a._terms.items()}, _clean=True)


def gauge_component(a: Element, p: tuple[int, int]) -> Element:
    p = tuple(p)
    return Element(a.config, {m: c for m, c in a._terms.items() if m.degree() == p}, _clean=True)


def gauge_components(a: Element) -> dict:
    out: dict[tuple, dict] = {}
    for m, c in a._terms.items():
        out.setdefault(m.degree(), {})[m] = c
    return {p: Element(a.config, d, _clean=True) for p, d in out.items()}


# ----------------------------------------------------------------------------
# automorphisms and expectations


@dataclass(frozen=True)
class Alpha:
    """Scale every t-letter by q^k (t* by q^-k)."""

    k: int


@dataclass(frozen=True)
class Beta:
    """Scale every s-letter by q^-k (s* by q^k)."""

    k: int


@dataclass(frozen=True)
class Rho:
    """s_i -> zeta s_i, t_j -> xi t_j for unit scalars (complex or single-term PhaseCoeff)."""

    zeta: object
    xi: object


@dataclass(frozen=True)
class Gauge:
    """Torus action at (exp(2 pi i theta1), exp(2 pi i theta2)); numeric configs only."""

    theta1: float
    theta2: float


def _unit_power(c, k: int, cfg: AlgebraConfig):
    if k == 0:
        return cfg.one_coeff()
    if cfg.numeric:
        c = complex(c)
        return c ** k if k > 0 else (1 / c) ** (-k)
    c = cfg.coerce(c)
    return c ** k


def apply_aut(a: Element, aut) -> Element:
    """Apply a gauge-type automorphism; each monomial is an eigenvector."""
    cfg = a.config
    if isinstance(aut, (Alpha, Beta)):
        if cfg.vars.mode is not Mode.SINGLE_UNIMODULAR:
            raise ModeError("alpha/beta families need the single-parameter unimodular mode")
        q = cfg.q_value() if cfg.numeric else PhaseCoeff.q(cfg.vars)
        out = {}
        for m, c in a._terms.items():
            p1, p2 = m.degree()
            k = aut.k * p2 if isinstance(aut, Alpha) else -aut.k * p1
            out[m] = c * _unit_power(q, k, cfg)
        return Element(cfg, out)
    if isinstance(aut, Rho):
        out = {}
        for m, c in a._terms.items():
            p1, p2 = m.degree()
            out[m] = c * _unit_power(aut.zeta, p1, cfg) * _unit_power(aut.xi, p2, cfg)
        return Element(cfg, out)
    if isinstance(aut, Gauge):
        if not cfg.numeric:
            raise ConfigError("the torus action with real angles needs a numeric config")
        z1 = np.exp(2j * np.pi * aut.theta1)
        z2 = np.exp(2j * np.pi * aut.theta2)
        return apply_aut(a, Rho(complex(z1), complex(z2)))
    raise TypeError(f"unknown automorphism aut {aut!r}")


def expectation_gauge(a: Element, which: str = "phi") -> Element:
    """Gauge-averaging expectations: ``phi1`` keeps S-balanced monomials, ``phi2`` T-balanced, ``phi`` both."""
    if which not in ("phi", "phi1", "phi2"):
        raise ValueError(f"unknown expectation {which!r}")
    keep = {}
    for m, c in a._terms.items():
        p1, p2 = m.degree()
        if which == "phi1" and p1 != 0:
            continue
        if which == "phi2" and p2 != 0:
            continue
        if which == "phi" and (p1 or p2):
            continue
        keep[m] = c
    return Element(a.config, keep, _clean=True)


def word_rise(word: Sequence) -> tuple[int, int]:
    """Largest net number of S- and T-creations met while applying ``word`` right to left.

    A product of truncated generator matrices agrees with the untruncated
    operator on every basis vector whose levels leave this much headroom.
    """
    hs = ht = 0
    rs = rt = 0
    for f, _, starred in reversed(list(word)):
        k = -1 if starred else 1
        if f == S:
            hs += k
            rs = max(rs, hs)
        else:
            ht += k
            rt = max(rt, ht)
    return rs, rt


def random_raw_word(rng: random.Random, n: int, m: int, max_len: int, min_len: int = 0) -> list:
    length = rng.randint(min_len, max_len)
    out = []
    for _ in range(length):
        fam = rng.choice((S, T))
        idx = rng.randint(1, n if fam == S else m)
        out.append(RawLetter(fam, idx, rng.random() < 0.5))
    return out
