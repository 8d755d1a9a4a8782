"""Exact coefficient ring: Gaussian rationals times Laurent monomials in deformation variables.

Three variable layouts are supported:

* ``SingleGeneric``: two independent variables ``q`` and ``qc`` (no relation),
  exponent vectors ``(a, b)`` with ``a, b >= 0`` meaning ``q^a qc^b``.
* ``SingleUnimodular``: one variable ``q`` with ``qc = q^-1``; exponent vector ``(k,)``.
* ``MultiUnimodular(n, m)``: variables ``q[i,j]`` with ``qc[i,j] = q[i,j]^-1``;
  exponent vector of length ``n*m`` indexed by ``(i-1)*m + (j-1)``.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "ConfigError",
    "DomainError",
    "Mode",
    "DeformVars",
    "GaussRational",
    "PhaseCoeff",
    "coeff_mul",
    "coeff_specialize",
]

UNIMODULAR_TOL = 1e-12


class ConfigError(ValueError):
    """Objects from incompatible configurations were combined."""


class DomainError(ValueError):
    """A numeric value lies outside the domain required by the mode."""


class Mode(enum.Enum):
    SINGLE_GENERIC = "single-generic"
    SINGLE_UNIMODULAR = "single-unimodular"
    MULTI_UNIMODULAR = "multi-unimodular"


@dataclass(frozen=True)
class DeformVars:
    mode: Mode
    n: int = 0
    m: int = 0

    def __post_init__(self):
        if self.mode is Mode.MULTI_UNIMODULAR:
            if self.n < 1 or self.m < 1:
                raise ConfigError("multiparameter mode needs n, m >= 1")
        elif self.n or self.m:
            raise ConfigError("n, m are only meaningful in multiparameter mode")

    @classmethod
    def generic(cls) -> "DeformVars":
        return cls(Mode.SINGLE_GENERIC)

    @classmethod
    def unimodular(cls) -> "DeformVars":
        return cls(Mode.SINGLE_UNIMODULAR)

    @classmethod
    def multi(cls, n: int, m: int) -> "DeformVars":
        return cls(Mode.MULTI_UNIMODULAR, n, m)

    @property
    def nvars(self) -> int:
        if self.mode is Mode.SINGLE_GENERIC:
            return 2
        if self.mode is Mode.SINGLE_UNIMODULAR:
            return 1
        return self.n * self.m

    @property
    def unimodular_mode(self) -> bool:
        return self.mode is not Mode.SINGLE_GENERIC

    def zero_exps(self) -> tuple[int, ...]:
        return (0,) * self.nvars

    def var_index(self, i: int, j: int) -> int:
        if self.mode is not Mode.MULTI_UNIMODULAR:
            raise ConfigError("q[i,j] only exists in multiparameter mode")
        if not (1 <= i <= self.n and 1 <= j <= self.m):
            raise ConfigError(f"q[{i},{j}] out of range for n={self.n}, m={self.m}")
        return (i - 1) * self.m + (j - 1)

    def to_json(self) -> dict:
        d = {"mode": self.mode.value}
        if self.mode is Mode.MULTI_UNIMODULAR:
            d.update(n=self.n, m=self.m)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "DeformVars":
        mode = Mode(d["mode"])
        if mode is Mode.MULTI_UNIMODULAR:
            return cls(mode, int(d["n"]), int(d["m"]))
        return cls(mode)


class GaussRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, tuple) and len(x) == 2:
            return cls(*x)
        raise TypeError(f"cannot convert {type(x).__name__} to an exact Gaussian rational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRational.coerce(other))

    def __rsub__(self, other):
        return GaussRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussRational.coerce(other)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRational":
        d = self.norm2()
        if d == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussRational(self.re / d, -self.im / d)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def text(self) -> str:
        im = self.im
        sign = "-" if im < 0 else "+"
        return f"({self.re}{sign}{abs(im)}i)"


Scalar = Union[int, Fraction, GaussRational]


class PhaseCoeff:
    """Finite sum of Gaussian rationals times deformation monomials.

    Instances are immutable; ``terms`` maps exponent tuples to nonzero
    :class:`GaussRational` values.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: DeformVars, terms: Mapping[tuple, Scalar] | None = None):
        self.vars = vars
        clean: dict[tuple, GaussRational] = {}
        if terms:
            nv = vars.nvars
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nv:
                    raise ConfigError(f"exponent vector {e} has wrong length for {vars.mode.value}")
                if vars.mode is Mode.SINGLE_GENERIC and min(e) < 0:
                    raise ConfigError("generic mode requires non-negative exponents")
                c = GaussRational.coerce(c)
                if c:
                    acc = clean.get(e)
                    c = c if acc is None else acc + c
                    if c:
                        clean[e] = c
                    else:
                        del clean[e]
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, vars: DeformVars) -> "PhaseCoeff":
        return cls(vars)

    @classmethod
    def one(cls, vars: DeformVars) -> "PhaseCoeff":
        return cls(vars, {vars.zero_exps(): 1})

    @classmethod
    def scalar(cls, vars: DeformVars, c: Scalar) -> "PhaseCoeff":
        return cls(vars, {vars.zero_exps(): c})

    @classmethod
    def monomial(cls, vars: DeformVars, exps: Iterable[int], c: Scalar = 1) -> "PhaseCoeff":
        return cls(vars, {tuple(exps): c})

    @classmethod
    def q(cls, vars: DeformVars, power: int = 1) -> "PhaseCoeff":
        if vars.mode is Mode.MULTI_UNIMODULAR:
            raise ConfigError("single-parameter q used in multiparameter mode")
        if vars.mode is Mode.SINGLE_GENERIC:
            if power < 0:
                raise ConfigError("negative powers of q do not exist in generic mode")
            return cls.monomial(vars, (power, 0))
        return cls.monomial(vars, (power,))

    @classmethod
    def qc(cls, vars: DeformVars, power: int = 1) -> "PhaseCoeff":
        if vars.mode is Mode.SINGLE_GENERIC:
            if power < 0:
                raise ConfigError("negative powers of qc do not exist in generic mode")
            return cls.monomial(vars, (0, power))
        return cls.q(vars, -power)

    @classmethod
    def qij(cls, vars: DeformVars, i: int, j: int, power: int = 1) -> "PhaseCoeff":
        e = [0] * vars.nvars
        e[vars.var_index(i, j)] = power
        return cls.monomial(vars, e)

    # access
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def _check(self, other: "PhaseCoeff"):
        if other.vars != self.vars:
            raise ConfigError(f"mode mismatch: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "PhaseCoeff":
        if isinstance(other, PhaseCoeff):
            self._check(other)
            return other
        return PhaseCoeff.scalar(self.vars, GaussRational.coerce(other))

    # arithmetic
    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        t = dict(self._terms)
        for e, c in o._terms.items():
            acc = t.get(e)
            t[e] = c if acc is None else acc + c
        return PhaseCoeff(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return PhaseCoeff(self.vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        out: dict[tuple, GaussRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                acc = out.get(e)
                out[e] = c if acc is None else acc + c
        return PhaseCoeff(self.vars, out)

    __rmul__ = __mul__

    def mul_exps(self, exps: tuple) -> "PhaseCoeff":
        """Multiply by the unit-coefficient monomial with exponent vector ``exps``."""
        return PhaseCoeff(
            self.vars, {tuple(a + b for a, b in zip(e, exps)): c for e, c in self._terms.items()}
        )

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PhaseCoeff.one(self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "PhaseCoeff":
        if self.vars.mode is Mode.SINGLE_GENERIC:
            return PhaseCoeff(self.vars, {(b, a): c.conj() for (a, b), c in self._terms.items()})
        return PhaseCoeff(self.vars, {tuple(-x for x in e): c.conj() for e, c in self._terms.items()})

    def inverse(self) -> "PhaseCoeff":
        if len(self._terms) != 1:
            raise ZeroDivisionError("only single-term coefficients are invertible")
        if self.vars.mode is Mode.SINGLE_GENERIC:
            (e, c), = self._terms.items()
            if any(e):
                raise ZeroDivisionError("q and qc are not invertible in generic mode")
            return PhaseCoeff(self.vars, {e: c.inverse()})
        (e, c), = self._terms.items()
        return PhaseCoeff(self.vars, {tuple(-x for x in e): c.inverse()})

    def __eq__(self, other):
        if isinstance(other, PhaseCoeff):
            return self.vars == other.vars and self._terms == other._terms
        try:
            return self == self._lift(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    # numeric bridge
    def specialize(self, assignment) -> complex:
        return coeff_specialize(self, assignment)

    # rendering
    def _monomial_text(self, e: tuple) -> str:
        parts = []
        mode = self.vars.mode
        if mode is Mode.SINGLE_GENERIC:
            a, b = e
            if a:
                parts.append("q" if a == 1 else f"q^{a}")
            if b:
                parts.append("qc" if b == 1 else f"qc^{b}")
        elif mode is Mode.SINGLE_UNIMODULAR:
            (k,) = e
            if k:
                parts.append("q" if k == 1 else f"q^{k}")
        else:
            for idx, k in enumerate(e):
                if k:
                    i, j = divmod(idx, self.vars.m)
                    name = f"q[{i + 1},{j + 1}]"
                    parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts)

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def text(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for e, c in self.sorted_items():
            mono = self._monomial_text(e)
            chunks.append(c.text() + ("*" + mono if mono else ""))
        return " + ".join(chunks)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"PhaseCoeff({self.text()})"

    def to_json(self) -> list:
        return [
            [list(e), [str(c.re), str(c.im)]] for e, c in self.sorted_items()
        ]

    @classmethod
    def from_json(cls, vars: DeformVars, data: list) -> "PhaseCoeff":
        return cls(vars, {tuple(e): GaussRational(Fraction(re), Fraction(im)) for e, (re, im) in data})


def coeff_mul(a: PhaseCoeff, b: PhaseCoeff) -> PhaseCoeff:
    """Exact product; raises :class:`ConfigError` on mode mismatch."""
    if a.vars != b.vars:
        raise ConfigError(f"mode mismatch: {a.vars} vs {b.vars}")
    return a * b


def variable_values(vars: DeformVars, assignment) -> list[complex]:
    """Numeric value of each variable slot, validated against the mode.

    ``assignment`` is a complex number in the single-parameter modes and an
    ``n x m`` array-like (or a mapping ``(i, j) -> value`` with 1-based keys)
    in the multiparameter mode.  In generic mode the slot for ``qc`` is
    forced to ``conj(q)``.
    """
    mode = vars.mode
    if mode is Mode.SINGLE_GENERIC:
        q = complex(assignment)
        return [q, q.conjugate()]
    if mode is Mode.SINGLE_UNIMODULAR:
        q = complex(assignment)
        if abs(abs(q) - 1.0) > UNIMODULAR_TOL:
            raise DomainError(f"|q| = {abs(q)} but the unimodular mode needs |q| = 1")
        return [q]
    vals = []
    for i in range(1, vars.n + 1):
        for j in range(1, vars.m + 1):
            if isinstance(assignment, Mapping):
                v = complex(assignment[(i, j)])
            else:
                v = complex(assignment[i - 1][j - 1])
            if abs(abs(v) - 1.0) > UNIMODULAR_TOL:
                raise DomainError(f"|q[{i},{j}]| = {abs(v)} is not 1")
            vals.append(v)
    return vals


def monomial_value(vars: DeformVars, values: list[complex], exps: tuple) -> complex:
    out = 1.0 + 0.0j
    for v, k in zip(values, exps):
        if k:
            out *= v ** k if k > 0 else (1.0 / v) ** (-k)
    return out


def coeff_specialize(a: PhaseCoeff, assignment) -> complex:
    """Evaluate ``a`` at a numeric point (see :func:`variable_values`)."""
    values = variable_values(a.vars, assignment)
    total = 0j
    for e, c in a.items():
        total += complex(c) * monomial_value(a.vars, values, e)
    return total


def phase_turns(q0: complex) -> float:
    """Return phi in [0, 1) with q0 / |q0| = exp(2 pi i phi)."""
    phi = cmath.phase(q0) / (2 * cmath.pi)
    phi = phi % 1.0
    if phi >= 1.0:
        phi = 0.0
    return phi
