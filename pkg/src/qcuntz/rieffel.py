"""Rieffel deformation of Z^2-graded data by a skew matrix.

On homogeneous pieces the deformed product is a phase times the old one,
``a ._Theta b = exp(2 pi i <Theta p, q>) a b`` for ``a`` of degree ``p`` and
``b`` of degree ``q``.  With ``Theta = [[0, t], [-t, 0]]`` the pairing is
``<Theta p, q> = t (p2 q1 - p1 q2)``, so ``(1, 0) ._Theta (0, 1)`` picks up
``exp(-2 pi i t)``.  Phases are tracked as exact rational turns when the
skew parameter is a Fraction.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

import numpy as np
import scipy.sparse as sp

from .coeff import DomainError, phase_turns
from .fockrep import (
    FockRep,
    SparseOp,
    _col_norm_max,
    build_fock_rep,
    level_diag,
    sqrt_branch,
)
from .symalg import Element

__all__ = [
    "SkewTheta",
    "theta_from_q",
    "theta_from_turns",
    "pairing",
    "GradedOperator",
    "twisted_product",
    "double_deform_check",
    "deform_operator",
    "deform_rep",
    "crossed_untwist_check",
]

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class SkewTheta:
    """The skew matrix ``[[0, t], [-t, 0]]``; ``t`` may be a Fraction (exact) or a float."""

    t: Real = Fraction(0)

    @property
    def matrix(self) -> np.ndarray:
        t = float(self.t)
        return np.array([[0.0, t], [-t, 0.0]])

    def __neg__(self) -> "SkewTheta":
        return SkewTheta(-self.t)

    def __add__(self, other: "SkewTheta") -> "SkewTheta":
        return SkewTheta(self.t + other.t)

    def apply(self, p) -> tuple:
        return (self.t * p[1], -self.t * p[0])

    @property
    def exact(self) -> bool:
        return isinstance(self.t, (int, Fraction))


def pairing(theta: SkewTheta, p, q):
    """``<Theta p, q>`` in turns."""
    tp = theta.apply(p)
    return tp[0] * q[0] + tp[1] * q[1]


def theta_from_turns(phi) -> SkewTheta:
    return SkewTheta(Fraction(phi) / 2 if isinstance(phi, (int, Fraction)) else phi / 2)


def theta_from_q(q0: complex, exact: bool = False) -> SkewTheta:
    """``Theta_q`` for ``q0 = exp(2 pi i phi)``, phi in [0, 1): off-diagonal entries ``+-phi/2``.

    With ``exact=True`` phi is replaced by the nearest fraction with
    denominator at most 10**6 (it must agree to 1e-12).
    """
    q0 = complex(q0)
    if abs(abs(q0) - 1) > UNIMODULAR_TOL:
        raise DomainError(f"Theta_q needs |q| = 1, got {abs(q0)}")
    phi = phase_turns(q0)
    if exact:
        frac = Fraction(phi).limit_denominator(10**6)
        if abs(float(frac) - phi) > 1e-12:
            raise ValueError(f"phase {phi} has no small rational form")
        return theta_from_turns(frac)
    return theta_from_turns(phi)


def _unit(turns) -> complex:
    if isinstance(turns, (int, Fraction)):
        turns = turns % 1
        if turns == 0:
            return 1.0 + 0j
    return cmath.exp(2j * cmath.pi * float(turns))


def _payload_degree(payload, levels) -> set:
    if isinstance(payload, Element):
        return payload.degrees()
    mat = payload.mat if isinstance(payload, SparseOp) else sp.csr_matrix(payload)
    if levels is None:
        raise ValueError("a matrix payload needs grading levels")
    coo = sp.coo_matrix(mat)
    mask = np.abs(coo.data) > 0
    diff = levels[coo.row[mask]] - levels[coo.col[mask]]
    return {tuple(int(v) for v in d) for d in np.unique(diff, axis=0)} if len(diff) else set()


@dataclass
class GradedOperator:
    """Homogeneous payload of degree ``degree`` times ``exp(2 pi i turns)``.

    The payload is an ``Element`` or a matrix on a graded space (pass the
    per-basis-vector ``levels`` to have homogeneity verified).
    """

    degree: tuple[int, int]
    payload: object
    turns: Real = Fraction(0)
    levels: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.degree = (int(self.degree[0]), int(self.degree[1]))
        if isinstance(self.payload, Element) or self.levels is not None:
            degs = _payload_degree(self.payload, self.levels)
            if degs and degs != {self.degree}:
                raise ValueError(f"payload is not homogeneous of degree {self.degree}: found {sorted(degs)}")

    @property
    def phase(self) -> complex:
        return _unit(self.turns)

    def value(self):
        """Payload multiplied by the accumulated phase."""
        c = self.phase
        if c == 1:
            return self.payload
        if isinstance(self.payload, Element):
            return self.payload.scale(c)
        return self.payload * c


def _mul_payload(a, b):
    if isinstance(a, Element):
        return a * b
    return a @ b


def twisted_product(a: GradedOperator, b: GradedOperator, *thetas: SkewTheta) -> GradedOperator:
    """Product in the algebra deformed successively by ``thetas`` (no thetas: the plain product)."""
    turns = a.turns + b.turns
    for th in thetas:
        turns = turns + pairing(th, a.degree, b.degree)
    deg = (a.degree[0] + b.degree[0], a.degree[1] + b.degree[1])
    return GradedOperator(deg, _mul_payload(a.payload, b.payload), turns)


def _deviation(x: GradedOperator, y: GradedOperator) -> float:
    if x.degree != y.degree:
        return float("inf")
    dt = x.turns - y.turns
    if isinstance(dt, (int, Fraction)) and dt % 1 == 0 and _payload_equal(x.payload, y.payload):
        return 0.0
    return abs(_unit(dt) - 1) + _payload_distance(x.payload, y.payload)


def _payload_equal(a, b) -> bool:
    if isinstance(a, Element):
        return a == b
    return _payload_distance(a, b) == 0.0


def _payload_distance(a, b) -> float:
    if isinstance(a, Element):
        if a.config.numeric:
            return (a - b).coeff_norm1()
        return 0.0 if a == b else float("inf")
    ma = a.mat if isinstance(a, SparseOp) else sp.csr_matrix(a)
    mb = b.mat if isinstance(b, SparseOp) else sp.csr_matrix(b)
    diff = (ma - mb).tocoo()
    return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0


def double_deform_check(samples: list[GradedOperator], theta: SkewTheta) -> float:
    """Deform by ``theta`` then ``-theta`` and compare with the plain product.

    Covers every ordered pair and both parenthesizations of every ordered
    triple of ``samples``; also checks associativity of the singly deformed
    product and that the unit is still a unit.  Returns the maximal deviation.
    """
    worst = 0.0
    neg = -theta
    for a, b in itertools.product(samples, repeat=2):
        worst = max(worst, _deviation(twisted_product(a, b, theta, neg), twisted_product(a, b)))
    for a, b, c in itertools.product(samples, repeat=3):
        plain = twisted_product(twisted_product(a, b), c)
        left = twisted_product(twisted_product(a, b, theta, neg), c, theta, neg)
        right = twisted_product(a, twisted_product(b, c, theta, neg), theta, neg)
        worst = max(worst, _deviation(left, plain), _deviation(right, plain))
        once_l = twisted_product(twisted_product(a, b, theta), c, theta)
        once_r = twisted_product(a, twisted_product(b, c, theta), theta)
        worst = max(worst, _deviation(once_l, once_r))
    for a in samples:
        if isinstance(a.payload, Element):
            unit = GradedOperator((0, 0), Element.one(a.payload.config))
            worst = max(worst, _deviation(twisted_product(a, unit, theta), a))
            worst = max(worst, _deviation(twisted_product(unit, a, theta), a))
    return worst


def deform_operator(mat: sp.spmatrix, degree, levels: np.ndarray, theta: SkewTheta) -> sp.csr_matrix:
    """``pi_Theta(a) xi = exp(2 pi i <Theta p, q>) pi(a) xi`` for ``xi`` of degree ``q``."""
    levels = np.asarray(levels)
    turns = theta.t * (degree[1] * levels[:, 0] - degree[0] * levels[:, 1])
    phases = np.exp(2j * np.pi * np.asarray(turns, dtype=float))
    return (sp.csr_matrix(mat) @ sp.diags(phases)).tocsr()


def deform_rep(rep: FockRep, theta: SkewTheta) -> FockRep:
    """Deform a graded representation: generator ``s_j`` has degree (1, 0), ``t_r`` degree (0, 1)."""
    if rep.grading is None:
        raise ValueError("deform_rep needs a representation with grading levels")
    lv = rep.grading
    S_ops = [SparseOp(op.space, deform_operator(op.mat, (1, 0), lv, theta)) for op in rep.S]
    T_ops = [SparseOp(op.space, deform_operator(op.mat, (0, 1), lv, theta)) for op in rep.T]
    return FockRep(rep.space, S_ops, T_ops, rep.q, rep.mode, f"{rep.form}+deformed", rep.interior_fn, lv)


def crossed_untwist_check(n: int, m: int, q0: complex, N: int, M: int, order: int = 2) -> dict[str, float]:
    """Residuals of the crossed-product untwisting on the untwisted Fock pair model.

    ``u = d_n(exp(i pi phi)) (x) d_m(exp(-i pi phi))``; ``shat = s u``, ``that = t u``
    must satisfy the deformed relations and ``u shat u^* = exp(i pi phi) shat``.
    """
    q0 = complex(q0)
    if abs(abs(q0) - 1) > UNIMODULAR_TOL:
        raise DomainError(f"the crossed-product untwist needs |q| = 1, got {abs(q0)}")
    base = build_fock_rep(n, m, N, M, 1.0, "A")
    half = sqrt_branch(q0)
    u = sp.kron(level_diag(n, N, half), level_diag(m, M, half.conjugate())).tocsr()
    uH = u.conj().T
    sh = [op.mat @ u for op in base.S]
    th = [op.mat @ u for op in base.T]
    idx = base.interior(order).indices
    eye = sp.identity(base.dim, dtype=complex, format="csr")
    zero = sp.csr_matrix((base.dim, base.dim), dtype=complex)

    def worst(mats):
        return max((_col_norm_max(R, idx) for R in mats), default=0.0)

    return {
        "shat_j^* shat_k - delta_jk": worst(
            [sh[j].conj().T @ sh[k] - (eye if j == k else zero) for j in range(n) for k in range(n)]
        ),
        "that_r^* that_l - delta_rl": worst(
            [th[r].conj().T @ th[l] - (eye if r == l else zero) for r in range(m) for l in range(m)]
        ),
        "shat_j^* that_r - q that_r shat_j^*": worst(
            [sh[j].conj().T @ th[r] - q0 * (th[r] @ sh[j].conj().T) for j in range(n) for r in range(m)]
        ),
        "that_r shat_j - q shat_j that_r": worst(
            [th[r] @ sh[j] - q0 * (sh[j] @ th[r]) for j in range(n) for r in range(m)]
        ),
        "u shat_j u^* - e^{i pi phi} shat_j": worst([u @ x @ uH - half * x for x in sh]),
        "u that_r u^* - e^{-i pi phi} that_r": worst([u @ x @ uH - half.conjugate() * x for x in th]),
        "u s_j u^* - e^{i pi phi} s_j": worst([u @ op.mat @ uH - half * op.mat for op in base.S]),
        "u t_r u^* - e^{-i pi phi} t_r": worst([u @ op.mat @ uH - half.conjugate() * op.mat for op in base.T]),
    }
