"""The |q| < 1 untwisting, realized on the truncated free Fock space over C^(n+m).

The free model carries isometries v_1..v_{n+m} with orthogonal ranges.  From
them we build

* ``Qt = sum_{i<=n} v_i v_i^*`` (a diagonal projection),
* ``wt_r = v_{n+r} (1 - |q|^2 Qt)^(1/2)``,
* ``w_r = sum_k q^k sum_{|mu|=k} v_mu wt_r v_mu^*`` (mu over the first n letters),

so that ``s_i := v_i, t_r := w_r`` satisfy the twisted Toeplitz relations.
Applying the inverse recipe ``that_r = (1 - Q) t_r (1 - |q|^2 Q)^(-1/2)``
must give back ``v_{n+r}``.

Functions of ``1 - c P`` for a projection ``P`` use the closed form
``f(1 - cP) = (1 - P) + f(1 - c) P``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .coeff import DomainError
from .fockrep import FockRep, SparseOp, TruncFock, _col_norm_max, fock_creation

__all__ = [
    "FreeModel",
    "projection_function",
    "build_free_model",
    "build_w_generators",
    "build_hat_generators",
    "roundtrip_check",
    "partial_sum_identity",
    "generic_rep",
]


def projection_function(Pm: sp.spmatrix, c: float, f) -> sp.csr_matrix:
    """``f(1 - c P)`` for an orthogonal projection ``P``: ``(1 - P) + f(1 - c) P``."""
    dim = Pm.shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    return ((eye - Pm) + f(1.0 - c) * Pm).tocsr()


@dataclass
class FreeModel:
    n: int
    m: int
    L: int
    q0: complex
    space: TruncFock
    v: list
    Qt: sp.csr_matrix
    wt: list = field(default_factory=list)
    w: list = field(default_factory=list)
    series_terms: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.space.dim

    def interior(self, order: int) -> np.ndarray:
        """Words of length <= L - order."""
        lv = self.space.levels()[:, 0]
        return np.flatnonzero(lv <= self.L - order)


def build_free_model(n: int, m: int, q0: complex, L: int) -> FreeModel:
    q0 = complex(q0)
    if abs(q0) >= 1:
        raise DomainError(f"the untwisting needs |q| < 1, got |q| = {abs(q0)}")
    d = n + m
    space = TruncFock.free(d, L)
    v = [fock_creation(d, L, i) for i in range(1, d + 1)]
    Qt = sum((v[i] @ v[i].conj().T for i in range(n)), sp.csr_matrix((space.dim, space.dim), dtype=complex))
    model = FreeModel(n, m, L, q0, space, v, sp.csr_matrix(Qt))
    build_w_generators(model)
    return model


def build_w_generators(model: FreeModel) -> list:
    """Fill in ``wt_r`` and the series ``w_r``; every term with |mu| >= L is asserted to vanish."""
    n, m, L, q0 = model.n, model.m, model.L, model.q0
    c = abs(q0) ** 2
    root = projection_function(model.Qt, c, np.sqrt)
    model.wt = [(model.v[n + r] @ root).tocsr() for r in range(m)]
    model.w = []
    model.series_terms = []
    for r in range(m):
        term = model.wt[r]
        total = term.copy()
        terms = [term]
        for k in range(1, L + 2):
            term = q0 * sum((model.v[i] @ term @ model.v[i].conj().T for i in range(n)), sp.csr_matrix(term.shape, dtype=complex))
            term = sp.csr_matrix(term)
            term.eliminate_zeros()
            terms.append(term)
            if k >= L:
                assert term.nnz == 0, f"series term k={k} should vanish on the truncation"
            total = total + term
        model.w.append(sp.csr_matrix(total))
        model.series_terms.append(terms)
    return model.w


def build_hat_generators(s_ops: list, t_ops: list, q0: complex) -> list:
    """``that_r = (1 - Q) t_r (1 - |q|^2 Q)^(-1/2)`` with ``Q = sum_i s_i s_i^*``."""
    dim = s_ops[0].shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    Q = sum((a @ a.conj().T for a in s_ops), sp.csr_matrix((dim, dim), dtype=complex))
    inv_root = projection_function(Q, abs(complex(q0)) ** 2, lambda x: 1.0 / np.sqrt(x))
    return [((eye - Q) @ t @ inv_root).tocsr() for t in t_ops]


def tilde_generators(s_ops: list, t_ops: list) -> list:
    """``tt_r = (1 - Q) t_r``."""
    dim = s_ops[0].shape[0]
    eye = sp.identity(dim, dtype=complex, format="csr")
    Q = sum((a @ a.conj().T for a in s_ops), sp.csr_matrix((dim, dim), dtype=complex))
    return [((eye - Q) @ t).tocsr() for t in t_ops]


def _max_res(mats, idx) -> float:
    return max((_col_norm_max(R, idx) for R in mats), default=0.0)


def w_relation_residuals(model: FreeModel, order: int = 2) -> dict[str, float]:
    n, m = model.n, model.m
    idx = model.interior(order)
    q0 = model.q0
    eye = sp.identity(model.dim, dtype=complex, format="csr")
    w = model.w
    v = model.v
    Qt = model.Qt
    out = {
        "w_r^* w_l - delta_rl": _max_res(
            [w[r].conj().T @ w[l] - (eye if r == l else 0 * eye) for r in range(m) for l in range(m)], idx
        ),
        "v_i^* w_r - q w_r v_i^*": _max_res(
            [v[i].conj().T @ w[r] - q0 * (w[r] @ v[i].conj().T) for i in range(n) for r in range(m)], idx
        ),
        "(1 - Qt) w_r - wt_r": _max_res([(eye - Qt) @ w[r] - model.wt[r] for r in range(m)], idx),
    }
    return out


def roundtrip_check(n: int, m: int, q0: complex, L: int, order: int = 2) -> dict[str, float]:
    """Deviations of the composite maps from the identity on the interior.

    ``that_r - v_{n+r}`` is the main entry; the report also carries the
    intermediate identities (isometry of ``that``, ``s^* that = 0``,
    ``tt^* tt = 1 - |q|^2 Q``, and the w-relations).
    """
    model = build_free_model(n, m, q0, L)
    idx = model.interior(order)
    s_ops = model.v[:n]
    t_ops = model.w
    that = build_hat_generators(s_ops, t_ops, q0)
    tt = tilde_generators(s_ops, t_ops)
    eye = sp.identity(model.dim, dtype=complex, format="csr")
    Q = model.Qt
    c = abs(complex(q0)) ** 2
    report = {
        "that_r - v_{n+r}": _max_res([that[r] - model.v[n + r] for r in range(m)], idx),
        "that_r^* that_l - delta_rl": _max_res(
            [that[r].conj().T @ that[l] - (eye if r == l else 0 * eye) for r in range(m) for l in range(m)], idx
        ),
        "s_i^* that_r": _max_res([s_ops[i].conj().T @ that[r] for i in range(n) for r in range(m)], idx),
        "s_i^* tt_r": _max_res([s_ops[i].conj().T @ tt[r] for i in range(n) for r in range(m)], idx),
        "tt_r^* tt_l - delta_rl (1 - |q|^2 Q)": _max_res(
            [
                tt[r].conj().T @ tt[l] - ((eye - c * Q) if r == l else 0 * eye)
                for r in range(m)
                for l in range(m)
            ],
            idx,
        ),
    }
    report.update(w_relation_residuals(model, order))
    return report


def partial_sum_identity(n: int, m: int, q0: complex, L: int, N: int, order: int = 2) -> float:
    """Residual of ``sum_{k<=N} q^k sum_{|mu|=k} s_mu tt_r s_mu^* = t_r - q^(N+1) sum_{|mu|=N+1} s_mu t_r s_mu^*``.

    Both sides are sandwiches ``s_mu X s_mu^*`` whose net level change is +1,
    so they are exact on words of length <= L - 1; the interior of ``order``
    (default 2) is used.
    """
    if N >= L:
        raise ValueError("need N < L")
    model = build_free_model(n, m, q0, L)
    q0 = complex(q0)
    idx = model.interior(order)
    s_ops = model.v[:n]
    t_ops = model.w
    tt = tilde_generators(s_ops, t_ops)
    worst = 0.0
    for r in range(m):
        lhs = sp.csr_matrix(t_ops[r].shape, dtype=complex)
        layer = tt[r]
        for k in range(N + 1):
            lhs = lhs + layer
            layer = q0 * sum((s @ layer @ s.conj().T for s in s_ops), sp.csr_matrix(layer.shape, dtype=complex))
        tail = t_ops[r]
        for _ in range(N + 1):
            tail = sum((s @ tail @ s.conj().T for s in s_ops), sp.csr_matrix(tail.shape, dtype=complex))
        rhs = t_ops[r] - q0 ** (N + 1) * tail
        worst = max(worst, _col_norm_max(lhs - rhs, idx))
    return worst


def generic_rep(n: int, m: int, q0: complex, L: int) -> FockRep:
    """The free model viewed as a representation of the |q| < 1 algebra: s_i = v_i, t_r = w_r."""
    model = build_free_model(n, m, q0, L)
    space = model.space
    lv = space.levels()[:, 0]

    def fn(rs, rt):
        return np.flatnonzero(lv <= L - (rs + rt))

    S_ops = [SparseOp(space, x) for x in model.v[:n]]
    T_ops = [SparseOp(space, x) for x in model.w]
    return FockRep(space, S_ops, T_ops, complex(q0), "generic", "free", fn)
