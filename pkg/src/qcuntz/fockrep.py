"""Truncated Fock-space models with sparse generator matrices.

Two spaces are provided.  ``Pair(n, m, N, M)`` is the tensor product of the
full Fock spaces over C^n and C^m cut at word lengths N and M; ``Free(d, L)``
is the full Fock space over C^d cut at length L.  Creation operators kill the
top level, so every statement is checked only on an explicit interior where
the truncated matrices agree with the untruncated operators.
"""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp

from .coeff import DomainError, Mode, phase_turns
from .symalg import S, T, AlgebraConfig, Element, Monomial, word_rise

__all__ = [
    "TruncFock",
    "SparseOp",
    "InteriorMask",
    "FockRep",
    "words",
    "fock_creation",
    "level_diag",
    "sqrt_branch",
    "build_fock_rep",
    "build_multi_fock_rep",
    "clock_shift_rep",
    "relation_residuals",
    "evaluate",
    "evaluate_word",
    "concrete_theta_rep",
    "zeta_phase",
    "wick_T",
    "braid_residual",
    "operator_norm",
    "wold_classify",
    "direct_sum",
    "cuntz_residuals",
    "element_rise",
    "synthetic_wold_rep",
    "WoldResult",
]

UNIMODULAR_TOL = 1e-12


# ----------------------------------------------------------------------------
# spaces


def words(d: int, L: int) -> list[tuple[int, ...]]:
    """All words over letters 1..d of length <= L, graded lexicographic order."""
    out: list[tuple[int, ...]] = []
    for k in range(L + 1):
        out.extend(itertools.product(range(1, d + 1), repeat=k))
    return out


def _fock_dim(d: int, L: int) -> int:
    return L + 1 if d == 1 else (d ** (L + 1) - 1) // (d - 1)


@dataclass(frozen=True)
class TruncFock:
    """Truncated Fock space: ``kind`` is ``"pair"`` or ``"free"``."""

    kind: str
    n: int
    m: int = 0
    N: int = 0
    M: int = 0

    @classmethod
    def pair(cls, n: int, m: int, N: int, M: int) -> "TruncFock":
        return cls("pair", n, m, N, M)

    @classmethod
    def free(cls, d: int, L: int) -> "TruncFock":
        return cls("free", d, 0, L, 0)

    @property
    def L(self) -> int:
        return self.N

    @property
    def dim(self) -> int:
        if self.kind == "pair":
            return _fock_dim(self.n, self.N) * _fock_dim(self.m, self.M)
        return _fock_dim(self.n, self.N)

    def basis(self) -> list:
        if self.kind == "pair":
            return list(itertools.product(words(self.n, self.N), words(self.m, self.M)))
        return words(self.n, self.N)

    def levels(self) -> np.ndarray:
        """Per basis vector: ``(|mu|, |mu'|)`` for pairs, ``(len,)`` for free spaces."""
        if self.kind == "pair":
            a = np.array([len(w) for w in words(self.n, self.N)])
            b = np.array([len(w) for w in words(self.m, self.M)])
            return np.stack([np.repeat(a, len(b)), np.tile(b, len(a))], axis=1)
        return np.array([[len(w)] for w in words(self.n, self.N)])

    def index(self, vec) -> int:
        if self.kind == "pair":
            mu, mup = vec
            return _word_index(self.n, mu) * _fock_dim(self.m, self.M) + _word_index(self.m, mup)
        return _word_index(self.n, vec)

    def vacuum_index(self) -> int:
        return 0


def _word_index(d: int, w: Sequence[int]) -> int:
    k = len(w)
    offset = _fock_dim(d, k - 1) if k else 0
    pos = 0
    for x in w:
        pos = pos * d + (x - 1)
    return offset + pos


def fock_creation(d: int, L: int, j: int) -> sp.csr_matrix:
    """Left creation operator e_w -> e_{jw} on the Fock space over C^d cut at L."""
    ws = words(d, L)
    rows, cols = [], []
    for c, w in enumerate(ws):
        if len(w) < L:
            rows.append(_word_index(d, (j,) + w))
            cols.append(c)
    dim = len(ws)
    return sp.csr_matrix((np.ones(len(rows), dtype=complex), (rows, cols)), shape=(dim, dim))


def level_diag(d: int, L: int, lam: complex) -> sp.csr_matrix:
    """``d_k(lam)``: multiply level-l vectors by ``lam**l``."""
    lv = np.array([len(w) for w in words(d, L)])
    return sp.diags(np.asarray(lam, dtype=complex) ** lv).tocsr()


def sqrt_branch(q0: complex) -> complex:
    """Square root ``exp(i pi phi)`` of the unimodular ``q0 = exp(2 pi i phi)``, phi in [0, 1)."""
    return cmath.exp(1j * cmath.pi * phase_turns(q0))


# ----------------------------------------------------------------------------
# operators


@dataclass
class SparseOp:
    """Sparse complex matrix acting on ``space``."""

    space: object
    mat: sp.csr_matrix

    def __post_init__(self):
        self.mat = sp.csr_matrix(self.mat, dtype=complex)

    @property
    def shape(self):
        return self.mat.shape

    @property
    def H(self) -> "SparseOp":
        return SparseOp(self.space, self.mat.conj().T.tocsr())

    def _m(self, other):
        return other.mat if isinstance(other, SparseOp) else other

    def __matmul__(self, other):
        if isinstance(other, SparseOp):
            return SparseOp(self.space, self.mat @ other.mat)
        return self.mat @ other

    def __add__(self, other):
        return SparseOp(self.space, self.mat + self._m(other))

    def __sub__(self, other):
        return SparseOp(self.space, self.mat - self._m(other))

    def __mul__(self, c):
        return SparseOp(self.space, self.mat * c)

    __rmul__ = __mul__

    def __neg__(self):
        return SparseOp(self.space, -self.mat)

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()

    def export_mm(self, path) -> None:
        """Write the matrix in Matrix Market coordinate format."""
        scipy.io.mmwrite(str(path), self.mat.tocoo(), field="complex", precision=17)

    @classmethod
    def import_mm(cls, path, space=None) -> "SparseOp":
        return cls(space, sp.csr_matrix(scipy.io.mmread(str(path))))


@dataclass(frozen=True)
class InteriorMask:
    """Basis indices on which products with the given headroom are exact."""

    order: tuple
    indices: np.ndarray = field(compare=False)

    def __len__(self):
        return len(self.indices)


@dataclass
class FockRep:
    """Generator matrices for s_1..s_n and t_1..t_m together with interior bookkeeping.

    ``mode`` is ``"single"`` (relations with one unimodular q), ``"multi"``
    (matrix ``q``), or ``"generic"`` (|q| < 1, no t s = q s t relation).
    """

    space: object
    S: list
    T: list
    q: object
    mode: str
    form: str = ""
    interior_fn: Callable | None = None
    grading: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.S)

    @property
    def m(self) -> int:
        return len(self.T)

    @property
    def dim(self) -> int:
        return self.S[0].shape[0]

    def interior(self, rise_s: int, rise_t: int | None = None) -> InteriorMask:
        """Interior with headroom ``rise_s`` S-levels and ``rise_t`` T-levels.

        With a single argument ``r`` this is the interior of order ``r``:
        every product of at most ``r`` generators (and adjoints) is exact there.
        """
        if rise_t is None:
            rise_t = rise_s
        if self.interior_fn is None:
            return InteriorMask((rise_s, rise_t), np.arange(self.dim))
        return InteriorMask((rise_s, rise_t), np.asarray(self.interior_fn(rise_s, rise_t)))

    def generator(self, family: int, index: int, starred: bool = False) -> sp.csr_matrix:
        op = (self.S if family == S else self.T)[index - 1]
        return op.H.mat if starred else op.mat

    def algebra_config(self) -> AlgebraConfig:
        if self.mode == "multi":
            return AlgebraConfig.multi(self.n, self.m).specialized(np.asarray(self.q))
        if self.mode == "generic":
            return AlgebraConfig.generic(self.n, self.m).specialized(complex(self.q))
        return AlgebraConfig.single(self.n, self.m).specialized(complex(self.q))


def _pair_interior(space: TruncFock):
    lv = space.levels()

    def fn(rs, rt):
        return np.flatnonzero((lv[:, 0] <= space.N - rs) & (lv[:, 1] <= space.M - rt))

    return fn


def build_fock_rep(n: int, m: int, N: int, M: int, q0: complex, form: str = "A") -> FockRep:
    """Fock representation of the single-parameter algebra at unimodular ``q0``.

    form A: s_j = S_j (x) d_m(q^-1/2),  t_r = d_n(q^1/2) (x) T_r
    form B: s_j = S_j (x) 1,            t_r = d_n(q) (x) T_r
    form C: s_j = S_j (x) d_m(q^-1),    t_r = 1 (x) T_r
    """
    q0 = complex(q0)
    if abs(abs(q0) - 1) > UNIMODULAR_TOL:
        raise DomainError(f"Fock forms need |q| = 1, got |q| = {abs(q0)}")
    form = form.upper()
    half = sqrt_branch(q0)
    if form == "A":
        ds, dt = half.conjugate(), half
    elif form == "B":
        ds, dt = 1.0, q0
    elif form == "C":
        ds, dt = q0.conjugate(), 1.0
    else:
        raise ValueError(f"unknown form {form!r}")
    space = TruncFock.pair(n, m, N, M)
    Dm = level_diag(m, M, ds)
    Dn = level_diag(n, N, dt)
    S_ops = [SparseOp(space, sp.kron(fock_creation(n, N, j), Dm)) for j in range(1, n + 1)]
    T_ops = [SparseOp(space, sp.kron(Dn, fock_creation(m, M, r))) for r in range(1, m + 1)]
    return FockRep(space, S_ops, T_ops, q0, "single", form, _pair_interior(space), space.levels())


def build_multi_fock_rep(n: int, m: int, N: int, M: int, qmat) -> FockRep:
    """Fock representation for s_i t_j = q_ij t_j s_i: s_i = S_i (x) D_i, t_j = 1 (x) T_j.

    ``D_i`` multiplies the basis word mu' by the product of q_ij over its letters j.
    """
    qmat = np.asarray(qmat, dtype=complex)
    if qmat.shape != (n, m):
        raise ValueError("q matrix must be n x m")
    if np.max(np.abs(np.abs(qmat) - 1)) > UNIMODULAR_TOL:
        raise DomainError("multiparameter Fock model needs |q_ij| = 1")
    space = TruncFock.pair(n, m, N, M)
    wm = words(m, M)
    S_ops = []
    for i in range(1, n + 1):
        diag = np.array([np.prod([qmat[i - 1, j - 1] for j in w]) if w else 1.0 for w in wm], dtype=complex)
        S_ops.append(SparseOp(space, sp.kron(fock_creation(n, N, i), sp.diags(diag))))
    In = sp.identity(_fock_dim(n, N), dtype=complex, format="csr")
    T_ops = [SparseOp(space, sp.kron(In, fock_creation(m, M, j))) for j in range(1, m + 1)]
    return FockRep(space, S_ops, T_ops, qmat, "multi", "multi", _pair_interior(space), space.levels())


def clock_shift_rep(k: int = 3) -> FockRep:
    """n = m = 1 model by k x k unitaries: s_1 = shift, t_1 = clock, q = exp(2 pi i / k)."""
    omega = cmath.exp(2j * cmath.pi / k)
    shift = sp.csr_matrix(np.roll(np.eye(k), 1, axis=0).astype(complex))
    clock = sp.diags(omega ** np.arange(k)).tocsr()
    space = ("clock-shift", k)
    return FockRep(space, [SparseOp(space, shift)], [SparseOp(space, clock)], omega, "single", "clock-shift")


def direct_sum(a: FockRep, b: FockRep) -> FockRep:
    if (a.n, a.m) != (b.n, b.m):
        raise ValueError("direct sum needs equal (n, m)")
    space = ("sum", a.space, b.space)
    S_ops = [SparseOp(space, sp.block_diag([x.mat, y.mat], format="csr")) for x, y in zip(a.S, b.S)]
    T_ops = [SparseOp(space, sp.block_diag([x.mat, y.mat], format="csr")) for x, y in zip(a.T, b.T)]

    def fn(rs, rt):
        return np.concatenate([a.interior(rs, rt).indices, a.dim + b.interior(rs, rt).indices])

    grading = None
    if a.grading is not None and b.grading is not None:
        grading = np.vstack([a.grading, b.grading])
    return FockRep(space, S_ops, T_ops, a.q, a.mode, "sum", fn, grading)


# ----------------------------------------------------------------------------
# relation checks and evaluation


def _col_norm_max(R: sp.spmatrix, idx: np.ndarray) -> float:
    if len(idx) == 0:
        return 0.0
    sub = sp.csc_matrix(R)[:, idx]
    if sub.nnz == 0:
        return 0.0
    sq = np.asarray(abs(sub).power(2).sum(axis=0)).ravel()
    return float(np.sqrt(sq.max()))


def relation_residuals(rep: FockRep, q0=None, order: int = 2) -> dict[str, float]:
    """Max column norm, over the interior of ``order``, of every defining relation's residual."""
    q = rep.q if q0 is None else q0
    idx = rep.interior(order).indices
    dim = rep.dim
    eye = sp.identity(dim, dtype=complex, format="csr")
    Sm = [x.mat for x in rep.S]
    Tm = [x.mat for x in rep.T]
    out: dict[str, float] = {}

    def record(name, R):
        out[name] = max(out.get(name, 0.0), _col_norm_max(R, idx))

    for i, a in enumerate(Sm):
        for j, b in enumerate(Sm):
            record("s_i^* s_j - delta_ij", a.conj().T @ b - (eye if i == j else 0 * eye))
    for i, a in enumerate(Tm):
        for j, b in enumerate(Tm):
            record("t_r^* t_l - delta_rl", a.conj().T @ b - (eye if i == j else 0 * eye))
    for i, a in enumerate(Sm):
        for j, b in enumerate(Tm):
            if rep.mode == "multi":
                qij = complex(np.asarray(q)[i, j])
                record("s_i t_j - q_ij t_j s_i", a @ b - qij * (b @ a))
                record("s_i^* t_j - conj(q_ij) t_j s_i^*", a.conj().T @ b - qij.conjugate() * (b @ a.conj().T))
            else:
                qq = complex(q)
                record("s_j^* t_r - q t_r s_j^*", a.conj().T @ b - qq * (b @ a.conj().T))
                if rep.mode == "single":
                    record("t_r s_j - q s_j t_r", b @ a - qq * (a @ b))
    return out


def evaluate_word(word: Sequence, rep: FockRep) -> SparseOp:
    """Product of generator matrices along a raw word (no rewriting)."""
    mat = sp.identity(rep.dim, dtype=complex, format="csr")
    for f, i, starred in word:
        mat = mat @ rep.generator(f, i, starred)
    return SparseOp(rep.space, mat)


def _monomial_matrix(mono: Monomial, rep: FockRep, cache: dict) -> sp.csr_matrix:
    hit = cache.get(mono)
    if hit is None:
        hit = evaluate_word(mono.raw(), rep).mat
        cache[mono] = hit
    return hit


def evaluate(x: Element, rep: FockRep, q0=None) -> SparseOp:
    """Image of an Element under the representation (coefficients specialized at ``rep.q``)."""
    if (x.config.n, x.config.m) != (rep.n, rep.m):
        raise ValueError("Element and representation have different (n, m)")
    cfg = x.config
    if not cfg.numeric:
        mode = cfg.vars.mode
        expected = {"single": Mode.SINGLE_UNIMODULAR, "generic": Mode.SINGLE_GENERIC, "multi": Mode.MULTI_UNIMODULAR}
        if expected.get(rep.mode) is not mode:
            raise ValueError(f"Element mode {mode.value} does not match the {rep.mode} representation")
        assignment = rep.q if q0 is None else q0
        x = x.specialize(np.asarray(assignment) if rep.mode == "multi" else complex(assignment))
    cache: dict = {}
    mat = sp.csr_matrix((rep.dim, rep.dim), dtype=complex)
    for mono, c in x.items():
        mat = mat + c * _monomial_matrix(mono, rep, cache)
    return SparseOp(rep.space, mat)


def element_rise(x: Element) -> tuple[int, int]:
    rs = rt = 0
    for mono in x.monomials():
        a, b = word_rise(mono.raw())
        rs, rt = max(rs, a), max(rt, b)
    return rs, rt


# ----------------------------------------------------------------------------
# concrete representation for the multiparameter quotient


def zeta_phase(qrow: Sequence[complex], m: int, k: int, level: int) -> complex:
    """Phase zeta_i(k, level) with zeta_i(beta_j(k'), level + 1) = q_ij zeta_i(k', level).

    ``beta_j(k) = m*k + (j - 1)``.  Since ``0 = beta_1(0)`` the chain ends in
    ``zeta_i(0, level) = q_i1**level``.
    """
    if m < 2:
        raise ValueError("the digit expansion needs m >= 2")
    phase = 1.0 + 0j
    while k > 0:
        j = k % m
        phase *= qrow[j]
        k //= m
        level -= 1
    q1 = complex(qrow[0])
    return phase * (q1 ** level if level >= 0 else q1.conjugate() ** (-level))


def _digit_map(base: int, digit: int, size: int) -> sp.csr_matrix:
    rows, cols = [], []
    for k in range(size):
        r = base * k + digit
        if r < size:
            rows.append(r)
            cols.append(k)
    return sp.csr_matrix((np.ones(len(rows), dtype=complex), (rows, cols)), shape=(size, size))


def _digit_headroom(base: int, top: int, r: int) -> int:
    a = top
    for _ in range(r):
        a = (a - base + 1) // base
        if a < 0:
            return -1
    return a


def concrete_theta_rep(n: int, m: int, qmat, N: int, M: int, W: int) -> FockRep:
    """Representation on l2(N0) (x) l2(N0) (x) l2([-W, W]) with pi(s_i) = S^_i (x) U_i, pi(t_j) = 1 (x) T^_j (x) shift.

    ``N`` and ``M`` are the index counts kept in the first two factors.
    """
    if n < 2 or m < 2:
        raise ValueError("the l2 model of the Cuntz relations needs n, m >= 2")
    qmat = np.asarray(qmat, dtype=complex)
    if qmat.shape != (n, m):
        raise ValueError("q matrix must be n x m")
    if np.max(np.abs(np.abs(qmat) - 1)) > UNIMODULAR_TOL:
        raise DomainError("q_ij must be unimodular")
    zs = np.arange(-W, W + 1)
    shift = sp.csr_matrix(
        (np.ones(2 * W, dtype=complex), (np.arange(1, 2 * W + 1), np.arange(0, 2 * W))),
        shape=(2 * W + 1, 2 * W + 1),
    )
    IA = sp.identity(N, dtype=complex, format="csr")
    S_ops, T_ops = [], []
    space = ("theta", n, m, N, M, W)
    for i in range(1, n + 1):
        U = np.array([zeta_phase(qmat[i - 1], m, k, int(z)) for k in range(M) for z in zs])
        S_ops.append(SparseOp(space, sp.kron(_digit_map(n, i - 1, N), sp.diags(U))))
    for j in range(1, m + 1):
        T_ops.append(SparseOp(space, sp.kron(IA, sp.kron(_digit_map(m, j - 1, M), shift))))

    a_idx = np.repeat(np.arange(N), M * (2 * W + 1))
    b_idx = np.tile(np.repeat(np.arange(M), 2 * W + 1), N)
    z_idx = np.tile(zs, N * M)

    def fn(rs, rt):
        r = max(rs, rt)
        amax = _digit_headroom(n, N - 1, r)
        bmax = _digit_headroom(m, M - 1, r)
        return np.flatnonzero((a_idx <= amax) & (b_idx <= bmax) & (np.abs(z_idx) <= W - r))

    return FockRep(space, S_ops, T_ops, qmat, "multi", "theta", fn)


def cuntz_residuals(rep: FockRep, order: int = 1) -> dict[str, float]:
    """Residuals of sum_j s_j s_j^* = 1 and sum_r t_r t_r^* = 1 on the interior."""
    idx = rep.interior(order).indices
    eye = sp.identity(rep.dim, dtype=complex, format="csr")
    Q = sum((x.mat @ x.mat.conj().T for x in rep.S), 0 * eye)
    P = sum((x.mat @ x.mat.conj().T for x in rep.T), 0 * eye)
    return {"1 - Q": _col_norm_max(eye - Q, idx), "1 - P": _col_norm_max(eye - P, idx)}


# ----------------------------------------------------------------------------
# Wick operator


def wick_T(n: int, m: int, q0: complex) -> SparseOp:
    """T(u_i (x) v_r) = q v_r (x) u_i,  T(v_r (x) u_i) = conj(q) u_i (x) v_r, zero on same-type pairs.

    Basis of C^{n+m}: u_1..u_n then v_1..v_m.
    """
    d = n + m
    q0 = complex(q0)
    rows, cols, vals = [], [], []
    for i in range(n):
        for r in range(n, d):
            rows.append(r * d + i)
            cols.append(i * d + r)
            vals.append(q0)
            rows.append(i * d + r)
            cols.append(r * d + i)
            vals.append(q0.conjugate())
    mat = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(d * d, d * d))
    return SparseOp(("wick", n, m), mat)


def operator_norm(op) -> float:
    mat = op.mat if isinstance(op, SparseOp) else op
    dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
    if dense.size == 0:
        return 0.0
    return float(np.linalg.norm(dense, 2))


def braid_residual(Top: SparseOp, form: str = "standard") -> float:
    """Operator norm of the braid defect on three tensor factors.

    ``standard``: (1xT)(Tx1)(1xT) - (Tx1)(1xT)(Tx1).
    ``printed``: (1xT)(Tx1)(1xT) - (Tx1)(1xT)(1xT), the variant whose last factor repeats.
    """
    d = int(round(np.sqrt(Top.shape[0])))
    I = sp.identity(d, dtype=complex, format="csr")
    A = sp.kron(I, Top.mat).tocsr()
    B = sp.kron(Top.mat, I).tocsr()
    lhs = A @ B @ A
    if form == "standard":
        rhs = B @ A @ B
    elif form == "printed":
        rhs = B @ A @ A
    else:
        raise ValueError(f"unknown braid form {form!r}")
    return operator_norm(lhs - rhs)


# ----------------------------------------------------------------------------
# Wold classification


def _orth(M: np.ndarray, tol: float) -> np.ndarray:
    if M.size == 0 or M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    Qf, R, _ = scipy.linalg.qr(M, mode="economic", pivoting=True)
    rank = int(np.sum(np.abs(np.diag(R)) > tol))
    if rank == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    # re-orthonormalize the kept directions by SVD for a clean cutoff
    U, sv, _ = np.linalg.svd(Qf[:, :rank] * np.abs(np.diag(R))[:rank], full_matrices=False)
    return U[:, sv > tol]


def _psd_kernel(H: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the kernel of a positive semidefinite matrix."""
    w, V = np.linalg.eigh(H)
    return V[:, w <= tol]


def _closure(B: np.ndarray, ops: list, tol: float) -> np.ndarray:
    """Smallest subspace containing span(B) and invariant under every operator in ``ops``."""
    basis = _orth(B, tol)
    frontier = basis
    while frontier.shape[1]:
        cand = np.hstack([op @ frontier for op in ops])
        cand = cand - basis @ (basis.conj().T @ cand)
        frontier = _orth(cand, tol)
        basis = np.hstack([basis, frontier])
    return basis


def _restrict(B: np.ndarray, inside: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of span(B) intersected with the coordinate subspace on ``inside``.

    A unit vector of that coordinate subspace lies in span(B) iff the
    compression of the projection onto span(B) has eigenvalue 1 on it.
    """
    dim = B.shape[0]
    if B.shape[1] == 0 or len(inside) == 0:
        return np.zeros((dim, 0), dtype=complex)
    X = B[inside, :]
    w, V = np.linalg.eigh(X @ X.conj().T)
    keep = V[:, w >= 1 - tol]
    out = np.zeros((dim, keep.shape[1]), dtype=complex)
    out[inside, :] = keep
    return out


@dataclass
class WoldResult:
    dims: dict
    projections: dict


def wold_classify(rep: FockRep, interior_order: int = 2, tol: float = 1e-8, q0=None) -> WoldResult:
    """Split the interior into the four Wold-type pieces H1..H4.

    H1: generated by ker Q n ker P under all s, t (Fock part);
    H2: Q = 1, P != 1;  H3: P = 1, Q != 1;  H4: Q = P = 1.
    Refuses (``DomainError``) when the defining relations fail on the interior.
    """
    res = relation_residuals(rep, q0, order=interior_order)
    worst = max(res.values(), default=0.0)
    if worst > tol:
        raise DomainError(f"relations violated on the interior (max residual {worst:.3e}); refusing to classify")
    Sd = [x.mat.tocsr() for x in rep.S]
    Td = [x.mat.tocsr() for x in rep.T]
    dim = rep.dim
    Q = sum((a @ a.conj().T for a in Sd), sp.csr_matrix((dim, dim), dtype=complex)).toarray()
    P = sum((b @ b.conj().T for b in Td), sp.csr_matrix((dim, dim), dtype=complex)).toarray()
    kerQ = _psd_kernel(Q, tol)
    kerP = _psd_kernel(P, tol)
    HF = _closure(kerQ, Sd, tol)
    H1 = _closure(_psd_kernel(Q + P, tol), Sd + Td, tol)
    # H3: the part of the S-Fock subspace orthogonal to H1
    H3 = _orth(HF - H1 @ (H1.conj().T @ HF), tol)
    # H2: T-closure of the part of ker P orthogonal to the S-Fock subspace
    H2 = _closure(_psd_kernel(P + HF @ HF.conj().T, tol), Td, tol)
    known = np.hstack([H1, H2, H3])
    H4 = _psd_kernel(known @ known.conj().T, tol)

    inside = rep.interior(interior_order).indices
    parts = {"H1": H1, "H2": H2, "H3": H3, "H4": H4}
    proj = {}
    dims = {}
    for name, B in parts.items():
        R = _restrict(B, inside, tol)
        proj[name] = R @ R.conj().T
        dims[name] = int(R.shape[1])
    dims["interior"] = int(len(inside))
    return WoldResult(dims, proj)


def synthetic_wold_rep(kind: str, q0: complex, M: int) -> FockRep:
    """n = m = 1 models on l2 levels 0..M: ``"H2"`` (s unitary, t shift) or ``"H3"`` (s shift, t unitary)."""
    q0 = complex(q0)
    shift = fock_creation(1, M, 1)
    if kind == "H2":
        s_mat, t_mat = level_diag(1, M, q0.conjugate()), shift
    elif kind == "H3":
        s_mat, t_mat = shift, level_diag(1, M, q0)
    else:
        raise ValueError(kind)
    space = ("synthetic", kind, M)

    def fn(rs, rt):
        return np.arange(0, M + 1 - max(rs, rt))

    return FockRep(space, [SparseOp(space, s_mat)], [SparseOp(space, t_mat)], q0, "single", kind, fn)
