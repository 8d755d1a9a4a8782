"""Finitely generated abelian groups and the K-theory bookkeeping built on them.

Groups are kept in invariant-factor form ``Z^r + Z/d_1 + ... + Z/d_k`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``.  Everything reduces to the
Smith normal form of small integer matrices, implemented here over Python
integers so that no overflow can occur.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

__all__ = [
    "smith_normal_form",
    "FgAbGroup",
    "cokernel",
    "induced_map_groups",
    "ab_functor",
    "cuntz_k_groups",
    "tensor_k_six_term",
    "tensor_k_kunneth",
    "k_table",
    "k_table_json",
]


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _as_rows(M) -> list[list[int]]:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d integer matrix")
    return [[int(x) for x in row] for row in arr.tolist()]


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(U, D, V)`` with ``D = U @ M @ V`` diagonal, ``U`` and ``V`` unimodular.

    The diagonal is non-negative and forms a divisibility chain, zeros last.
    Matrices are object arrays of Python ints.
    """
    A = _as_rows(M)
    r = len(A)
    c = len(A[0]) if r else 0
    U = _identity(r)
    V = _identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        entries = [(abs(A[i][j]), i, j) for i in range(t, r) for j in range(t, c) if A[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    obj = lambda X, shape: np.array(X, dtype=object).reshape(shape)  # noqa: E731
    return obj(U, (r, r)), obj(A, (r, c)), obj(V, (c, c))


def _diagonal(D: np.ndarray) -> list[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank`` plus cyclic torsion in invariant-factor form."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        tors = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in tors) or any(b % a for a, b in zip(tors, tors[1:])):
            raise ValueError(f"torsion {tors} is not an invariant-factor chain; use FgAbGroup.from_orders")
        object.__setattr__(self, "torsion", tors)
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbGroup":
        """Direct sum of cyclic groups ``Z/k`` (``k = 0`` means ``Z``; ``k = 1`` is trivial)."""
        orders = [abs(int(k)) for k in orders]
        if not orders:
            return cls()
        return cokernel(np.diag(np.array(orders, dtype=object)))

    @classmethod
    def cyclic(cls, k: int) -> "FgAbGroup":
        return cls.from_orders([k])

    @classmethod
    def Z(cls) -> "FgAbGroup":
        return cls(1, ())

    def summands(self) -> list[int]:
        """Cyclic decomposition as orders, ``0`` standing for ``Z``."""
        return list(self.torsion) + [0] * self.free_rank

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_orders(self.summands() + other.summands())

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def text(self) -> str:
        parts = [f"Z/{d}Z" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.text()


def cokernel(R) -> FgAbGroup:
    """``Z^rows / (column span of R)``."""
    R = np.asarray(R, dtype=object)
    rows = R.shape[0]
    if R.size == 0:
        return FgAbGroup(rows, ())
    _, D, _ = smith_normal_form(R)
    diag = _diagonal(D)
    nonzero = [x for x in diag if x]
    tors = tuple(x for x in nonzero if x > 1)
    return FgAbGroup(rows - len(nonzero), tors)


def _integer_kernel(A: np.ndarray) -> np.ndarray:
    """Basis (columns) of ``{x in Z^cols : A x = 0}``."""
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.array(_identity(cols), dtype=object).reshape(cols, cols)
    _, D, V = smith_normal_form(A)
    rank = sum(1 for x in _diagonal(D) if x)
    return V[:, rank:]


def _solve_in_lattice(K: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer ``y`` with ``K y = b`` for a full-column-rank basis ``K``."""
    U, D, V = smith_normal_form(K)
    ub = U.dot(b)
    k = K.shape[1]
    z = []
    for i in range(k):
        d = int(D[i, i])
        if int(ub[i]) % d:
            raise ValueError("vector is not in the lattice")
        z.append(int(ub[i]) // d)
    if any(int(x) for x in ub[k:]):
        raise ValueError("vector is not in the lattice")
    return V.dot(np.array(z, dtype=object))


def _relations(R, rows: int) -> np.ndarray:
    R = np.asarray(R if R is not None else [], dtype=object)
    if R.size == 0:
        return np.zeros((rows, 0), dtype=object)
    return R.reshape(rows, -1)


def induced_map_groups(F, src_rel, tgt_rel) -> tuple[FgAbGroup, FgAbGroup]:
    """Kernel and cokernel of the map ``Z^a/Im(src_rel) -> Z^b/Im(tgt_rel)`` induced by ``F`` (b x a).

    The cokernel is presented by ``[tgt_rel | F]``.  The kernel is the lattice
    ``{x : F x in Im(tgt_rel)}`` modulo ``Im(src_rel)``.
    """
    F = np.asarray(F, dtype=object)
    b, a = F.shape
    Rs = _relations(src_rel, a)
    Rt = _relations(tgt_rel, b)
    coker = cokernel(np.hstack([Rt, F]) if Rt.shape[1] else F)
    if Rt.shape[1]:
        stacked = np.hstack([F, -Rt])
    else:
        stacked = F
    ker_full = _integer_kernel(stacked)
    L = ker_full[:a, :]
    # drop dependent columns by re-basing through SNF of L
    if L.shape[1]:
        U, D, V = smith_normal_form(L)
        rank = sum(1 for x in _diagonal(D) if x)
        L = L.dot(V)[:, :rank]
    if L.shape[1] == 0:
        return FgAbGroup(), coker
    if Rs.shape[1]:
        rel = np.column_stack([_solve_in_lattice(L, Rs[:, j]) for j in range(Rs.shape[1])])
        ker = cokernel(rel)
    else:
        ker = FgAbGroup(L.shape[1], ())
    return ker, coker


# ----------------------------------------------------------------------------
# functors on cyclic summands


def _cyclic_rule(op: str, a: int, b: int) -> int:
    """Order of ``op(C_a, C_b)`` for cyclic groups, ``0`` meaning ``Z``; returns ``1`` for the trivial group."""
    if op == "tensor":
        if a == 0:
            return b
        if b == 0:
            return a
        return gcd(a, b)
    if op == "tor":
        if a == 0 or b == 0:
            return 1
        return gcd(a, b)
    if op == "hom":
        if a == 0:
            return b
        if b == 0:
            return 1
        return gcd(a, b)
    if op == "ext":
        if a == 0:
            return 1
        if b == 0:
            return a
        return gcd(a, b)
    raise ValueError(f"unknown functor {op!r}")


def ab_functor(op: str, A: FgAbGroup, B: FgAbGroup) -> FgAbGroup:
    """``A (x) B``, ``Tor(A, B)``, ``Hom(A, B)`` or ``Ext(A, B)``; the first argument is the contravariant one for hom/ext."""
    orders = [_cyclic_rule(op, a, b) for a in A.summands() for b in B.summands()]
    return FgAbGroup.from_orders([o for o in orders if o != 1])


# ----------------------------------------------------------------------------
# K-theory tables


def cuntz_k_groups(n: int) -> tuple[FgAbGroup, FgAbGroup]:
    """K_0 and K_1 of the Cuntz algebra on ``n`` generators: cokernel and kernel of ``1 - n`` on ``Z``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ker, coker = induced_map_groups([[1 - n]], None, None)
    return coker, ker


def tensor_k_six_term(n: int, m: int) -> tuple[FgAbGroup, FgAbGroup]:
    """K_0 = cokernel and K_1 = kernel of multiplication by ``m - 1`` on ``Z/(n-1)``."""
    if n < 2 or m < 2:
        raise ValueError("n, m must be at least 2")
    ker, coker = induced_map_groups([[m - 1]], [[n - 1]], [[n - 1]])
    return coker, ker


def tensor_k_kunneth(KA: tuple[FgAbGroup, FgAbGroup], KB: tuple[FgAbGroup, FgAbGroup]) -> tuple[FgAbGroup, FgAbGroup]:
    """Kunneth formula, evaluated only when one factor has vanishing K_1 (the sequences then split)."""
    (A0, A1), (B0, B1) = KA, KB
    if not (A1.is_trivial or B1.is_trivial):
        raise ValueError("Kunneth evaluation is only supported when one factor has K_1 = 0")
    k0 = (
        ab_functor("tensor", A0, B0)
        + ab_functor("tensor", A1, B1)
        + ab_functor("tor", A0, B1)
        + ab_functor("tor", A1, B0)
    )
    k1 = (
        ab_functor("tensor", A0, B1)
        + ab_functor("tensor", A1, B0)
        + ab_functor("tor", A0, B0)
        + ab_functor("tor", A1, B1)
    )
    return k0, k1


def _quotient_k_groups(K_quot: tuple[FgAbGroup, FgAbGroup], d: int) -> tuple[FgAbGroup, FgAbGroup]:
    """K-groups of the ideal in ``0 -> ideal -> Toeplitz -> quotient -> 0``.

    The Toeplitz algebra has ``K_0 = Z`` (generated by the unit) and ``K_1 = 0``;
    the quotient has ``K_0 = K_1 = Z/d`` with the unit class generating ``K_0``.
    Six-term exactness gives ``K_1(ideal) = coker(Z -> Z/d)`` and
    ``0 -> K_1(quotient) -> K_0(ideal) -> ker(Z -> Z/d) -> 0``, which splits
    because the kernel is free.
    """
    unit_ker, unit_coker = induced_map_groups([[1]], None, [[d]])
    return K_quot[1] + unit_ker, unit_coker


def k_table(n: int, m: int) -> dict:
    """The K-theory and Ext report for the pair ``(n, m)``."""
    if n < 2 or m < 2:
        raise ValueError("n, m must be at least 2")
    d = gcd(n - 1, m - 1)
    On = cuntz_k_groups(n)
    Om = cuntz_k_groups(m)
    six = tensor_k_six_term(n, m)
    kun = tensor_k_kunneth(On, Om)
    toeplitz = (FgAbGroup.Z(), FgAbGroup())
    ideal = _quotient_k_groups(six, d)
    A0, A1 = six
    B0, B1 = ideal
    ext_part = ab_functor("ext", A0, B0) + ab_functor("ext", A1, B1)
    hom_part = ab_functor("hom", A0, B1) + ab_functor("hom", A1, B0)
    kk1_order = ext_part.order * hom_part.order
    return {
        "n": n,
        "m": m,
        "d": d,
        "K0_On": On[0],
        "K1_On": On[1],
        "K0_Om": Om[0],
        "K1_Om": Om[1],
        "K0_OnOm": six[0],
        "K1_OnOm": six[1],
        "K0_OnOm_kunneth": kun[0],
        "K1_OnOm_kunneth": kun[1],
        "routes_agree": six == kun,
        "K0_E": toeplitz[0],
        "K1_E": toeplitz[1],
        "K0_Mq": ideal[0],
        "K1_Mq": ideal[1],
        "KK1_ext_part": ext_part,
        "KK1_hom_part": hom_part,
        "KK1_order": kk1_order,
        "Ext_trivial": kk1_order == 1,
    }


def k_table_json(n: int, m: int) -> dict:
    """``k_table`` with groups rendered as text, ready for ``json.dumps``."""
    out = {}
    for key, val in k_table(n, m).items():
        out[key] = val.text() if isinstance(val, FgAbGroup) else val
    return out
