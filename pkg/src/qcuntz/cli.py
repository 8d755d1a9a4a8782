"""Command-line front end: ``qcuntz parse`` and ``qcuntz run SUITE``.

Every suite returns a list of checks ``{"id", "anchor", "residual", "tol", "pass"}``
sorted by id.  The process exits with 0 when every check passes, 1 when some
check fails and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import cmath
import itertools
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cuntzq, fockrep, kgroups, rieffel, untwist
from .coeff import ConfigError, DomainError
from .parser import ParseError, parse_expr
from .symalg import S, T, AlgebraConfig, Element, Letter, ModeError, Monomial, expectation_gauge

SUITES = ("relations", "untwist", "rieffel", "ideals", "expectations", "witness", "ktable", "wick")

DEFAULT_TOL = 1e-10
DEFAULT_SEED = 7
Q_03 = cmath.exp(2j * cmath.pi * 0.3)


@dataclass
class SuiteConfig:
    n: int = 2
    m: int = 2
    q: complex | None = None
    theta: dict = field(default_factory=dict)
    trunc: tuple[int, int, int] = (4, 4, 5)
    tol: float | None = None
    seed: int = DEFAULT_SEED

    def validate(self):
        if self.n < 1 or self.m < 1:
            raise ConfigError("n and m must be positive")
        if any(k < 1 for k in self.trunc):
            raise ConfigError("truncation levels must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.theta and min(self.n, self.m) < 2:
            raise ConfigError("--theta needs n, m >= 2 (the quotient model uses two generators per family)")
        for (i, j) in self.theta:
            if not (1 <= i <= self.n and 1 <= j <= self.m):
                raise ConfigError(f"theta entry ({i},{j}) is outside the {self.n} x {self.m} grid")

    def qmatrix(self) -> np.ndarray:
        mat = np.ones((self.n, self.m), dtype=complex)
        for (i, j), phase in self.theta.items():
            mat[i - 1, j - 1] = cmath.exp(2j * cmath.pi * phase)
        return mat

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "q": None if self.q is None else [self.q.real, self.q.imag],
            "theta": {f"{i},{j}": v for (i, j), v in sorted(self.theta.items())},
            "trunc": list(self.trunc),
            "tol": self.tol if self.tol is not None else DEFAULT_TOL,
            "tol_override": self.tol is not None,
            "seed": self.seed,
        }


@dataclass
class Check:
    id: str
    anchor: str
    residual: float
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(math.isfinite(self.residual) and self.residual <= self.tol)

    def to_json(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "residual": self.residual, "tol": self.tol, "pass": self.passed}


class _Collector:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.checks: list[Check] = []

    def add(self, cid: str, anchor: str, residual: float, tol: float):
        self.checks.append(Check(cid, anchor, residual, self.cfg.tol if self.cfg.tol is not None else tol))


def _qtag(q: complex) -> str:
    return f"q={q.real:+.6g}{q.imag:+.6g}i"


# ----------------------------------------------------------------------------
# suites


def suite_relations(cfg: SuiteConfig, out: _Collector):
    N, M, _ = cfg.trunc
    if cfg.theta:
        qmat = cfg.qmatrix()
        rep = fockrep.build_multi_fock_rep(cfg.n, cfg.m, N, M, qmat)
        for name, val in fockrep.relation_residuals(rep, order=2).items():
            out.add(f"multi/fock/{name}", "multiparameter Fock model, relations with q_ij", val, 1e-12)
        W = max(N, M)
        theta_rep = fockrep.concrete_theta_rep(cfg.n, cfg.m, qmat, N, M, W)
        for name, val in fockrep.relation_residuals(theta_rep, order=1).items():
            out.add(f"multi/l2/{name}", "concrete l2 model of the twisted Cuntz tensor product", val, 1e-12)
        for name, val in fockrep.cuntz_residuals(theta_rep, order=1).items():
            out.add(f"multi/l2/{name}", "range sums equal 1 in the concrete l2 model", val, 1e-12)
        return
    qs = [cfg.q] if cfg.q is not None else [1.0 + 0j, Q_03, 1j]
    for q in qs:
        for form in ("A", "B", "C"):
            rep = fockrep.build_fock_rep(cfg.n, cfg.m, N, M, q, form)
            for name, val in fockrep.relation_residuals(rep, order=2).items():
                out.add(f"{_qtag(q)}/form{form}/{name}", f"Fock model form {form}, defining relations", val, 1e-12)


def suite_untwist(cfg: SuiteConfig, out: _Collector):
    _, _, L = cfg.trunc
    qs = [cfg.q] if cfg.q is not None else [0j, 0.5 + 0j, 0.5 * cmath.exp(2j * cmath.pi * 0.2)]
    for q in qs:
        for name, val in untwist.roundtrip_check(cfg.n, cfg.m, q, L).items():
            out.add(f"{_qtag(q)}/{name}", "untwisting round trip on the free model", val, 1e-10)
        for Np in range(0, min(3, L - 1) + 1):
            val = untwist.partial_sum_identity(cfg.n, cfg.m, q, L, Np)
            out.add(f"{_qtag(q)}/partial-sum N={Np}", "partial sums of the q^k s_mu tt_r s_mu^* series", val, 1e-12)


def suite_rieffel(cfg: SuiteConfig, out: _Collector):
    q = cfg.q if cfg.q is not None else Q_03
    N, M, _ = cfg.trunc
    theta = rieffel.theta_from_q(q, exact=True)
    phi = 2 * theta.t
    acfg = AlgebraConfig.single(cfg.n, cfg.m)
    a = rieffel.GradedOperator((1, 0), Element.s(acfg, 1))
    b = rieffel.GradedOperator((0, 1), Element.t(acfg, 1))
    ab = rieffel.twisted_product(a, b, theta)
    ba = rieffel.twisted_product(b, a, theta)
    out.add("phase/(1,0)x(0,1)", "twisted product phase exp(-i pi phi)", abs(ab.turns + phi / 2), 0.0)
    out.add("phase/(0,1)x(1,0)", "twisted product phase exp(+i pi phi)", abs(ba.turns - phi / 2), 0.0)
    out.add("phase/commutator", "b._Theta a = exp(2 pi i phi) a._Theta b", abs(ba.turns - ab.turns - phi), 0.0)
    aa = rieffel.twisted_product(a, a, theta)
    out.add("phase/same-degree", "<Theta p, p> = 0", abs(aa.turns), 0.0)
    samples = [
        a,
        b,
        rieffel.GradedOperator((0, 0), Element.one(acfg) - Element.Q(acfg)),
        rieffel.GradedOperator((-1, 1), Element.t(acfg, cfg.m) * Element.s(acfg, cfg.n, starred=True)),
        rieffel.GradedOperator((2, -1), Element.s(acfg, 1) ** 2 * Element.t(acfg, 1, starred=True)),
    ]
    out.add("double-deformation", "deforming by Theta then -Theta is the identity", rieffel.double_deform_check(samples, theta), 0.0)
    base = fockrep.build_fock_rep(cfg.n, cfg.m, N, M, 1.0, "A")
    deformed = rieffel.deform_rep(base, rieffel.theta_from_q(q))
    ref = fockrep.build_fock_rep(cfg.n, cfg.m, N, M, q, "A")
    dev = max(
        float(abs(x.mat - y.mat).max()) if (x.mat - y.mat).nnz else 0.0
        for x, y in zip(deformed.S + deformed.T, ref.S + ref.T)
    )
    out.add("deform-rep/form A", "deformed untwisted Fock pair equals Fock model form A", dev, 1e-13)
    for name, val in rieffel.crossed_untwist_check(cfg.n, cfg.m, q, N, M).items():
        out.add(f"crossed-untwist/{name}", "crossed-product untwisting by the grading unitary", val, 1e-13)


def _ideal_cases(acfg: AlgebraConfig):
    one = Element.one(acfg)
    Q = Element.Q(acfg)
    P = Element.P(acfg)
    s1 = Element.s(acfg, 1)
    t1 = Element.t(acfg, 1)
    return [
        ("(1-Q)(1-P)", (one - Q) * (one - P), {"in_Iq": True, "in_I1": True, "in_I2": True, "in_Mq": True}),
        ("1-Q", one - Q, {"in_Iq": False, "in_I1": True, "in_I2": False, "in_Mq": True}),
        ("1-P", one - P, {"in_Iq": False, "in_I1": False, "in_I2": True, "in_Mq": True}),
        ("(1-Q)+(1-P)", (one - Q) + (one - P), {"in_Iq": False, "in_I1": False, "in_I2": False, "in_Mq": True}),
        ("s1 (1-Q) t1^*", s1 * (one - Q) * t1.adjoint(), {"in_Iq": False, "in_I1": True, "in_I2": False, "in_Mq": True}),
        ("t1 (1-P)(1-Q) s1^*", t1 * (one - P) * (one - Q) * s1.adjoint(), {"in_Iq": True, "in_I1": True, "in_I2": True, "in_Mq": True}),
        ("1", one, {"in_Iq": False, "in_I1": False, "in_I2": False, "in_Mq": False}),
        ("s1 t1", s1 * t1, {"in_Iq": False, "in_I1": False, "in_I2": False, "in_Mq": False}),
    ]


def suite_ideals(cfg: SuiteConfig, out: _Collector):
    acfg = AlgebraConfig.single(cfg.n, cfg.m)
    for label, x, expected in _ideal_cases(acfg):
        got = cuntzq.ideal_membership(x)
        wrong = sum(got[k] != v for k, v in expected.items())
        out.add(f"membership/{label}", "ideal membership via Cuntz-quotient canonical forms", wrong, 0.0)
    count, failures = cuntzq.commutation_phase_residual(acfg, 2, "derived")
    out.add("matrix-unit phase/derived", "t t^* E_{mu nu} = q^{(|mu1|-|nu1|)(|mu2|-|nu2|)} E_{mu nu} t t^*", len(failures), 0.0)
    E = cuntzq.matrix_units_toeplitz(acfg, "S", 1)
    bad = 0
    for (a, b), x in E.items():
        for (c, d), y in E.items():
            expected = E[(a, d)] if b == c else Element.zero(acfg)
            bad += (x * y) != expected
    out.add("matrix-units/S", "E_{mu nu} E_{alpha beta} = delta E_{mu beta} in the Toeplitz algebra", bad, 0.0)


def _basis_monomials(acfg: AlgebraConfig, max_s: int, max_t: int, balanced: bool) -> list:
    def swords(k):
        return [tuple(Letter(S, i) for i in w) for w in itertools.product(range(1, acfg.n + 1), repeat=k)]

    def twords(k):
        return [tuple(Letter(T, j) for j in w) for w in itertools.product(range(1, acfg.m + 1), repeat=k)]

    out = []
    for a, d in itertools.product(range(max_s + 1), repeat=2):
        for b, c in itertools.product(range(max_t + 1), repeat=2):
            if balanced and (a != d or b != c):
                continue
            for mu, mup, nu, nup in itertools.product(swords(a), twords(b), swords(d), twords(c)):
                out.append(Monomial(mu + mup, nu + nup))
    return out


def suite_expectations(cfg: SuiteConfig, out: _Collector):
    acfg = AlgebraConfig.single(cfg.n, cfg.m)
    one = acfg.one_coeff()
    monos = _basis_monomials(acfg, 1, 1, balanced=False)
    elements = [Element(acfg, {mono: one}) for mono in monos]
    bad = {"phi1": 0, "phi2": 0, "phi": 0, "compose": 0}
    for x in elements:
        for which in ("phi1", "phi2", "phi"):
            e = expectation_gauge(x, which)
            bad[which] += expectation_gauge(e, which) != e
        p = expectation_gauge(x, "phi")
        c12 = expectation_gauge(expectation_gauge(x, "phi2"), "phi1")
        c21 = expectation_gauge(expectation_gauge(x, "phi1"), "phi2")
        bad["compose"] += (c12 != p) + (c21 != p)
    for which, val in bad.items():
        out.add(f"expectation/{which}", "gauge expectations are idempotent and commute", val, 0.0)
    if cfg.n >= 2 and cfg.m >= 2:
        w = cuntzq.implementing_isometry(acfg, 1, 1)
        wH = w.adjoint()
        out.add("isometry/w^*w", "w^* w = 1 in the Cuntz quotient", 0 if cuntzq.quotient_equal(wH * w, Element.one(acfg)) else 1, 0.0)
        comm = sum(not cuntzq.quotient_equal(w * x, x * w) for x in (Element(acfg, {m: one}) for m in _basis_monomials(acfg, 1, 1, True)))
        out.add("isometry/commutes with F_{1,1}", "w commutes with the level-(1,1) matrix units", comm, 0.0)
        impl = sum(not cuntzq.quotient_equal(wH * x * w, expectation_gauge(x, "phi")) for x in elements)
        out.add("isometry/phi(y)=w^*yw", "phi(y) = w^* y w for lengths <= (1,1)", impl, 0.0)
    for k, l in ((1, 1), (2, 1)):
        out.add(f"matrix-units/F_{{{k},{l}}}", "level-(k,l) monomials are matrix units in the quotient", _matrix_unit_defects(acfg, k, l), 0.0)


def _matrix_unit_defects(acfg: AlgebraConfig, k: int, l: int) -> int:
    pairs = cuntzq._pair_words(acfg, k, l)
    one = acfg.one_coeff()
    units = {
        (i, j): Element(acfg, {Monomial(a[0] + a[1], b[0] + b[1]): one})
        for i, a in enumerate(pairs)
        for j, b in enumerate(pairs)
    }
    bad = 0
    size = len(pairs)
    for (i, j), x in units.items():
        bad += x.adjoint() != units[(j, i)]
        for jj in range(size):
            for kk in range(size):
                prod = x * units[(jj, kk)]
                expected = units[(i, kk)] if j == jj else Element.zero(acfg)
                bad += prod != expected
    total = Element.zero(acfg)
    for i in range(size):
        total = total + units[(i, i)]
    bad += not cuntzq.quotient_equal(total, Element.one(acfg))
    return bad


def suite_witness(cfg: SuiteConfig, out: _Collector):
    if cfg.theta:
        acfg = AlgebraConfig.multi(cfg.n, cfg.m).specialized(cfg.qmatrix())
    else:
        q = cfg.q if cfg.q is not None else Q_03
        acfg = AlgebraConfig.single(cfg.n, cfg.m).specialized(q)
    rng = np.random.default_rng(cfg.seed)
    for k in range(20):
        x = cuntzq.random_level_element(acfg, 1, 1, rng)
        res = cuntzq.pure_infinite_witness(x)
        out.add(f"witness/{k:02d}", "a x b = 1 in the Cuntz quotient", res.residual, 1e-8)


def suite_ktable(cfg: SuiteConfig, out: _Collector) -> dict:
    disagree = sum(not kgroups.k_table(n, m)["routes_agree"] for n in range(2, 31) for m in range(2, 31))
    out.add("routes-agree/2..30", "six-term and Kunneth routes give the same K-groups", disagree, 0.0)
    n, m = max(cfg.n, 2), max(cfg.m, 2)
    table = kgroups.k_table(n, m)
    d = math.gcd(n - 1, m - 1)
    cyc = kgroups.FgAbGroup.cyclic(d)
    out.add("d", "d = gcd(n-1, m-1)", abs(table["d"] - d), 0.0)
    out.add("K0_OnOm", "K_0 of the tensor product is Z/d", int(table["K0_OnOm"] != cyc), 0.0)
    out.add("K1_OnOm", "K_1 of the tensor product is Z/d", int(table["K1_OnOm"] != cyc), 0.0)
    out.add("K0_Mq", "K_0 of the largest ideal is Z/d + Z", int(table["K0_Mq"] != cyc + kgroups.FgAbGroup.Z()), 0.0)
    out.add("K1_Mq", "K_1 of the largest ideal vanishes", int(not table["K1_Mq"].is_trivial), 0.0)
    out.add("KK1_order", "|KK_1| = d^3 from the UCT sequence", abs(table["KK1_order"] - d**3), 0.0)
    out.add("Ext_trivial", "Ext vanishes exactly when d = 1", int(table["Ext_trivial"] != (d == 1)), 0.0)
    return kgroups.k_table_json(n, m)


def suite_wick(cfg: SuiteConfig, out: _Collector):
    shapes = [(cfg.n, cfg.m)] if cfg.q is not None else [(1, 1), (2, 2)]
    qs = [cfg.q] if cfg.q is not None else [0.5 + 0j, Q_03]
    for (n, m), q in itertools.product(shapes, qs):
        T = fockrep.wick_T(n, m, q)
        out.add(f"{_qtag(q)}/n={n},m={m}/norm", "||T|| = |q|", abs(fockrep.operator_norm(T) - abs(q)), 1e-12)
        out.add(f"{_qtag(q)}/n={n},m={m}/braid", "standard braid relation for T", fockrep.braid_residual(T, "standard"), 1e-12)


_SUITE_FUNCS = {
    "relations": suite_relations,
    "untwist": suite_untwist,
    "rieffel": suite_rieffel,
    "ideals": suite_ideals,
    "expectations": suite_expectations,
    "witness": suite_witness,
    "ktable": suite_ktable,
    "wick": suite_wick,
}


def run_suite(name: str, cfg: SuiteConfig) -> tuple[int, dict]:
    """Run one suite (or ``all``) and return ``(exit_code, report)``."""
    if name not in SUITES and name != "all":
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    cfg.validate()
    out = _Collector(cfg)
    report = {"suite": name, "config": cfg.to_json()}
    names = SUITES if name == "all" else (name,)
    for suite in names:
        sub = _Collector(cfg)
        extra = _SUITE_FUNCS[suite](cfg, sub)
        for c in sub.checks:
            if name == "all":
                c.id = f"{suite}/{c.id}"
            out.checks.append(c)
        if suite == "ktable":
            report["report"] = extra
    out.checks.sort(key=lambda c: c.id)
    report["checks"] = [c.to_json() for c in out.checks]
    code = 0 if all(c.passed for c in out.checks) else 1
    return code, report


# ----------------------------------------------------------------------------
# argument parsing


def parse_q(text: str) -> complex:
    """``0.5``, ``1j``, ``0.3+0.4j``, ``R@PHI`` (``R exp(2 pi i PHI)``) or ``@PHI``."""
    text = text.strip()
    if "@" in text:
        r, _, phi = text.partition("@")
        radius = float(r) if r else 1.0
        return radius * cmath.exp(2j * cmath.pi * float(phi))
    return complex(text.replace(" ", ""))


def parse_theta(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"--theta expects i,j=phase, got {item!r}")
        i, _, j = key.partition(",")
        out[(int(i), int(j))] = float(val)
    return out


def parse_trunc(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError("--trunc expects N,M,L")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcuntz", description="Twisted Cuntz-Toeplitz toolkit: parse expressions, run verification suites.")
    sub = p.add_subparsers(dest="command", required=True)
    pp = sub.add_parser("parse", help="normal-order an expression")
    pp.add_argument("expr")
    pp.add_argument("--mode", choices=("unimodular", "generic", "multi"), default="unimodular")
    pp.add_argument("--n", type=int, default=2)
    pp.add_argument("--m", type=int, default=2)
    pp.add_argument("--json", action="store_true", help="print the Element as JSON")
    pr = sub.add_parser("run", help="run a verification suite")
    pr.add_argument("suite", choices=SUITES + ("all",))
    pr.add_argument("--n", type=int, default=2)
    pr.add_argument("--m", type=int, default=2)
    pr.add_argument("--q", type=str, default=None, help="complex literal, R@PHI or @PHI (R exp(2 pi i PHI))")
    pr.add_argument("--theta", action="append", default=[], metavar="I,J=PHASE", help="q_ij = exp(2 pi i PHASE); repeatable")
    pr.add_argument("--trunc", type=str, default="4,4,5", metavar="N,M,L")
    pr.add_argument("--tol", type=float, default=None, help="override every check threshold")
    pr.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pr.add_argument("--json", type=str, default=None, metavar="PATH", help="write the JSON report here ('-' for stdout)")
    return p


def _print_summary(report: dict, stream):
    checks = report["checks"]
    failed = [c for c in checks if not c["pass"]]
    for c in checks:
        mark = "ok  " if c["pass"] else "FAIL"
        print(f"{mark} {c['id']}  residual={c['residual']:.3e}  tol={c['tol']:.1e}", file=stream)
    print(f"{report['suite']}: {len(checks) - len(failed)}/{len(checks)} checks passed", file=stream)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "parse":
            makers = {
                "unimodular": AlgebraConfig.single,
                "generic": AlgebraConfig.generic,
                "multi": AlgebraConfig.multi,
            }
            acfg = makers[args.mode](args.n, args.m)
            x = parse_expr(args.expr, acfg)
            print(x.to_json() if args.json else x.text())
            return 0
        cfg = SuiteConfig(
            n=args.n,
            m=args.m,
            q=None if args.q is None else parse_q(args.q),
            theta=parse_theta(args.theta),
            trunc=parse_trunc(args.trunc),
            tol=args.tol,
            seed=args.seed,
        )
        code, report = run_suite(args.suite, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, DomainError, ModeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.json == "-":
        print(text)
        _print_summary(report, sys.stderr)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        _print_summary(report, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
