"""Normal-order a few expressions, then check the same relations on truncated Fock matrices."""
import cmath

from qcuntz.fockrep import build_fock_rep, relation_residuals
from qcuntz.parser import parse_expr
from qcuntz.symalg import AlgebraConfig

cfg = AlgebraConfig.single(2, 2)
for text in ["s1' * s1", "s1' * s2", "t1 * s1", "s1' * t2", "t1' * s2 * s1'", "(s1 + t1)' * (s1 + t1)"]:
    print(f"{text:28s} -> {parse_expr(text, cfg).text()}")

print()
q0 = cmath.exp(2j * cmath.pi * 0.3)
for form in "ABC":
    rep = build_fock_rep(2, 2, 4, 4, q0, form)
    res = relation_residuals(rep, order=2)
    print(f"form {form}: dim {rep.dim}, worst residual {max(res.values()):.2e}")
