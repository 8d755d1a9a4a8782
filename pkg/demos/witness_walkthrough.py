"""Build a random level-(1,1) element of the quotient and find a, b with a x b = 1."""
import cmath

import numpy as np

from qcuntz.cuntzq import implementing_isometry, pure_infinite_witness, quotient_equal, random_level_element
from qcuntz.symalg import AlgebraConfig, Element, adjoint

cfg = AlgebraConfig.single(2, 2).specialized(cmath.exp(2j * cmath.pi * 0.3))
w = implementing_isometry(AlgebraConfig.single(2, 2), 1, 1)
print("w =", w.text())
print("w* w == 1 in the quotient:", quotient_equal(adjoint(w) * w, Element.one(w.config)))

rng = np.random.default_rng(7)
for i in range(5):
    x = random_level_element(cfg, 1, 1, rng)
    res = pure_infinite_witness(x)
    print(f"sample {i}: {len(x.terms)} terms, |a x b - 1| = {res.residual:.2e}")
