"""How a candidate motion vector is scored.

Distortion is the SATD: the residual goes through 4x4 Hadamard transforms and
the coefficient magnitudes are summed. Rate is the number of exp-Golomb bits
needed to send the vector's difference from its predictor. Lambda (Q16 fixed
point) trades one against the other.
"""

import numpy as np

from esfme import lambda_from_qp, mvd_bits, rd_cost, satd8x8, sad

rng = np.random.default_rng(0)
orig = rng.integers(0, 256, size=(8, 8))
flat_error = orig + 3
noisy_error = orig + rng.integers(-3, 4, size=(8, 8))

# Equal SAD is not equal SATD: a DC offset packs into one coefficient.
for name, pred in [("constant +3", flat_error), ("random +-3", noisy_error)]:
    print(f"{name:12s} SAD {sad(orig, pred):4d}  SATD {satd8x8(orig, pred):4d}")

print("\nMVD bits for a few differences (quarter-pel units):")
for mvd in [(0, 0), (1, 0), (4, -4), (16, 3), (-100, 250)]:
    print(f"   {str(mvd):12s} {mvd_bits(mvd):2d} bits")

for qp in (22, 27, 32, 37):
    lam = lambda_from_qp(qp)
    j = rd_cost(500, (8, -4), lam)
    print(f"QP {qp}: lambda_q16 {lam:8d}  J(D=500, mvd=(8,-4)) = {j}")
