"""Co-isometric extensions X1, X2, qXq with X1 X2 = X2 qXq, and what truncation costs.

The commutation and extension identities hold to rounding.  The conjugated
block E = D^-1 V D is co-isometric only in the infinite model: truncating V
leaves a defect on the last chain level, and the dense D^-1 carries part of
it into the interior.  At a fixed level the leaked defect shrinks as the depth
grows, but the levels next to the cut keep a defect of roughly constant size,
so the worst interior value does not improve with depth.  It is exactly zero
when the lift's last block column sits on its diagonal block.
Run:  python3 demos/03_coextension_truncation.py
"""
import numpy as np

from qlift import GeneratorSpec, coiso_lift_q, example_pair_jordan, q_coextension, random_qpair
from qlift.linalg import operator_norm

p = example_pair_jordan(1, 0.5, 0.25, 0.5)
print("depth  commutation   X2 coiso    E defect (interior)   E defect: first levels .. last interior levels")
for N in (2, 4, 8, 12):
    t = q_coextension(p, N, 2)
    c = t.certificate
    lv = t.meta["E_defect_by_level"]
    prof = " ".join(f"{v:.1e}" for v in lv[:2]) + " .. " + " ".join(f"{v:.1e}" for v in lv[-3:-1])
    print(f"{N:5d}  {c['X1 X2 = q X2 X_q (interior)']:11.1e}  {c['X2 X2* = I (interior)']:9.1e}"
          f"  {c['E E* = I (interior)']:19.2e}   {prof}")

print("\nrandom single-run pairs:")
for seed in range(3):
    p = random_qpair(GeneratorSpec("random", 3, 0.7, seed), t2_norm=0.9)
    X = coiso_lift_q(p, 4).op
    above_diag = operator_norm(X[:-p.dim, -p.dim:])
    t = q_coextension(p, 4, 2)
    print(f"  seed {seed}: last column above diagonal {above_diag:.1e}, "
          f"E defect {t.certificate['E E* = I (interior)']:.1e}, all checks pass {t.passes()}")
