"""A 2x2 q-commuting pair, lifted three ways.

T1 = [[a, 0], [b, q a]] and T2 = [[0, 0], [d, 0]] satisfy T1 T2 = q T2 T1 for
every q.  We rescale T1 into the unit ball, then lift T2 along Schaeffer
isometric dilations, along co-isometric extensions and to the unitary level.
Run:  python3 demos/01_example_pair.py
"""
import numpy as np

from qlift import (check_lift, coiso_lift_q, example_pair_jordan, isometric_lift_q,
                   unitary_q_lift)

np.set_printoptions(precision=4, suppress=True)

q = 1j
p = example_pair_jordan(1, 0.5, 0.25, q)
print("scale applied to T1:", round(p.scale, 6))
print("T1 T2 (unscaled T1):\n", (p.scale * p.T1) @ p.T2)
print("T2 T1 (unscaled T1):\n", p.T2 @ (p.scale * p.T1))

for engine, depth in ((isometric_lift_q, 5), (coiso_lift_q, 5), (unitary_q_lift, 4)):
    r = engine(p, depth)
    cert = check_lift(r)
    print(f"\n{r.construction}: operator {r.op.shape}, "
          f"||lift|| = {r.norm_claim[0]:.12f} vs ||T2|| = {r.norm_claim[1]:.12f}")
    shown = [c for c in cert.checks if not c.label.startswith("level")]
    for c in shown[:6]:
        print(f"  {'ok ' if c.passed else 'BAD'} {c.residual:9.2e}  {c.label}")
    print(f"  ... {len(cert.checks)} checks, all pass: {cert.passed}")
