"""The two factorization tools every lift is built from.

Douglas: A = B Z with ||Z|| <= 1 exactly when AA* <= BB*.
Parrott: the free corner of [[A, B], [C, ?]] can be chosen so the whole
matrix has norm max(||[A; C]||, ||[A, B]||), which no choice can beat.
Run:  python3 demos/02_completions.py
"""
import numpy as np

from qlift import douglas_solve, operator_norm, parrott_complete
from qlift.errors import OrderViolated

rng = np.random.default_rng(3)

B = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
C = rng.standard_normal((3, 2))
C *= 0.8 / operator_norm(C)
A = B @ C
Z = douglas_solve(A, B)
print(f"Douglas: ||BZ - A|| = {operator_norm(B @ Z - A):.1e}, ||Z|| = {operator_norm(Z):.4f}")
try:
    douglas_solve(1.5 * B, B)
except OrderViolated as exc:
    print("Douglas with A = 1.5 B is refused:", exc.hypothesis)

a, b, c = 0.5, 0.5, 0.5
D, mu = parrott_complete([[a]], [[b]], [[c]])
print(f"\nParrott corner for a = b = c = 1/2: D = {D[0, 0].real:+.6f}, norm {mu:.6f}")
xs = np.linspace(-2, 2, 4001)
norms = [operator_norm(np.array([[a, b], [c, x]])) for x in xs]
i = int(np.argmin(norms))
print(f"brute force over real corners: best x = {xs[i]:+.4f}, norm {norms[i]:.6f}")
