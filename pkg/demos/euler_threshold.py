"""The Euler-type comparison problem: closed form against the P1 oracle."""
import math

from biharmonic import oracle
from biharmonic.spectrum import euler_eigenvalues, euler_threshold

a1 = euler_threshold()
print(f"a1 = exp(-pi sqrt 2) = {a1:.12f}")
print(f"{'a':>10} {'formula':>14} {'oracle n=2048':>14} {'gap':>9}  above 3/2")
for a in (0.3, 0.1, 0.03, a1, 0.005, 0.001):
    exact = euler_eigenvalues(a, 1)[0]
    disc = oracle.euler_smallest(a, 2048)
    # the minimiser beats 3/2 exactly when a > a1
    print(f"{a:10.6f} {exact:14.9f} {disc:14.9f} {abs(disc - exact):9.1e}  {exact > 1.5}")
print("check:", math.isclose(euler_eigenvalues(a1, 1)[0], 1.5, rel_tol=1e-12))
