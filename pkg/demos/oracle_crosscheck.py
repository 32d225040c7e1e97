"""Determinant roots against the Hermite finite element quotient on a few shells."""
from biharmonic import oracle
from biharmonic.model import dirichlet, navier, shell
from biharmonic.spectrum import first_eigenvalue

cases = [(0.5, 2, 0, dirichlet()), (0.3, 3, 1, navier(0.0)), (0.7, 4, 2, navier(0.5)), (0.1, 5, 3, dirichlet())]
print(f"{'case':<34} {'determinant':>16} {'n=32':>16} {'n=64':>16} {'gap':>9}")
for a, N, ell, b in cases:
    det = first_eigenvalue(shell(N, a), b, ell)
    fe = [oracle.smallest_eigenvalue(oracle.assemble(ell, N, b, a, n)) for n in (32, 64)]
    label = f"a={a} N={N} l={ell} {b.encode()}"
    print(f"{label:<34} {det:16.8f} {fe[0]:16.8f} {fe[1]:16.8f} {abs(fe[1] - det) / det:9.1e}")
