"""Linear equations whose unknown is a matrix, solved in matrix space.

Each equation reads trace(A_k^T X) = b_k. The solver runs the
projection loop directly on n x n states, so structure like symmetry
can be imposed by adding equations, and the least-norm solution comes
out in the Frobenius sense. Flattening everything to vectors gives an
independent route to the same numbers.
"""

import numpy as np

from absolve import core, matrixeq

rng = np.random.default_rng(4)
n = 3

terms = [rng.standard_normal((n, n)) for _ in range(5)]
rhs = rng.standard_normal(5)
system = matrixeq.MatrixSystem(terms=terms, rhs=rhs)
rep = matrixeq.solve(system, keep_iterates=True)
print("five equations in a 3 x 3 unknown")
print("  rank:", rep.rank)
print("  residuals trace(A_k^T X) - b_k:",
      np.max(np.abs([np.sum(t * rep.x) for t in terms] - rhs)))

# Independent route: flatten each A_k to a row and solve the ordinary
# vector system with the same strategy. Iterates agree step by step.
a_flat = np.array([t.ravel() for t in terms])
rep_vec = core.solve(a_flat, rhs, strategy="huang", keep_iterates=True)
worst = max(np.linalg.norm(xm.ravel() - xv)
            for xm, xv in zip(rep.iterates, rep_vec.iterates))
print("  worst iterate gap to the flattened solve:", worst)

# Least-norm property: among all solutions, Frobenius norm is minimal.
print("  Frobenius norm:", np.linalg.norm(rep.x),
      " pinv reference:",
      np.linalg.norm(np.linalg.pinv(a_flat) @ rhs))

# Secant updates: find the least-change matrix sending step to yield.
# With a symmetry constraint the result is symmetric to the bit.
print()
delta = rng.standard_normal(n)
r = rng.standard_normal(n)
j = matrixeq.quasi_newton_solve(delta, r)
print("unconstrained secant matrix")
print("  J delta - r:", np.linalg.norm(j @ delta - r))

j_sym = matrixeq.quasi_newton_solve(delta, r, constraints=("symmetry",))
print("symmetric secant matrix")
print("  J delta - r:", np.linalg.norm(j_sym @ delta - r))
print("  exactly symmetric:", bool(np.array_equal(j_sym, j_sym.T)))
print("  norm cost of the constraint:",
      np.linalg.norm(j_sym) - np.linalg.norm(j))
