"""Bracketing the best constant by searching over bump exponents.

The quotient of every admissible profile lies above ``(b/p)^p``; the search
result is an upper bracket.  A small budget keeps this demo quick.
"""

# %%
from frachardy import FracParams, SearchSpec, minimize

params = FracParams(3, 0.5, 0.5, 2)
res = minimize(params, SearchSpec("bump_beta", ((2.0, 8.0),), budget=12, tolerance=0.05))
print(f"lower bound {res.lower_bound:.8f}")
print(f"best Q      {res.best_Q:.8f} at beta = {res.best_parameters[0]:.4f}")
print(f"gap         {res.gap:.4f} after {res.evals} evaluations")
print(res.trace_csv())
