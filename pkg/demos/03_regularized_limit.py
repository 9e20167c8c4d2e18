"""Operator on the regularized power ``(t^2 + |x|^2)^(-theta/2)`` as ``t -> 0``.

The limit is an explicit multiple of ``|x|^(-theta-2s)``; the table shows the
relative error shrinking as ``t`` halves.
"""

# %%
from frachardy import FracParams, limit_t_zero

params = FracParams(3, 0.5, 1.0)
ts = [0.2 * 2.0**-k for k in range(7)]
for x in (0.3, 0.7, 1.5):
    table = limit_t_zero(params, x, ts)
    print(f"\nx = {x}, limit = {table['limit']:.12f}")
    for row in table["rows"]:
        print(f"  t={row.t:9.6f}  value {row.value:.12f}  rel err {row.rel_error:.3e}")
    print("  strictly decreasing:", table["strictly_decreasing"])
