"""Hardy-weight constant: quadrature against its gamma-ratio closed form.

Run with ``python3 demos/01_constants.py``.
"""

# %% The constant b(N, s, theta) two ways
from frachardy import FracParams, b_constant, fs_closed_p2, fs_constant, s_one_table

print(f"{'N':>2} {'s':>5} {'theta':>6} {'quadrature':>18} {'closed form':>18} {'rel diff':>9}")
for N, s, theta in [(1, 0.25, 0.2), (2, 0.5, 0.5), (3, 0.5, 1.0), (5, 0.75, 1.75)]:
    rep = b_constant(FracParams(N, s, theta))
    print(f"{N:>2} {s:>5} {theta:>6} {rep.value:18.14f} {rep.closed_form:18.14f} {rep.rel_diff:9.1e}")

# %% The value for (3, 1/2, 1) is 2/pi
import math

print("\nb(3, 0.5, 1) * pi / 2 =", b_constant(FracParams(3, 0.5, 1.0)).value * math.pi / 2)

# %% Whole-space constant at p = 2: angular quadrature vs gamma ratios
for N, s in [(1, 0.25), (1, 0.4), (3, 0.5)]:
    rep = fs_constant(N, s, 2.0)
    print(f"N={N} s={s}: quadrature {rep.value:.12f}  closed {fs_closed_p2(N, s):.12f}")

# %% Approach to the local case as s -> 1: the gap halves with 1 - s
print("\n     s        value   |value - limit|   ratio")
for row in s_one_table(5, 1.0, [0.9, 0.95, 0.975, 0.9875]):
    ratio = "" if row.ratio is None else f"{row.ratio:.4f}"
    print(f"{row.s:7.4f} {row.value:12.8f} {row.abs_diff:14.3e}   {ratio}")
