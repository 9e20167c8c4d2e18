"""One-dimensional remainder chain ``L1 <= M <= Rg`` on ``(-1, 1)``.

The lower link holds with room to spare.  The upper link compares ``M`` with
a Gagliardo-type quantity minus two exterior terms; with the exterior
coefficient taken as stated the link fails, while the coefficient
``c_{1,s/2}^2`` turns it into an identity (``Rg_exact`` below).
"""

# %%
from frachardy import bump, check_remainder_1d

for u, label in ((bump(2.0, 0.9), "bump(2, 0.9)"), (bump(3.0, 0.7), "bump(3, 0.7)")):
    for s in (0.1, 0.2):
        rep = check_remainder_1d(s, u)
        print(
            f"{label} s={s}: L1 {rep.L1:.6f}  M {rep.M:.6f}  Rg {rep.Rg:.6f}  "
            f"Rg_exact {rep.Rg_exact:.6f}  [{rep.verdict_L1_M}, {rep.verdict_M_Rg}]"
        )
