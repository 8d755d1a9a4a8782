"""Print K-groups for a small grid of (n, m) and compare the two computation routes."""
from qcuntz.kgroups import k_table

print(f"{'n':>3} {'m':>3} {'d':>3}  {'K0(On x Om)':12s} {'K0(quotient)':14s} {'KK1 order':>9}  routes")
for n in range(2, 7):
    for m in range(n, 7):
        row = k_table(n, m)
        print(
            f"{n:3d} {m:3d} {row['d']:3d}  {row['K0_OnOm'].text():12s} {row['K0_Mq'].text():14s} "
            f"{row['KK1_order']:9d}  {'agree' if row['routes_agree'] else 'DIFFER'}"
        )
