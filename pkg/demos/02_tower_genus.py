"""Genus growth in a Z_3-tower ramified at one point.

With upper breaks s_n = (3^n - 1)/2 the genera are an exact quadratic in 3^n.
Run: python demos/02_tower_genus.py
"""

from unitroot import BreakSequence, TowerRamificationData
from unitroot import different_of_level, fit_genus_polynomials, genus_sequence, lower_from_upper

s = BreakSequence(tuple((3 ** n - 1) // 2 for n in range(1, 7)), 3)
print("upper breaks:", [int(x) for x in s.breaks])
print("lower breaks:", [int(x) for x in lower_from_upper(s).values])
print("differents: ", [int(different_of_level(s, n)) for n in range(1, 7)])

g = genus_sequence(TowerRamificationData(0, 3, (("P", s),)), 6)
print("\n n   g_n")
for n, v in enumerate(g.values):
    print(f"{n:2d}  {v}")

fit = fit_genus_polynomials(g, m=1, d=1, r=1)
print("\ng_n = a(3^n) with a(x) coefficients (low to high):", [str(c) for c in fit.polys[0]])
print("exact from n =", fit.onset)
