"""From a Frobenius matrix to ramification breaks.

Solves for the unit-root line of a rank-2 ordinary Frobenius matrix, twists its
eigenvalue to the minimal representative and reads off the breaks.
Run: python demos/01_unit_root_breaks.py
"""

from unitroot import PrimeContext, IsocrystalMatrix, PadicLaurentSeries
from unitroot import break_sequence_extract, solve_unit_root, twist_to_minimal
from unitroot.decay import decay_classify, decay_profile
from unitroot.generate import random_isocrystal, trial_rng
from unitroot.pipeline import with_window_retry

ctx = PrimeContext(3, prec=5, window=3 ** 8)
A = IsocrystalMatrix(ctx, [[PadicLaurentSeries.from_ints(ctx, d) for d in row]
                           for row in [[{0: 1}, {-1: 27}], [{-1: 27}, {0: 3}]]], [0, 1])
sol = solve_unit_root(A)
print("hand example")
print("  eps_2  =", sol.epsilon[1])
print("  lambda =", sol.lam, f"(residual level {sol.residual_level})")

# A random ordinary matrix; the window grows on demand.
A = random_isocrystal(trial_rng(7, 0), 3, (0, 1))
sol, A = with_window_retry(solve_unit_root, A)
lam_min, a = twist_to_minimal(sol.lam)
print("\nrandom ordinary matrix, prec", A.ctx.prec, "window", A.ctx.window)
print("  lambda_min has", len(lam_min), "terms")
s = break_sequence_extract(lam_min, A.ctx.prec - 1)
print("  breaks from level", s.start, ":", [str(x) for x in s.breaks])
print("  violations:", s.violations() or "none")
print("  growth class:", decay_classify(decay_profile(lam_min, A.ctx.prec - 1)).to_dict()["class"])
