"""Seeded sweeps over random Frobenius matrices.

Compares ordinary (0,1) matrices with slope gap 2 matrices, for random and
split instances.  Each sweep is reproducible from its seed.
Run: python demos/03_seeded_sweep.py [seed]
"""

import sys

from unitroot.pipeline import run_sweep

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
for slopes, family in (((0, 1), "random"), ((0, 2), "random"), ((0, 2), "split")):
    agg = run_sweep(seed, 10, slopes, family=family).aggregate()
    print(f"slopes {slopes} {family:6s}: fits {agg['fit_success']}/10, "
          f"untagged {agg['untagged_fit_success']}/10, classes {agg['decay_classes']}")
