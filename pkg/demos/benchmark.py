"""
==========================
Timing on random instances
==========================

Random pairs for which no pretest is conclusive, half inside and half
outside, with the minimal factor kept away from 1. The CSV written here is
the same as ``ellincl bench`` produces.
"""

# %%

import sys

from ellincl import bench

dims = [3, 10, 30, 100]
records = bench.run_bench(dims, cases=40, seed=0, repetitions=5)
for n, s in bench.summarize(records).items():
    print(f"n={n:>3}: median {s['median_ns'] / 1e3:8.1f} us   mean {s['mean_ns'] / 1e3:8.1f} us")

# %%
# Exits of the bisection across the corpus.
from collections import Counter

print(Counter((r.label, r.exit) for r in records))

# %%
if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(bench.records_to_csv(records))
