"""
Counting balanced templates
===========================

Templates are connected graphs on r core vertices plus m endpoints, where the
endpoints are pairwise non-adjacent and the core is connected.  For each cell
(r, m) we count trees passing m-balance, all templates passing it, and all
templates.
"""

import time

from rcmphase import census

t0 = time.perf_counter()
print(" r  m     t     g     a")
for v in range(2, 8):
    for m in range(0, v - 1):
        row = census(v - m, m)
        print(f"{row.r:2d} {row.m:2d} {row.t:5d} {row.g:5d} {row.a:5d}")
print(f"all cells with r+m <= 7 in {time.perf_counter() - t0:.1f}s")

# Cells with r+m = 8 need an external list of connected graphs in graph6
# format, for instance from nauty:  geng -c 8 > g8.g6
#   rcmphase census --r 5 --m 3 --graph6 g8.g6
