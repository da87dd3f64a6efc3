"""
Diagram point sets and their upper boundary
===========================================

Every connected non-flat partition of the grid [n] x [r] glues n copies of a
template into a quotient graph.  Each diagram lands on an integer point
(vertices lost, edges lost).  The upper convex boundary of that cloud decides
which diagrams dominate the n-th cumulant for a given decay exponent.
"""

from fractions import Fraction
from pathlib import Path

from rcmphase import leading_points, parse_graph_spec, sigma_set, upper_hull
from rcmphase.hull import sigma_svg

triangle = parse_graph_spec("r=3 m=0 edges=1-2,2-3,3-1")

# the point sets grow quickly with n, but stay cheap to enumerate
for n in (2, 3, 4):
    s = sigma_set(triangle, n)
    chain = upper_hull(s)
    print(f"n={n}: {len(s.points)} points, {sum(s.multiplicity.values())} diagrams")
    print("   boundary vertices", chain.vertices, "slopes", [str(t) for t in chain.slopes()])

# The triangle is balanced, so the boundary is one segment of slope e/(r-1).
# Which end leads depends on 1/alpha against that slope.
for alpha in (Fraction(1, 2), Fraction(2, 3), Fraction(1)):
    print(f"alpha={alpha}: leading points at n=3 ->", leading_points(triangle, 3, alpha))

# A triangle with a pendant edge is not balanced: its boundary bends.
paw = parse_graph_spec("r=4 m=0 edges=1-2,2-3,3-4,1-3")
print("paw n=2 boundary:", upper_hull(sigma_set(paw, 2)).vertices)

# SVG pictures: black points, red upper boundary
out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
(out / "triangle_n4.svg").write_text(sigma_svg(sigma_set(triangle, 4)))
(out / "paw_n2.svg").write_text(sigma_svg(sigma_set(paw, 2)))
print("wrote", sorted(p.name for p in out.glob("*.svg")))
