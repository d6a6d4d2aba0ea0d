"""Packing points on the unit sphere (Tammes' problem).

Points differ from lines: the constraint is on the signed inner product, so
a target angle above 90 degrees needs a negative cap mu.  N=4 should find
the regular tetrahedron (109.47 deg), N=6 the octahedron (90 deg).
"""

import math

import grasspack as gp

targets = {4: 109.471, 5: 90.0, 6: 90.0, 12: 63.435}

for N, target_deg in targets.items():
    mu = math.cos(math.radians(target_deg))
    best = -1.0
    for trial in range(5):
        start = gp.initial_configuration(
            3, 1, N, gp.Field.REAL, gp.InitParams(tau=0.9, seed=100 + trial),
            signed_similarity=True,
        )
        report = gp.alternate(
            gp.gram(start),
            gp.SolveParams(metric=gp.Metric.SPHERE, mu=mu, d=3, K=1, N=N,
                           max_iterations=3000),
        )
        best = max(best, math.degrees(report.final_diameter))
    print(f"N={N:2d}: best minimum angle {best:8.3f} deg   target {target_deg} deg")

print()
print("The N=12 case is the icosahedron; its 63.435 deg angle matches the")
print("best packing of 12 LINES in RP^2 halved across antipodes.")
