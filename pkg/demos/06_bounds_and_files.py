"""Bound formulas, feasibility parameters, and the configuration file format.

No solving here: a tour of the certification side of the library, plus the
JSON round trip used to store and re-evaluate packings.
"""

import json
import math
import tempfile

import numpy as np

import grasspack as gp

# --- Rankin bounds across metrics ---------------------------------------
print("chordal bound, C^6 K=3:", [
    round(gp.rankin_chordal(6, 3, n, gp.Field.COMPLEX).bound_value, 4)
    for n in (3, 6, 12, 36)
])
print("spectral bound, C^4 K=2:", [
    round(gp.rankin_spectral(4, 2, n, gp.Field.COMPLEX).bound_value, 4)
    for n in (3, 6, 10)
])
proj = gp.rankin_projective(3, 4, gp.Field.REAL)
print(f"projective bound, RP^2 N=4: {proj.degrees:.2f} deg "
      f"(equiangular if met: {proj.equidistance_implied})")

# --- feasibility parameter conversions -----------------------------------
rho = math.sqrt(gp.rankin_chordal(4, 2, 6, gp.Field.COMPLEX).bound_value)
mu = gp.mu_from_rho(rho, gp.Metric.CHORDAL, 2)
print(f"\ntarget diameter rho={rho:.5f}  ->  block-norm cap mu={mu:.5f}")
print(f"round trip: rho_from_mu(mu) = {gp.rho_from_mu(mu, gp.Metric.CHORDAL, 2):.5f}")

# --- store and re-evaluate a configuration --------------------------------
vs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / math.sqrt(3)
cube_diagonals = gp.Configuration(field=gp.Field.REAL, blocks=vs[:, :, None])

with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    path = fh.name
gp.write_configuration(cube_diagonals, path)
summary = gp.evaluate_file(path)
print("\nstored 4 cube-diagonal lines and evaluated the file:")
print(json.dumps({
    "min_angle_degrees": round(summary["min_angle_degrees"], 3),
    "chordal_diameter": round(summary["packing_diameters"]["chordal"], 6),
    "gram_eigenvalues": {k: round(v, 6) for k, v in summary["gram_eigenvalues"].items()},
}, indent=2))
