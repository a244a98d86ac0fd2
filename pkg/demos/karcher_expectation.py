""" Expectation of a map into hyperbolic space.

Uniform points on S^50 are projected to the unit disc of R^2 and pushed into
H^2 by z -> exp_o(asinh(1) z).  The expectation E(f) is the Karcher
barycenter of the image; log_E then flattens everything onto the tangent
plane without changing distances to E.
"""
import numpy as np

from conclab import geometry as G
from conclab.barycenter import expectation_of_map, reduce_to_tangent
from conclab.montecarlo import tail_counts

x = G.sample_sphere(50, 100_000, seed=1)
f = G.projection(2).then(G.hyperbolic_embedding())   # 1-Lipschitz S^50 -> H^2

res = expectation_of_map(x, f, full_output=True)
print("E(f) on the hyperboloid:", res.point)
print("distance to origin     :", float(G.hyp_distance(res.point, G.origin(2))))
print("residual, iterations   :", res.residual, res.iterations)

f0 = reduce_to_tangent(x, f, res.point)
d = G.hyp_distance(f(x), res.point)
print("mean of f0             :", f0.mean(axis=0))
print("max | |f0| - d |       :", np.max(np.abs(np.linalg.norm(f0, axis=1) - d)))

r = np.linspace(0.05, 0.5, 10)
print("tail counts via d      :", tail_counts(d, r))
print("tail counts via |f0|   :", tail_counts(np.linalg.norm(f0, axis=1), r))
