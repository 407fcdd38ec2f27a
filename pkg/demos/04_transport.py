"""Pullback and pushforward of isotropic subspaces through linear maps, with
the exact dimension predictions.

Run with: python3 demos/04_transport.py
"""

import random

from bigiso import LinearMap, Subspace, orthogonal_g, pullback_subspace, pushforward_subspace
from bigiso.pointwise import random_isotropic
from bigiso.transport import (
    predict_pullback_dim,
    predict_pushforward_dim,
    pullpush,
    pushpull,
)

# The inclusion of a line into the plane pulls (e1, dy) back to (d_x, 0).
incl = LinearMap.from_rows([[1], [0]])
E = Subspace(4, [(1, 0, 0, 1)])
print("pullback of span{(e1, dy)}:", pullback_subspace(incl, E).basis)
print("predicted dimension:", predict_pullback_dim(incl, E))

# A projection kills vertical directions.
proj = LinearMap.from_rows([[1, 0]])
vertical = Subspace(4, [(0, 1, 0, 0)])
print("\npushforward of span{(e2, 0)} under (x,y)->x:", pushforward_subspace(proj, vertical).dim)
print("predicted dimension:", predict_pushforward_dim(proj, vertical))

# The predictions match the computed dimensions on random inputs, and
# orthogonality is preserved on the nose.
rng = random.Random(0)
checked = 0
for _ in range(50):
    n, m = rng.randint(1, 5), rng.randint(1, 5)
    L = LinearMap.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])
    d = random_isotropic(rng, m)
    pb = pullback_subspace(L, d.E)
    assert pb.dim == predict_pullback_dim(L, d.E, d.E_prime)
    assert orthogonal_g(pb) == pullback_subspace(L, d.E_prime)
    checked += 1
print(f"\n{checked} random pullbacks matched the dimension formula exactly")

# Surjections and injections invert each other on transported subspaces.
E_line = Subspace(2, [(1, 0)])
print("projection then inclusion returns the line:", pushpull(proj, E_line) == E_line)
E_target = random_isotropic(rng, 1).E
print("inclusion round trip:", pullpush(incl, E_target) == E_target)
