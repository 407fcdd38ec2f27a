"""Pointwise geometry of Q^m (+) (Q^m)*: pairings, orthogonals, and the
characteristic data of an isotropic subspace.

Run with: python3 demos/01_pointwise_geometry.py
"""

from fractions import Fraction

from bigiso import (
    BigVector,
    IsotropicData,
    Subspace,
    characteristic_triple,
    dirac_extension,
    form_omega,
    is_isotropic,
    orthogonal_g,
    pairing_g,
    reconstruct,
)

# The neutral metric pairs tangent and cotangent halves symmetrically.
u = BigVector(2, (1, 0), (0, 1))  # (e1, dx2)
v = BigVector(2, (0, 1), (1, 0))  # (e2, dx1)
print("g((e1,dx2),(e2,dx1)) =", pairing_g(u, v))
print("omega of the same pair =", form_omega(u, v))

# A line spanned by (e1, dx2) is isotropic; its orthogonal is 3-dimensional.
E = Subspace(4, [(1, 0, 0, 1)])
print("\nE isotropic?", is_isotropic(E))
Ep = orthogonal_g(E)
print("dim E' =", Ep.dim, " and orthogonal is involutive:", orthogonal_g(Ep) == E)

# The characteristic triple carries the same information as (E, E').
data = IsotropicData(2, E, Ep)
triple = characteristic_triple(data)
print("\ntangent projection of E:", triple.cal_E.basis)
print("tangent projection of E':", triple.cal_E_prime.basis)
print("varpi(e1, e2) =", triple.varpi_on((1, 0), (0, 1)))

round_trip = reconstruct(triple)
print("reconstruct inverts the projection:", round_trip.E == E)

# Every isotropic subspace sits inside a canonical maximal one.
ext = dirac_extension(data)
print("\nDirac extension has dimension m =", ext.dim)
print("E <= D(E) <= E':", ext.contains_subspace(E), Ep.contains_subspace(ext))
