"""The reduction pipeline: restrict a Dirac graph to a hyperplane, quotient
along a foliation, and land on a smaller Poisson graph.

Run with: python3 demos/05_reduction.py
"""

from bigiso import Chart, PolyBivector, PolyOneForm, check_integrability, graph_P
from bigiso.reduction import (
    FoliationData,
    SubmanifoldData,
    check_projectable,
    check_reducibility,
    reduce_structure,
    restrict,
)

# The symplectic bivector d1^d2 + d3^d4 on Q^4, as a Dirac graph.
chart = Chart(("x1", "x2", "x3", "x4"))
P = PolyBivector(chart, {(0, 1): chart.one(), (2, 3): chart.one()})
s = graph_P([PolyOneForm.coordinate(chart, i) for i in range(4)], P)

# Restrict to the hyperplane x4 = 0; the window dimensions stay constant,
# which is the properness certificate.
N = SubmanifoldData.from_equations(chart, [chart.coordinate("x4")])
restricted = restrict(s, N)
print("restricted rank:", restricted.rank, "on chart", N.sub.names)

# Foliate by the x3 fibres: the fibre direction lifts into E over ann TN.
F = FoliationData(N.sub, fibre=(2,))
print("reducibility:", check_reducibility(s, N, F).ok)
print("wrong fibre would fail:", check_reducibility(s, N, FoliationData(N.sub, fibre=(0,))).ok)

result = reduce_structure(s, N, F)
q = result.quotient
print("\nquotient chart:", q.chart.names)
print("quotient frame:")
for sec in q.e_frame:
    print("  ", [str(c) for c in sec.as_poly_row()])
print("projectability:", result.projectability.ok)
print("reduced structure integrable:", check_integrability(q).ok)
print("meets the tangent space only in zero (Poisson):", result.poisson_condition)
