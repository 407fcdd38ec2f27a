"""Building structures from the graph constructors and certifying their
Courant-bracket closure exactly.

Run with: python3 demos/02_integrability.py
"""

from bigiso import Chart, PolyBivector, PolyTwoForm, PolyVectorField
from bigiso import check_integrability, check_module_property, graph_P, graph_theta
from bigiso.structures import check_P_conditions, check_theta_condition

chart = Chart(("x", "y", "z"))
dx_field = PolyVectorField.coordinate(chart, "x")
dy_field = PolyVectorField.coordinate(chart, "y")

# A closed 2-form over an involutive distribution gives an integrable graph.
theta = PolyTwoForm(chart, {(0, 1): chart.one()})  # dx^dy
s = graph_theta([dx_field], theta)
print("graph(dx^dy over span{d_x}) integrable?", check_integrability(s).ok)
print("module property of E'?", check_module_property(s).ok)

# With theta = z dx^dy the form condition fails and a witness minor appears.
bad_theta = PolyTwoForm(chart, {(0, 1): chart.coordinate("z")})
s_bad = graph_theta([dx_field, dy_field], bad_theta)
verdict = check_integrability(s_bad)
print("\ngraph(z dx^dy) integrable?", verdict.ok)
for message, witness in verdict.failures:
    print("  witness:", message, "->", witness)

# The specialized checker agrees and names the failing condition directly.
specialized = check_theta_condition([dx_field, dy_field], bad_theta)
for message, value in specialized.failures:
    print("  condition:", message, "=", value)

# Bivector graphs work the same way; a Poisson bivector over a closed
# covector distribution is integrable.
chart4 = Chart(("x1", "x2", "x3", "x4"))
P = PolyBivector(chart4, {(0, 1): chart4.one(), (2, 3): chart4.one()})
from bigiso import PolyOneForm

sstar = [PolyOneForm.coordinate(chart4, 0)]
sP = graph_P(sstar, P)
print("\ngraph(P over span{dx1}) integrable?", check_integrability(sP).ok)
print("specialized bivector conditions:", check_P_conditions(sstar, P).ok)
