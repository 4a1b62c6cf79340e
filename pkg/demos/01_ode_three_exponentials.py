"""y'' - 3y' + 2y = e^{3t}, y(0) = 1, y'(0) = 0.

The operator becomes a polynomial in the shift s, the right-hand side a
geometric sequence, and the answer falls out of partial fractions with
exact rational coefficients.
"""
import math

from opcalc import IVProblem, NamedFunction, Realization, solve_ivp, transform_equation

problem = IVProblem(
    Realization.maclaurin(),
    (2, -3, 1),  # 2 - 3D + D^2
    NamedFunction("Exp", {"rate": 3}),
    (1, 0),
)

print("transformed equation Y(s) =", transform_equation(problem))

sol = solve_ivp(problem)
print("\npole terms (rate, multiplicity, coefficient):")
for term in sol.decomposition.terms:
    print(f"  {term.rate!s:>3}  {term.multiplicity}  {term.coeff}")

print("\nclosed form:", sol.closed_form())

print("\n   t      solver            by hand")
for t in (0.5, 1.0, 2.0):
    ref = 0.5 * math.exp(3 * t) + 2.5 * math.exp(t) - 2 * math.exp(2 * t)
    print(f"  {t:3.1f}  {sol(t):16.10f}  {ref:16.10f}")
