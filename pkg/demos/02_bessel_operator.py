"""A second-order problem in the Bessel operator L = (1/t) D t D - nu^2/t^2.

    L^2 y - 8 L y - 9 y = 0,   nu = 2,   Y_0 = 1,  Y_1 = 0

The initial data are operator limits (Y_k = lim L^k y / f_0), not derivatives.
The denominator factors as (1 + s)(1 - 9 s), which reads back as
J_2(t) and I_2(3t).
"""
from fractions import Fraction

from opcalc import IVProblem, Realization, solve_ivp
from opcalc.numerics import residual
from scipy import special  # only for the side-by-side check below

problem = IVProblem(Realization.bessel(2), (-9, -8, 1), None, (1, 0))
sol = solve_ivp(problem, 40)

print("closed form:", sol.closed_form())
for nf in sol.named:
    print("  term:", nf.to_json())

ev = sol.evaluator()
print("\n   t      series           J/I form          residual")
for t in (0.5, 1.0, 3.0):
    ref = Fraction(9, 10) * special.jv(2, t) + special.iv(2, 3 * t) / 90
    print(f"  {t:3.1f}  {ev(t):15.12f}  {float(ref):15.12f}  {residual(problem, ev, t):.1e}")
