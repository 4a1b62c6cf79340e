"""y_{k+1} - 3 y_k = 4, y_0 = 1, solved through the z bridge.

Shift-by-one sequences satisfy the same algebra as derivatives, so the
recurrence goes through the same pipeline and the closed form comes out exact.
"""
from opcalc import DifferenceProblem, Poly, RationalExpr, solve_difference

# constant 4 for every k has generating function 4 / (1 - s)
problem = DifferenceProblem((-3, 1), (1,), RationalExpr(Poly([4]), Poly([1, -1])))
sol = solve_difference(problem, 16)

print("closed form:", sol.closed_form())
y = [1]
for _ in range(15):
    y.append(3 * y[-1] + 4)
print("solver   :", [int(c) for c in sol.coeff_seq])
print("iteration:", y)
