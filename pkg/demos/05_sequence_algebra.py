"""Truncated sequences under the Cauchy product.

Inverses exist exactly when the leading term is nonzero, and the shift
identity ties right/left shifts to dropping a prefix.
"""
from fractions import Fraction

from opcalc import Sequence, cauchy_product, invert, shift_identity_rhs, shift_left, shift_right
from opcalc.errors import NotInvertible

N = 8
ones = Sequence.geometric(1, N)  # 1/(1 - s)
print("ones          :", [int(c) for c in ones])
print("ones * ones   :", [int(c) for c in cauchy_product(ones, ones)])
print("1 / ones      :", [int(c) for c in invert(ones)])

a = Sequence([Fraction(k * k + 1, k + 1) for k in range(N)])
print("\na             :", [str(c) for c in a])
print("a * 1/a       :", [str(c) for c in cauchy_product(a, invert(a))])
print("s^2 * (a >> 2):", [str(c) for c in shift_right(shift_left(a, 2), 2)])
print("a - prefix    :", [str(c) for c in shift_identity_rhs(a, 2)])

try:
    invert(shift_right(ones, 1))
except NotInvertible as exc:
    print("\nshifted ones has no inverse:", exc)
