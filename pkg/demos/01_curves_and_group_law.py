"""
The elliptic curve, the genus-2 curve, and the double cover between them
=========================================================================

Everything in this family starts from a single parameter away from the
two singular values 0 and -27/4.
"""

from fractions import Fraction

from kodaira import EllipticCurve, EllipticPoint, GenusTwoCurve

# The elliptic curve y^2 = x^3 + x + 1 (parameter value 1).
E = EllipticCurve(Fraction(1))
print("discriminant:", E.discriminant())          # nonzero: smooth
print("j (bare ratio):", E.j_ratio())             # 1/31
print("j (standard):", E.j_standard())            # 6912/31

# The group law: (0, 1) is a rational point, and its double is exact.
P = EllipticPoint(Fraction(0), Fraction(1))
print("[2]P =", E.multiply(2, P))                 # (1/4, -9/8)
print("[3]P =", E.multiply(3, P))                 # (72, 611)
print("P + (-P) =", E.add(P, E.neg(P)))           # the point at infinity

# Every result is re-checked against the curve equation.
for n in range(1, 8):
    assert E.contains(E.multiply(n, P))

# The genus-2 curve y^2 = x^6 + x^2 + 1 covers E two-to-one via
# (x, y) -> (x^2, y), branched exactly over the two points with x = 0.
X = GenusTwoCurve(Fraction(1))
s_plus = X.branch_point(+1)
print("branch point:", s_plus, "-> image", X.cover(s_plus))

# Fibers of the cover: two points generically, one over a branch image.
q = E.multiply(3, P)
print("fiber over [3]P:", X.fiber(q))
print("fiber over the branch image:", X.fiber(X.cover(s_plus)))

# The difference of the two branch images under the group law is the
# distinguished point every offset must avoid; in closed form it is
# (lam/4, -sqrt(lam)*(lam+8)/8).
print("branch image difference:", E.delta())      # (1/4, -9/8) here

# For a parameter whose square root is irrational the same data lives in
# the quadratic extension, still exactly.
E2 = EllipticCurve(Fraction(2))
print("difference for parameter 2:", E2.delta())
