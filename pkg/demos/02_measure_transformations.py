"""Finite measure spaces and measurable set transformations.

Atoms with positive weights model a sigma-finite measure space at desk
scale; a set transformation maps each atom to a disjoint block of
target atoms.  Pushforwards of functions and measures, pullbacks, and
Radon-Nikodym derivatives are all finite sums over blocks.
"""

import lpcuntz as lp
from lpcuntz.measure import AtomFunction

src = lp.FiniteMeasureSpace(["x1", "x2"], [1.0, 2.0])
tgt = lp.FiniteMeasureSpace(["y1", "y2", "y3"], [3.0, 4.0, 5.0])
S = lp.SetTransformation(src, tgt, {"x1": {"y1", "y2"}, "x2": {"y3"}})
print("source:", src)
print("target:", tgt)
print("blocks:", {a: sorted(S.block(a)) for a in src.atoms})

print("\npushforward of functions is block-constant:")
xi = AtomFunction(src, [1.0, -2.0])
push = lp.pushforward_function(S, xi)
print("  xi:", dict(zip(src.atoms, xi.values.real)))
print("  S_* xi:", dict(zip(tgt.atoms, push.values.real)))

print("\npullback of a measure sums each block:")
lam = {"y1": 3.0, "y2": 4.0, "y3": 5.0}
print("  S^* lambda:", lp.pullback_measure(S, lam))

print("\npushforward of the source weights is block-level data:")
for block, mass in lp.pushforward_measure(S).items():
    print(f"  block {sorted(block)} carries mass {mass}")

print("\nRadon-Nikodym derivative of S_* mu against the target weights:")
h = lp.rn_derivative(S)
print("  h:", {y: round(h(y).real, 6) for y in tgt.atoms})
print("  (block {y1,y2}: 1 / (3+4); singleton block {y3}: 2 / 5)")

print("\nchange of variables: sum xi d(S^* lambda) = sum (S_* xi) dlambda")
lhs = sum(xi(a) * lp.pullback_measure(S, lam)[a] for a in src.atoms)
rhs = sum(push(y) * lam[y] for y in tgt.atoms)
print(f"  {lhs.real} = {rhs.real}")

print("\ncomposition merges block structures:")
far = lp.FiniteMeasureSpace(["z1", "z2", "z3", "z4"], [1.0] * 4)
T = lp.SetTransformation(tgt, far, {"y1": {"z1"}, "y2": {"z2", "z3"}, "y3": {"z4"}})
TS = lp.compose(T, S)
print("  T o S blocks:", {a: sorted(TS.block(a)) for a in src.atoms})

print("\nsigma-homomorphism laws hold for the induced map on subsets:")
E, F = {"x1"}, {"x2"}
print("  S(E u F) =", sorted(S.image_of_set(E | F)))
print("  S(E) u S(F) =", sorted(S.image_of_set(E) | S.image_of_set(F)))
