"""Spatial partial isometries and the decomposition detector.

A spatial system (E, F, S, g) materializes at exponent p as a partial
isometry whose entries are phases times weight ratios to the power 1/p.
The calculus below (reverse, composition, tensor, dual) is verified
against plain matrix arithmetic, and the detector recovers the system
from the matrix or explains why none exists.
"""

import numpy as np

import lpcuntz as lp

p = 3.0

dom = lp.FiniteMeasureSpace(["x1", "x2"], [1.0, 2.0])
cod = lp.FiniteMeasureSpace(["y1", "y2", "y3"], [2.0, 1.0, 1.0])
S = lp.SetTransformation(
    dom.subspace(["x1", "x2"]), cod.subspace(["y1", "y3"]), {"x1": {"y3"}, "x2": {"y1"}}
)
sys = lp.SpatialSystem(dom, cod, ["x1", "x2"], ["y1", "y3"], S, {"y1": 1j, "y3": -1.0})
A = lp.materialize(sys, p)
print("materialized spatial partial isometry at p = 3:")
print(np.array_str(A.entries, precision=4))

print("\nreverse laws: t s and s t are the support indicators")
t = lp.materialize(lp.reverse(sys), p)
print("  t s =", np.diag(t.entries @ A.entries).real)
print("  s t =", np.diag(A.entries @ t.entries).real)

print("\nisometry on the domain support:")
xi = np.array([0.3 - 1j, 0.7])
print("  ||xi||_3   =", round(lp.vector_norm(dom, xi, p), 12))
print("  ||s xi||_3 =", round(lp.vector_norm(cod, A.apply(xi), p), 12))

print("\nthe detector inverts materialization:")
res = lp.detect(A)
print("  accepted:", res.accepted, "| spatial:", res.spatial)
print("  blocks:", {x: sorted(res.system.block(x)) for x in res.system.E})
print("  phases:", {y: np.round(res.system.g[y], 6) for y in res.system.F})

print("\na semispatial example: one atom spread over a two-atom block")
dom1 = lp.FiniteMeasureSpace(["x"], [1.0])
cod1 = lp.FiniteMeasureSpace(["y1", "y2"], [1.0, 1.0])
S1 = lp.SetTransformation(dom1, cod1, {"x": {"y1", "y2"}})
semi = lp.SpatialSystem(dom1, cod1, ["x"], ["y1", "y2"], S1, {"y1": 1, "y2": -1})
B = lp.materialize(semi, p)
print("  column:", np.round(B.entries[:, 0], 6), " (2^(-1/3) with phases 1, -1)")
res1 = lp.detect(B)
print("  detected as semispatial, not spatial:", res1.accepted and not res1.spatial)

print("\nthe plane rotation by pi/4 is rejected with a witness:")
sq = lp.FiniteMeasureSpace(["a", "b"], [1.0, 1.0])
c = 2.0 ** -0.5
rot = lp.OperatorMatrix(sq, sq, p, np.array([[c, -c], [c, c]]))
rej = lp.detect(rot)
print(" ", rej.reason, rej.witness)
print("  its p=3 norm is", round(lp.oracle_grid(rot, seed=0).estimate, 6), "> 1,")
print("  so it is not even an isometry on l^3.")

print("\nidempotents that are spatial partial isometries are exactly")
print("multiplications by indicator functions:")
diag = lp.OperatorMatrix(sq, sq, p, np.diag([1.0, 0.0]))
print("  diag(1, 0) ->", lp.classify_idempotent(diag))
