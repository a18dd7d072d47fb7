"""Approximately free representations and the embedding pairing.

Tensoring the generators with the cyclic shift on l^p(Z/nZ) splits the
space into blocks that s_j moves forward and t_j moves backward.  The
truncated norms of the freed representation never drop below the plain
ones, and a cyclic spread of any witness transfers it exactly, so the
inequality is tight at every n here.  The single-generator embedding
s_j -> s_2^j s_1 realizes infinitely many isometries with disjoint
ranges inside L_2; the pairing of coefficient vectors survives it.
"""

import numpy as np

import lpcuntz as lp

K = lp.leavitt(2)
p = 3.0
seq = lp.sequence_rep(2, p)

print("homogeneous elements factor through shift powers:")
fr = lp.free_rep(seq, 4)
s1_free = lp.evaluate(fr, lp.gen_s(K, 1), 2)
shift = np.roll(np.eye(4), 1, axis=0)
expected = np.kron(lp.evaluate(seq, lp.gen_s(K, 1), 2).entries, shift)
print("  s_1 acts as (plain s_1) x shift:", np.abs(s1_free.entries - expected).max() == 0)

print("\ntruncated norms never drop when freeing, and grow with n:")
for text in ("s1 + t1", "s1*t2 + s2*t1 + t1*t2"):
    a = lp.parse_element(text, K)
    base = lp.power_estimate(lp.evaluate(seq, a, 4), seed=0).estimate
    row = [base]
    for n in (2, 4, 8, 16):
        row.append(
            lp.power_estimate(lp.evaluate(lp.free_rep(seq, n), a, 4), seed=0).estimate
        )
    print(f"  {text:24s} plain {row[0]:.8f} | free n=2,4,8,16:",
          " ".join(f"{v:.8f}" for v in row[1:]))

print("\nthe embedding s_j -> s_2^j s_1, t_j -> t_1 t_2^j pairs exactly:")
rng = np.random.default_rng(1)
gam = np.round(rng.standard_normal(3), 3)
lam = np.round(rng.standard_normal(3), 3)
from fractions import Fraction
from lpcuntz.leavitt import QC

def q(x):
    return QC(Fraction(str(x)))

t_el = sum((lp.monomial(K, (), tuple([2] * j + [1])).scale(q(g))
            for j, g in zip((1, 2, 3), gam)), lp.zero(K))
s_el = sum((lp.monomial(K, tuple([2] * j + [1]), ()).scale(q(l))
            for j, l in zip((1, 2, 3), lam)), lp.zero(K))
sym = lp.mul(t_el, s_el)
print("  symbolically:", lp.format_element(sym))
print("  expected scalar:", float(np.dot(gam, lam)))

T = lp.evaluate(seq, t_el, 6)    # V_6 -> V_4
S = lp.evaluate(seq, s_el, 2)    # V_2 -> V_6
incl = (seq.inclusion(3) @ seq.inclusion(2)).toarray()
err = np.abs(T.entries @ S.entries - float(np.dot(gam, lam)) * incl).max()
print("  operator pairing error at level 6:", err)
