"""Exact arithmetic in the Leavitt algebra L_2.

The algebra is generated by s_1, s_2, t_1, t_2 with t_j s_j = 1,
t_j s_k = 0 for j != k, and s_1 t_1 + s_2 t_2 = 1.  Every element has a
canonical form over the basis of monomials s_alpha t_beta that do not
end in the pair (d, d), and all coefficients are exact complex
rationals, so every identity below is checked exactly.
"""

from fractions import Fraction

import lpcuntz as lp
from lpcuntz.leavitt import QC

K = lp.leavitt(2)
fmt = lp.format_element

print("defining relations, as canonical forms:")
for j in (1, 2):
    for k in (1, 2):
        prod = lp.mul(lp.gen_t(K, j), lp.gen_s(K, k))
        print(f"  t{j} s{k} = {fmt(prod)}")
unit_sum = lp.monomial(K, (1,), (1,)) + lp.monomial(K, (2,), (2,))
print(f"  s1 t1 + s2 t2 = {fmt(lp.normal_form(unit_sum))}")

print("\nthe reduction rule in action:")
a = lp.parse_element("s2*t2", K)
print(f"  s2*t2           -> {fmt(lp.normal_form(a))}")
b = lp.parse_element("s12*t22", K)
print(f"  s12*t22         -> {fmt(lp.normal_form(b))}")

print("\ninvolutions (star conjugates, prime does not):")
c = lp.monomial(K, (1,), (2,), QC(0, 1))  # i * s1 t2
print(f"  a        = {fmt(c)}")
print(f"  star(a)  = {fmt(lp.star(c))}")
print(f"  prime(a) = {fmt(lp.prime(c))}")

print("\ngrading by l(alpha) - l(beta), after reduction:")
d = lp.normal_form(lp.unit(K) + lp.gen_s(K, 1) + lp.monomial(K, (1, 2), (2,)))
for degree, part in lp.graded_components(d).items():
    print(f"  degree {degree:+d}: {fmt(part)}")

print("\nmatrix units: words of length 2 embed M_4 into L_2")
ws = lp.words(2, 2)
ident = {(w, w): 1 for w in ws}
print(f"  identity table -> {fmt(lp.matrix_unit_embed(K, 2, ident))}")

print("\nsame-length expansion (common right word length):")
form = lp.same_length_form([lp.gen_s(K, 1)], n_min=1)
print(f"  s1 with right length {form.n}:")
from lpcuntz.grammar import format_scalar

for (alpha, beta), coeff in sorted(form.coefficients[0].items()):
    print(f"    {format_scalar(coeff)} * s{list(alpha)} t{list(beta)}")

print("\npairing of coefficient vectors: t_lambda s_gamma = <lambda, gamma> 1")
prod = lp.mul(lp.linear_comb_t(K, [2, 3]), lp.linear_comb_s(K, [1, 1]))
print(f"  t_(2,3) s_(1,1) = {fmt(prod)}")

print("\nexact rational scalars never round:")
e = lp.unit(K).scale(QC(Fraction(1, 3))) + lp.unit(K).scale(QC(Fraction(1, 6)))
print(f"  1/3 + 1/6 = {fmt(e)}")
