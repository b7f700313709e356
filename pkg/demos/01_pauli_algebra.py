# %% [markdown]
# # Pauli words and commutation
#
# A word like `xyzx` names one local spin observable per qubit. Two words
# commute exactly when they differ at an even number of sites, and the
# product of a set of words is tracked as a phase i^k times a residual word.

# %%
import numpy as np

from ghz_atlas.hilbert import commutator_norm, to_operator
from ghz_atlas.pauli import commutes, format_residual, orthogonal_sites, parse_string, subset_product, word_product

p, q = parse_string("xxxx"), parse_string("yyxx")
print(p, q, "differ at", orthogonal_sites(p, q), "sites; commute:", commutes(p, q))

# %%
# The combinatorial rule against the 16x16 matrices.
r = parse_string("yxxx")
for a, b in [(p, q), (p, r)]:
    norm = commutator_norm(to_operator(a), to_operator(b))
    print(f"{a} {b}: rule says {commutes(a, b)}, |[A,B]| = {norm:.3g}")

# %%
phase, residual = word_product([parse_string(w) for w in ("xxxx", "yyxx", "zzxx")])
print("xxxx * yyxx * zzxx =", phase, "*", format_residual(residual))

# %%
# A sign that survives every reordering: the classic four-element product.
words = [parse_string(w) for w in "xxxx,yyxx,yxyx,xxyy,yxxy".split(",")]
ph, res = subset_product(words, [0, 2, 3, 4])
print("product of elements 1,3,4,5:", ph)
prod = np.linalg.multi_dot([to_operator(words[i]) for i in (0, 2, 3, 4)])
print("matrix check:", np.allclose(prod, -np.eye(16)))
