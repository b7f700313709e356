# %% [markdown]
# # Value assignments and their obstruction
#
# Assign +-1 to every local observable. An experiment is trivial when every
# attainable pattern of eigenvalues can be reproduced that way, and
# nontrivial when some product of elements equals -I while the same
# product of assigned values is forced to be +1.

# %%
from ghz_atlas import golden
from ghz_atlas.enumerator import classification
from ghz_atlas.lhv import classify, identity_subsets

e = golden.labeled_forms()["4A.4"]
print([str(p) for p in e])
for s in identity_subsets(e):
    print("elements", [i + 1 for i in s.indices], "multiply to", "+I" if s.sign > 0 else "-I")
print(classify(e).kind)

# %%
t = golden.labeled_forms()["3.5"]
v = classify(t)
print([str(p) for p in t], v.kind)
print(v.assignment.to_text())

# %%
# Census over all sizes.
for size, res in classification(4).items():
    kinds = [c.verdict.kind for c in res.classes]
    print(f"size {size}: {kinds.count('Nontrivial')} of {len(kinds)} nontrivial")
