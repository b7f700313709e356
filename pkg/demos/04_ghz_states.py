# %% [markdown]
# # Common eigenstates
#
# Each attainable sign vector picks out a joint eigenspace. For nontrivial
# experiments the one-dimensional ones hold GHZ-type states: balanced
# superpositions of two fully orthogonal product states.

# %%
import numpy as np

from ghz_atlas import golden
from ghz_atlas.hilbert import achievable_vectors, basis_state, ghz_state, is_ghz_form, joint_eigenspace, random_local_unitary

e = golden.labeled_forms()["4A.4"]
vecs = achievable_vectors(e)
print(len(vecs), "sign vectors, dims", sorted({v.eigenspace_dim for v in vecs}))

# %%
(state,) = joint_eigenspace(e, (-1, 1, 1, 1, 1))
print("overlap with (|0000> - |1111>)/sqrt2:", abs(np.vdot(ghz_state(4), state)))
dec = is_ghz_form(state)
print("theta, phi:", dec.theta, dec.phi)

# %%
rng = np.random.default_rng(7)
u = random_local_unitary(4, rng)
print("after a random local unitary:", is_ghz_form(u @ state) is not None)
print("product state:", is_ghz_form(basis_state("0101")))
