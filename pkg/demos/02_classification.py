# %% [markdown]
# # Classifying four-qubit experiments
#
# An experiment is a set of mutually commuting words with at least two
# different axes at every site. Qubit permutations and per-site relabelling
# of x, y, z act on experiments; we list one canonical representative per
# orbit and check the list against a raw count of all experiments.

# %%
from ghz_atlas.enumerator import count_experiments, enumerate_classes, max_experiment_size
from ghz_atlas.symmetry import group_order, orbit_size

print("group order for four qubits:", group_order(4))
print("largest experiment:", max_experiment_size(4))

# %%
print(f"{'size':>4} {'classes':>7} {'experiments':>11} {'orbit sum':>9}")
for size in range(2, 11):
    res = enumerate_classes(4, size)
    orbits = sum(orbit_size(c.canonical.codes, 4) for c in res.classes)
    print(f"{size:>4} {res.class_count:>7} {count_experiments(4, size):>11} {orbits:>9}")

# %%
# Invariants of the seven-element classes.
for c in enumerate_classes(4, 7).classes:
    inv = c.invariants
    print(c.label_text or "-", c.canonical, "C =", inv.c, "R =", sorted(inv.r_by_element, reverse=True))
