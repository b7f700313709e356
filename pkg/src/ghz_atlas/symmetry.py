"""Equivalence group: per-site axis relabelings combined with qubit permutations.

Canonical forms are computed by brute-force orbit minimisation.  For each
qubit permutation the images of an experiment under all ``6**n`` axis
relabelings are built at once with numpy, each image is sorted, and the
lexicographically least sorted code row wins.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .experiment import Experiment, validate
from .pauli import Axis, PauliString

AXIS_PERMS: Tuple[Tuple[int, int, int], ...] = tuple(itertools.permutations(range(3)))
_AXIS_PERM_ARRAY = np.array(AXIS_PERMS, dtype=np.int64)


@dataclass(frozen=True)
class SymmetryElement:
    """Old site ``j`` moves to ``qubit_perm[j]``; the axis there is relabeled by ``axis_perms[new site]``."""

    qubit_perm: Tuple[int, ...]
    axis_perms: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        n = len(self.qubit_perm)
        if sorted(self.qubit_perm) != list(range(n)):
            raise ValueError(f"not a permutation of sites: {self.qubit_perm}")
        if len(self.axis_perms) != n:
            raise ValueError("need one axis permutation per site")
        for p in self.axis_perms:
            if sorted(p) != [0, 1, 2]:
                raise ValueError(f"not a permutation of axes: {p}")
        object.__setattr__(self, "qubit_perm", tuple(self.qubit_perm))
        object.__setattr__(self, "axis_perms", tuple(tuple(p) for p in self.axis_perms))

    @property
    def n(self) -> int:
        return len(self.qubit_perm)

    def __matmul__(self, other: "SymmetryElement") -> "SymmetryElement":
        """``g @ h`` acts as ``g`` after ``h``."""
        return compose(self, other)


def identity(n: int) -> SymmetryElement:
    return SymmetryElement(tuple(range(n)), ((0, 1, 2),) * n)


def compose(g: SymmetryElement, h: SymmetryElement) -> SymmetryElement:
    if g.n != h.n:
        raise ValueError("size mismatch")
    qp = tuple(g.qubit_perm[h.qubit_perm[j]] for j in range(g.n))
    g_inv = inverse_perm(g.qubit_perm)
    ap = tuple(
        tuple(g.axis_perms[s][h.axis_perms[g_inv[s]][a]] for a in range(3)) for s in range(g.n)
    )
    return SymmetryElement(qp, ap)


def inverse_perm(p: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(p)
    for j, s in enumerate(p):
        inv[s] = j
    return tuple(inv)


def inverse(g: SymmetryElement) -> SymmetryElement:
    qp = inverse_perm(g.qubit_perm)
    ap = tuple(inverse_perm(g.axis_perms[g.qubit_perm[j]]) for j in range(g.n))
    return SymmetryElement(qp, ap)


def random_element(n: int, rng: np.random.Generator) -> SymmetryElement:
    qp = tuple(int(x) for x in rng.permutation(n))
    ap = tuple(AXIS_PERMS[int(i)] for i in rng.integers(0, 6, size=n))
    return SymmetryElement(qp, ap)


def group_order(n: int) -> int:
    return math.factorial(n) * 6**n


def act_string(g: SymmetryElement, p: PauliString) -> PauliString:
    if g.n != p.n:
        raise ValueError(f"size mismatch: element acts on {g.n} sites, string has {p.n}")
    out = [Axis.X] * p.n
    for j, a in enumerate(p.axes):
        s = g.qubit_perm[j]
        out[s] = Axis(g.axis_perms[s][a])
    return PauliString(tuple(out))


def act(g: SymmetryElement, e: Experiment) -> Experiment:
    """Image of ``e`` under ``g``.  Validity is preserved by the group; it is re-checked anyway."""
    if g.n != e.n:
        raise ValueError(f"size mismatch: element acts on {g.n} sites, experiment has {e.n}")
    image = validate(act_string(g, p) for p in e.elements)
    assert len(image) == len(e)
    return image


# --------------------------------------------------------------------------
# Canonical forms

def _lexmin_row(rows: np.ndarray) -> int:
    """Index of the lexicographically least row."""
    idx = np.arange(rows.shape[0])
    for c in range(rows.shape[1]):
        col = rows[idx, c]
        idx = idx[col == col.min()]
        if idx.size == 1:
            break
    return int(idx[0])


@functools.lru_cache(maxsize=None)
def _site_weights(n: int) -> np.ndarray:
    return 3 ** np.arange(n - 1, -1, -1, dtype=np.int64)


def _digits(codes: Sequence[int], n: int) -> np.ndarray:
    c = np.asarray(codes, dtype=np.int64)
    return (c[:, None] // _site_weights(n)[None, :]) % 3


def canonical_codes(codes: Sequence[int], n: int, with_element: bool = False):
    """Least sorted code tuple over the orbit of the word set ``codes``.

    Works for any set of distinct words (the experiment rules are not needed).
    With ``with_element`` also returns a group element mapping the input to it.
    """
    digits = _digits(codes, n)  # (m, n)
    m = digits.shape[0]
    weights = _site_weights(n)
    best: Optional[Tuple[int, ...]] = None
    best_g = None
    for qp in itertools.permutations(range(n)):
        qinv = inverse_perm(qp)
        total = np.zeros((6,) * n + (m,), dtype=np.int64)
        for s in range(n):
            # (6, m) image digits at new site s from old site qinv[s]
            contrib = weights[s] * _AXIS_PERM_ARRAY[:, digits[:, qinv[s]]]
            shape = [1] * n + [m]
            shape[s] = 6
            total = total + contrib.reshape(shape)
        images = np.sort(total.reshape(-1, m), axis=1)
        k = _lexmin_row(images)
        cand = tuple(int(x) for x in images[k])
        if best is None or cand < best:
            best = cand
            if with_element:
                a_idx = np.unravel_index(k, (6,) * n)
                best_g = SymmetryElement(qp, tuple(AXIS_PERMS[int(i)] for i in a_idx))
    if with_element:
        return best, best_g
    return best


def orbit_size(codes: Sequence[int], n: int) -> int:
    """Number of distinct images of the word set ``codes`` under the whole group."""
    digits = _digits(codes, n)
    m = digits.shape[0]
    weights = _site_weights(n)
    images = set()
    for qp in itertools.permutations(range(n)):
        qinv = inverse_perm(qp)
        total = np.zeros((6,) * n + (m,), dtype=np.int64)
        for s in range(n):
            contrib = weights[s] * _AXIS_PERM_ARRAY[:, digits[:, qinv[s]]]
            shape = [1] * n + [m]
            shape[s] = 6
            total = total + contrib.reshape(shape)
        rows = np.sort(total.reshape(-1, m), axis=1)
        images.update(map(tuple, np.unique(rows, axis=0).tolist()))
    return len(images)


@functools.lru_cache(maxsize=200_000)
def _canonical_cached(codes: Tuple[int, ...], n: int) -> Tuple[int, ...]:
    return canonical_codes(codes, n)


def canonical_key(codes: Sequence[int], n: int) -> Tuple[int, ...]:
    return _canonical_cached(tuple(sorted(codes)), n)


def canonical_form(e: Experiment) -> Experiment:
    """The lexicographically least image of ``e`` over the whole group."""
    key = canonical_key(e.codes, e.n)
    return Experiment(tuple(PauliString.from_code(c, e.n) for c in key))


def canonicalize(e: Experiment) -> Tuple[Experiment, SymmetryElement]:
    """Canonical form together with a group element ``g`` with ``act(g, e) == canonical``."""
    key, g = canonical_codes(e.codes, e.n, with_element=True)
    return Experiment(tuple(PauliString.from_code(c, e.n) for c in key)), g


def equivalent(e1: Experiment, e2: Experiment) -> bool:
    """Orbit equality.  Experiments of different sizes are never equivalent."""
    if e1.n != e2.n:
        raise ValueError(f"site count mismatch: {e1.n} vs {e2.n}")
    if len(e1) != len(e2):
        return False
    return canonical_key(e1.codes, e1.n) == canonical_key(e2.codes, e2.n)


def witness(e1: Experiment, e2: Experiment) -> Optional[SymmetryElement]:
    """A group element taking ``e1`` to ``e2``, or None if they are inequivalent."""
    if not equivalent(e1, e2):
        return None
    c1, g1 = canonicalize(e1)
    c2, g2 = canonicalize(e2)
    return compose(inverse(g2), g1)
