"""Exhaustive classification of GHZ-Mermin experiments up to symmetry.

Commuting word sets are closed under taking subsets, so every class of
commuting sets of size k arises by adding one word to a class
representative of size k-1.  Classes are grown that way and deduplicated
by canonical form; experiments are the classes that also use at least two
axes at every site.  :func:`iter_experiments` is the plain depth-first
clique search, kept as an independent cross-check.
"""

from __future__ import annotations

import functools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import golden
from .experiment import Experiment, InvariantRecord, invariants, validate
from .lhv import TrivialityVerdict, classify
from .pauli import PauliString
from .symmetry import canonical_key


@functools.lru_cache(maxsize=None)
def commutation_matrix(n: int) -> np.ndarray:
    """Boolean (3**n, 3**n) matrix: even number of differing sites."""
    codes = np.arange(3**n)
    w = 3 ** np.arange(n - 1, -1, -1)
    d = (codes[:, None] // w) % 3
    diff = (d[:, None, :] != d[None, :, :]).sum(axis=2)
    return diff % 2 == 0


def _two_per_site(codes: Tuple[int, ...], n: int) -> bool:
    w = 3 ** np.arange(n - 1, -1, -1)
    d = (np.asarray(codes)[:, None] // w) % 3
    return all(len(set(d[:, j])) >= 2 for j in range(n))


def _extensions(rep: Tuple[int, ...], n: int) -> set:
    comm = commutation_matrix(n)
    ok = np.all(comm[list(rep)], axis=0)
    ok[list(rep)] = False
    return {canonical_key(rep + (int(w),), n) for w in np.flatnonzero(ok)}


_layers: Dict[int, List[List[Tuple[int, ...]]]] = {}
_layers_lock = threading.Lock()


def commuting_set_classes(n: int, size: int, threads: int = 1) -> List[Tuple[int, ...]]:
    """Canonical code tuples of all classes of commuting word sets of ``size`` (sorted)."""
    if n < 1 or size < 1:
        raise ValueError("n and size must be positive")
    with _layers_lock:
        layers = _layers.setdefault(n, [[canonical_key((0,), n)]])
        while len(layers) < size and layers[-1]:
            prev = layers[-1]
            if threads > 1:
                with ThreadPoolExecutor(threads) as pool:
                    parts = list(pool.map(lambda r: _extensions(r, n), prev))
            else:
                parts = [_extensions(r, n) for r in prev]
            layers.append(sorted(set().union(*parts)))
        if len(layers) < size:
            return []
        return list(layers[size - 1])


def _experiment(codes: Tuple[int, ...], n: int) -> Experiment:
    return Experiment(tuple(PauliString.from_code(c, n) for c in codes))


@dataclass
class ClassEntry:
    canonical: Experiment
    invariants: InvariantRecord
    verdict: TrivialityVerdict
    labels: List[str] = field(default_factory=list)

    @property
    def label_text(self) -> Optional[str]:
        return golden.format_labels(self.labels)

    def to_json(self) -> dict:
        out = {
            "canonical": str(self.canonical),
            "c": self.invariants.c,
            "r": list(self.invariants.r_by_element),
            "triad_profile": list(self.invariants.triad_profile),
            "verdict": self.verdict.to_json(),
        }
        if self.labels:
            out["paper_label"] = self.label_text
        return out


@dataclass
class ClassificationResult:
    n: int
    size: int
    classes: List[ClassEntry]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def nontrivial(self) -> List[ClassEntry]:
        return [c for c in self.classes if c.verdict.nontrivial]

    def to_json(self) -> dict:
        return {"n": self.n, "size": self.size, "classes": [c.to_json() for c in self.classes]}


@functools.lru_cache(maxsize=None)
def _classify_size(n: int, size: int) -> ClassificationResult:
    entries = []
    for codes in commuting_set_classes(n, size):
        if not _two_per_site(codes, n):
            continue
        e = _experiment(codes, n)
        entries.append(ClassEntry(e, invariants(e), classify(e), golden.labels_for(e)))
    return ClassificationResult(n, size, entries)


def enumerate_classes(n: int, size: int, threads: int = 1) -> ClassificationResult:
    """All experiment classes with ``size`` elements on ``n`` sites, sorted by canonical form."""
    if size < 2:
        raise ValueError("experiments have at least two elements")
    commuting_set_classes(n, size, threads)
    return _classify_size(n, size)


def max_experiment_size(n: int) -> int:
    """Largest size with at least one experiment class."""
    best = 0
    size = 2
    while commuting_set_classes(n, size):
        if enumerate_classes(n, size).class_count:
            best = size
        size += 1
    return best


def classification(n: int, threads: int = 1) -> Dict[int, ClassificationResult]:
    """Every non-empty size for ``n`` sites."""
    out = {}
    size = 2
    while commuting_set_classes(n, size, threads):
        res = enumerate_classes(n, size)
        if res.class_count:
            out[size] = res
        size += 1
    return out


def find_class_of(e: Experiment) -> Tuple[int, ClassEntry]:
    """Position of ``e``'s class within its (n, size) classification."""
    res = enumerate_classes(e.n, len(e))
    key = canonical_key(e.codes, e.n)
    for k, entry in enumerate(res.classes):
        if entry.canonical.codes == key:
            return k, entry
    raise ValueError(f"no enumerated class for {e}")


# --------------------------------------------------------------------------
# Independent generator

def iter_experiments(n: int, size: int) -> Iterator[Experiment]:
    """Every experiment of ``size`` elements by depth-first clique search.

    Elements increase lexicographically along each branch; the two-per-site
    rule is applied only to completed sets.
    """
    comm = commutation_matrix(n)
    total = 3**n

    def extend(chosen: List[int], allowed: np.ndarray):
        if len(chosen) == size:
            codes = tuple(chosen)
            if _two_per_site(codes, n):
                yield validate(PauliString.from_code(c, n) for c in codes)
            return
        start = chosen[-1] + 1 if chosen else 0
        for w in range(start, total):
            if allowed[w]:
                chosen.append(w)
                yield from extend(chosen, allowed & comm[w])
                chosen.pop()

    yield from extend([], np.ones(total, dtype=bool))


def count_experiments(n: int, size: int) -> int:
    """Number of experiments (as plain sets, no symmetry) by the same clique search."""
    comm = commutation_matrix(n)
    total = 3**n
    d = (np.arange(total)[:, None] // 3 ** np.arange(n - 1, -1, -1)) % 3
    axis_bits = (1 << d)  # (total, n) one bit per axis at each site

    def extend(last: int, depth: int, allowed: np.ndarray, seen: np.ndarray) -> int:
        if depth == size:
            return int(np.all(seen != 1) and np.all(seen != 2) and np.all(seen != 4))
        count = 0
        for w in np.flatnonzero(allowed[last + 1 :]) + last + 1:
            count += extend(int(w), depth + 1, allowed & comm[w], seen | axis_bits[w])
        return count

    return extend(-1, 0, np.ones(total, dtype=bool), np.zeros(n, dtype=np.int64))
