"""Axis words, phase-tracked products and the commutation lemma.

Observables are unsigned tensor products of single-qubit spin observables,
one per site.  Restricted to the coordinate axes they are written as compact
words such as ``"xxyy"``; general directions are carried by
:class:`GeneralObservable`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np


class Axis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2

    @property
    def letter(self) -> str:
        return "xyz"[self]

    @classmethod
    def from_letter(cls, ch: str) -> "Axis":
        try:
            return cls("xyz".index(ch.lower()))
        except ValueError:
            raise ValueError(f"illegal character {ch!r}: axes are x, y, z") from None


@dataclass(frozen=True, order=True)
class PauliString:
    """An n-site word over {x, y, z}; ordering is lexicographic with x < y < z."""

    axes: Tuple[Axis, ...]

    def __post_init__(self):
        if len(self.axes) == 0:
            raise ValueError("a PauliString needs at least one site")
        object.__setattr__(self, "axes", tuple(Axis(a) for a in self.axes))

    @property
    def n(self) -> int:
        return len(self.axes)

    @property
    def code(self) -> int:
        """Base-3 integer with site 1 most significant; preserves word order."""
        c = 0
        for a in self.axes:
            c = 3 * c + int(a)
        return c

    @classmethod
    def from_code(cls, code: int, n: int) -> "PauliString":
        digits = []
        for _ in range(n):
            code, d = divmod(code, 3)
            digits.append(d)
        return cls(tuple(reversed(digits)))

    def __str__(self) -> str:
        return "".join(a.letter for a in self.axes)

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __len__(self) -> int:
        return len(self.axes)

    def __getitem__(self, j):
        return self.axes[j]


def parse_string(text: str, n: Optional[int] = None) -> PauliString:
    """Parse a compact axis word such as ``"zzzy"`` (case-insensitive)."""
    word = text.strip()
    if not word:
        raise ValueError("empty word")
    if len(word) < 2:
        raise ValueError(f"word {text!r} is too short: at least two sites are required")
    p = PauliString(tuple(Axis.from_letter(ch) for ch in word))
    if n is not None and p.n != n:
        raise ValueError(f"word {text!r} has {p.n} sites, expected {n}")
    return p


def all_strings(n: int) -> list:
    """All 3**n words in lexicographic order."""
    return [PauliString(t) for t in itertools.product(Axis, repeat=n)]


def _check_lengths(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p} has {p.n} sites, {q} has {q.n}")


def orthogonal_sites(p: PauliString, q: PauliString) -> int:
    """Number of sites where ``p`` and ``q`` carry different axes."""
    _check_lengths(p, q)
    return sum(a != b for a, b in zip(p.axes, q.axes))


def commutes(p: PauliString, q: PauliString) -> bool:
    return orthogonal_sites(p, q) % 2 == 0


# --------------------------------------------------------------------------
# Phases and products

@dataclass(frozen=True)
class Phase:
    """Element ``i**k`` of the cyclic group {+1, +i, -1, -i}."""

    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.k + other.k)

    def __pow__(self, e: int) -> "Phase":
        return Phase(self.k * e)

    def __complex__(self) -> complex:
        return complex((1, 1j, -1, -1j)[self.k])

    @property
    def is_real(self) -> bool:
        return self.k % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_real:
            raise ValueError(f"phase {self} is not real")
        return 1 if self.k == 0 else -1

    def __str__(self) -> str:
        return ("+1", "+i", "-1", "-i")[self.k]

    def __repr__(self) -> str:
        return f"Phase({self})"


ONE = Phase(0)
I_PHASE = Phase(1)
MINUS_ONE = Phase(2)

# residual words use None for an identity factor
Residual = Tuple[Optional[Axis], ...]


def _site_product(a: Optional[Axis], b: Axis) -> Tuple[Phase, Optional[Axis]]:
    # sigma_a sigma_b = delta_ab + i eps_abc sigma_c
    if a is None:
        return ONE, b
    if a == b:
        return ONE, None
    c = Axis(3 - a - b)
    if (b - a) % 3 == 1:
        return I_PHASE, c
    return Phase(3), c


def word_product(words: Sequence[PauliString]) -> Tuple[Phase, Residual]:
    """Multiply words left to right, site by site, with exact phase tracking.

    No commutation check is made, so the result depends on the order.
    """
    if not words:
        raise ValueError("empty product")
    n = words[0].n
    phase = ONE
    residual = [None] * n
    for w in words:
        if w.n != n:
            raise ValueError("length mismatch in product")
        for j, b in enumerate(w.axes):
            ph, residual[j] = _site_product(residual[j], b)
            phase = phase * ph
    return phase, tuple(residual)


def subset_product(strings: Sequence[PauliString], subset: Iterable[int]) -> Tuple[Phase, Residual]:
    """Product of ``strings[i]`` for ``i`` in ``subset`` (0-based), ascending index order.

    ``subset`` may repeat an index, which squares that element.  The selected
    strings must commute pairwise; the phase is then order independent and
    is real whenever the residual is the identity.
    """
    idx = sorted(subset)
    if not idx:
        raise ValueError("empty subset")
    chosen = [strings[i] for i in idx]
    for (i, p), (j, q) in itertools.combinations(zip(idx, chosen), 2):
        if not commutes(p, q):
            raise ValueError(
                f"elements {i + 1} ({p}) and {j + 1} ({q}) do not commute: "
                f"{orthogonal_sites(p, q)} orthogonal sites"
            )
    return word_product(chosen)


def is_identity(residual: Residual) -> bool:
    return all(a is None for a in residual)


def format_residual(residual: Residual) -> str:
    return "".join("i" if a is None else a.letter for a in residual)


# --------------------------------------------------------------------------
# General unit-vector observables

_AXIS_VECTORS = np.eye(3)


class LemmaVerdict(enum.Enum):
    COMMUTING = "commuting"
    ODD_ORTHOGONAL = "non-commuting (odd orthogonal-site count)"
    DICHOTOMY_VIOLATED = "non-commuting (dichotomy violated)"


@dataclass(frozen=True)
class GeneralObservable:
    """One unit direction per site; the observable is the tensor product of a_j . sigma."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vectors must have shape (n, 3)")
        norms = np.linalg.norm(v, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError(f"site vectors must have unit norm, got norms {norms}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def from_string(cls, p: PauliString) -> "GeneralObservable":
        return cls(_AXIS_VECTORS[[int(a) for a in p.axes]])


def lemma_verdict(o1: GeneralObservable, o2: GeneralObservable, tol: float = 1e-10) -> LemmaVerdict:
    """Classify a pair by the parallel-or-orthogonal rule at every site."""
    if o1.n != o2.n:
        raise ValueError(f"site count mismatch: {o1.n} vs {o2.n}")
    dots = np.abs(np.einsum("ij,ij->i", o1.vectors, o2.vectors))
    parallel = np.abs(dots - 1.0) <= tol
    orthogonal = dots <= tol
    if not np.all(parallel | orthogonal):
        return LemmaVerdict.DICHOTOMY_VIOLATED
    if int(orthogonal.sum()) % 2:
        return LemmaVerdict.ODD_ORTHOGONAL
    return LemmaVerdict.COMMUTING


def commutes_general(o1: GeneralObservable, o2: GeneralObservable, tol: float = 1e-10) -> bool:
    return lemma_verdict(o1, o2, tol) is LemmaVerdict.COMMUTING
