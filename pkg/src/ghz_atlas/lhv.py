"""Trivial vs. nontrivial: local value assignments against eigenvalue constraints.

Each local observable (site, axis) gets a classical value nu = +-1.  Writing
nu = (-1)**b and eps_i = (-1)**t_i, element i imposes the GF(2) equation
``sum of b over its (site, axis) symbols = t_i``.  Dependencies among the
rows are exactly the identity subsets: every symbol occurs an even number of
times, so classically the eps product over the subset is +1, whereas the
operator product equals ``sign * I``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .experiment import ExperimentLike, _strings
from .pauli import Axis, PauliString, is_identity, subset_product

TRIVIAL = "Trivial"
NONTRIVIAL = "Nontrivial"

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")

Symbol = Tuple[int, Axis]  # (0-based site, axis)


def symbol_name(sym: Symbol, unicode: bool = False) -> str:
    site, axis = sym
    s = str(site + 1)
    return axis.letter + (s.translate(_SUBSCRIPTS) if unicode else s)


@dataclass(frozen=True)
class Monomial:
    """A formal +-1 expression ``sign * prod(eps_i for i in factors)`` (0-based factors)."""

    sign: int = 1
    factors: FrozenSet[int] = frozenset()

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.sign * other.sign, self.factors ^ other.factors)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.factors)

    def to_text(self, unicode: bool = False) -> str:
        prefix = "-" if self.sign < 0 else ""
        if not self.factors:
            return prefix + "1"
        if unicode:
            body = "".join("ε" + str(i + 1).translate(_SUBSCRIPTS) for i in sorted(self.factors))
        else:
            body = "".join(f"e{i + 1}" for i in sorted(self.factors))
        return prefix + body

    def __str__(self) -> str:
        return self.to_text()

    @classmethod
    def parse(cls, text: str) -> "Monomial":
        """Parse ``"e1e3"``, ``"-e2"``, ``"1"`` or ``"-1"``."""
        t = text.strip()
        sign = 1
        if t.startswith("-"):
            sign, t = -1, t[1:]
        if t == "1":
            return cls(sign)
        parts = t.split("e")
        if parts[0] != "" or len(parts) < 2:
            raise ValueError(f"bad expression {text!r}")
        factors: set = set()
        for p in parts[1:]:
            if not p.isdigit() or int(p) < 1:
                raise ValueError(f"bad factor in {text!r}")
            factors ^= {int(p) - 1}
        return cls(sign, frozenset(factors))


@dataclass(frozen=True)
class IdentitySubset:
    """Elements (0-based) whose operator product is ``sign`` times the identity."""

    indices: Tuple[int, ...]
    sign: int

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.indices)

    def to_json(self) -> dict:
        return {"indices": [i + 1 for i in self.indices], "sign": self.sign}


@dataclass
class ValueAssignment:
    """Formal values for local observables; symbols not listed take the value 1."""

    entries: Dict[Symbol, Monomial] = field(default_factory=dict)

    def value(self, sym: Symbol) -> Monomial:
        return self.entries.get(sym, Monomial())

    def nontrivial_entries(self) -> List[Tuple[Symbol, Monomial]]:
        return [(s, m) for s, m in sorted(self.entries.items()) if m != Monomial()]

    def to_text(self, unicode: bool = True) -> str:
        items = self.nontrivial_entries()
        if not items:
            return "all ν(·) = 1" if unicode else "all nu = 1"
        nu = "ν" if unicode else "nu"
        return ", ".join(
            f"{nu}({symbol_name(s, unicode)}) = {m.to_text(unicode)}" for s, m in items
        )

    def to_json(self) -> list:
        return [
            {"site": s[0] + 1, "axis": s[1].letter, "expr": m.to_text()}
            for s, m in self.nontrivial_entries()
        ]

    @classmethod
    def from_mapping(cls, mapping: Dict[str, str]) -> "ValueAssignment":
        """Build from ``{"x1": "e1", "y3": "e1e4", ...}`` (1-based sites)."""
        entries = {}
        for name, expr in mapping.items():
            axis = Axis.from_letter(name[0])
            site = int(name[1:]) - 1
            entries[(site, axis)] = Monomial.parse(expr)
        return cls(entries)


@dataclass
class TrivialityVerdict:
    kind: str
    assignment: Optional[ValueAssignment] = None
    certificate: Optional[IdentitySubset] = None

    def __post_init__(self):
        if self.kind == TRIVIAL:
            if self.assignment is None or self.certificate is not None:
                raise ValueError("a trivial verdict carries an assignment and no certificate")
        elif self.kind == NONTRIVIAL:
            if self.certificate is None or self.assignment is not None:
                raise ValueError("a nontrivial verdict carries a certificate and no assignment")
            if self.certificate.sign != -1:
                raise ValueError("a certificate must have sign -1")
        else:
            raise ValueError(f"unknown verdict kind {self.kind!r}")

    @property
    def nontrivial(self) -> bool:
        return self.kind == NONTRIVIAL

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.assignment is not None:
            out["assignment"] = self.assignment.to_json()
        return out


# --------------------------------------------------------------------------

def _symbol_masks(strings: Sequence[PauliString]) -> List[int]:
    """Row bitsets over symbol columns ``3 * site + axis``."""
    return [sum(1 << (3 * j + int(a)) for j, a in enumerate(p.axes)) for p in strings]


def _subset_sign(strings: Sequence[PauliString], indices: Sequence[int]) -> int:
    phase, residual = subset_product(strings, indices)
    assert is_identity(residual)
    return phase.sign


def identity_subsets(e: ExperimentLike) -> List[IdentitySubset]:
    """All non-empty identity subsets, by exhaustive scan over the 2**m subsets."""
    strings = _strings(e)
    m = len(strings)
    if m > 12:
        raise ValueError(f"exhaustive scan limited to 12 elements, got {m}")
    rows = _symbol_masks(strings)
    out = []
    for mask in range(1, 1 << m):
        acc = 0
        for i in range(m):
            if mask >> i & 1:
                acc ^= rows[i]
        if acc == 0:
            idx = tuple(i for i in range(m) if mask >> i & 1)
            out.append(IdentitySubset(idx, _subset_sign(strings, idx)))
    out.sort(key=lambda s: (len(s.indices), s.indices))
    return out


def operator_identity_subsets(e: ExperimentLike) -> List[IdentitySubset]:
    """Subsets whose operator product is +-I, exhaustive.

    Besides the identity subsets this includes products where some site
    carries x, y and z an odd number of times each (x y z = i at a site).
    Those constrain the eigenvalues but not local values.
    """
    strings = _strings(e)
    m = len(strings)
    if m > 12:
        raise ValueError(f"exhaustive scan limited to 12 elements, got {m}")
    out = []
    for mask in range(1, 1 << m):
        idx = tuple(i for i in range(m) if mask >> i & 1)
        phase, residual = subset_product(strings, idx)
        if is_identity(residual):
            out.append(IdentitySubset(idx, phase.sign))
    out.sort(key=lambda s: (len(s.indices), s.indices))
    return out


def _eliminate(strings: Sequence[PauliString]):
    """Row reduction with the eps block carried along.

    Returns the reduced pivot rows ``{col: (symbols, eps_mask)}`` and the
    dependency masks (identity subsets as eps masks).  A new row's pivot
    prefers a symbol that no earlier element uses, then site order.
    """
    rows = _symbol_masks(strings)
    pivots: Dict[int, Tuple[int, int]] = {}
    deps: List[int] = []
    seen = 0
    for i, row in enumerate(rows):
        r, em = row, 1 << i
        for col, (prow, pem) in pivots.items():
            if r >> col & 1:
                r ^= prow
                em ^= pem
        if r == 0:
            deps.append(em)
        else:
            fresh = r & ~seen
            pick = fresh if fresh else r
            col = (pick & -pick).bit_length() - 1
            for c, (prow, pem) in list(pivots.items()):
                if prow >> col & 1:
                    pivots[c] = (prow ^ r, pem ^ em)
            pivots[col] = (r, em)
        seen |= row
    return pivots, deps


def identity_subset_basis(e: ExperimentLike) -> List[IdentitySubset]:
    """A GF(2) basis of the identity subsets (kernel of the row matrix)."""
    strings = _strings(e)
    _, deps = _eliminate(strings)
    out = []
    for em in deps:
        idx = tuple(i for i in range(len(strings)) if em >> i & 1)
        out.append(IdentitySubset(idx, _subset_sign(strings, idx)))
    return out


def span_subsets(basis: Sequence[IdentitySubset], m: int) -> List[IdentitySubset]:
    """Every non-empty combination of ``basis``, signs multiplied."""
    out = {}
    for r in range(1, len(basis) + 1):
        for combo in itertools.combinations(basis, r):
            mask, sign = 0, 1
            for s in combo:
                mask ^= s.mask
                sign *= s.sign
            if mask:
                out[mask] = sign
    subsets = [
        IdentitySubset(tuple(i for i in range(m) if mask >> i & 1), sign) for mask, sign in out.items()
    ]
    subsets.sort(key=lambda s: (len(s.indices), s.indices))
    return subsets


def _symbols(strings: Sequence[PauliString]) -> List[Symbol]:
    return sorted({(j, a) for p in strings for j, a in enumerate(p.axes)})


def parametric_assignment(e: ExperimentLike) -> ValueAssignment:
    """The value table obtained with every free symbol fixed to +1.

    It satisfies each element's equation modulo the classical dependencies,
    so it is a genuine solution exactly when all identity subsets have sign +1.
    """
    strings = _strings(e)
    pivots, _ = _eliminate(strings)
    entries = {sym: Monomial() for sym in _symbols(strings)}
    for col, (_, em) in pivots.items():
        sym = (col // 3, Axis(col % 3))
        entries[sym] = Monomial(1, frozenset(i for i in range(len(strings)) if em >> i & 1))
    return ValueAssignment(entries)


def classify(e: ExperimentLike) -> TrivialityVerdict:
    """Nontrivial iff some identity subset has operator product ``-I``."""
    strings = _strings(e)
    basis = identity_subset_basis(strings)
    negatives = [s for s in span_subsets(basis, len(strings)) if s.sign < 0]
    if negatives:
        return TrivialityVerdict(NONTRIVIAL, certificate=negatives[0])
    return TrivialityVerdict(TRIVIAL, assignment=parametric_assignment(strings))


def _reduce_relation(vec: int, sign: int, basis: Dict[int, Tuple[int, int]]):
    for bit, (bvec, bsign) in basis.items():
        if vec >> bit & 1:
            vec ^= bvec
            sign *= bsign
    return vec, sign


def check_assignment(
    e: ExperimentLike, a: ValueAssignment, subsets: Iterable[IdentitySubset] = ()
) -> bool:
    """True iff each element's nu-product reduces to its eps using the supplied relations."""
    strings = _strings(e)
    known = set(_symbols(strings))
    for sym in a.entries:
        if sym not in known:
            raise KeyError(f"unknown symbol {symbol_name(sym)}")
    relations: Dict[int, Tuple[int, int]] = {}
    for s in subsets:
        vec, sign = _reduce_relation(s.mask, s.sign, relations)
        if vec == 0:
            if sign != 1:
                return False  # the supplied relations contradict each other
            continue
        bit = (vec & -vec).bit_length() - 1
        for b, (bv, bs) in list(relations.items()):
            if bv >> bit & 1:
                relations[b] = (bv ^ vec, bs * sign)
        relations[bit] = (vec, sign)
    for i, p in enumerate(strings):
        prod = Monomial()
        for j, axis in enumerate(p.axes):
            prod = prod * a.value((j, axis))
        residual = prod * Monomial(1, frozenset({i}))
        vec, sign = _reduce_relation(residual.mask, residual.sign, relations)
        if vec != 0 or sign != 1:
            return False
    return True


# --------------------------------------------------------------------------
# Independent oracle

def reproducible_eps(e: ExperimentLike) -> set:
    """Every eps tuple some concrete +-1 assignment reproduces (exhaustive)."""
    strings = _strings(e)
    syms = _symbols(strings)
    col = {s: k for k, s in enumerate(syms)}
    k = len(syms)
    values = 1 - 2 * ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1)
    outs = np.ones((1 << k, len(strings)), dtype=np.int64)
    for i, p in enumerate(strings):
        for j, axis in enumerate(p.axes):
            outs[:, i] *= values[:, col[(j, axis)]]
    return {tuple(int(v) for v in row) for row in np.unique(outs, axis=0)}


def brute_force_kind(e: ExperimentLike, achievable: Iterable[Sequence[int]]) -> str:
    """Nontrivial iff some achievable eps tuple has no concrete assignment."""
    reachable = reproducible_eps(e)
    for eps in achievable:
        if tuple(int(v) for v in eps) not in reachable:
            return NONTRIVIAL
    return TRIVIAL
