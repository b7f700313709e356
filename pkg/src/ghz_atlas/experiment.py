"""GHZ-Mermin experiments and their geometric invariants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

from .pauli import PauliString, commutes, orthogonal_sites, parse_string


class InvalidExperiment(ValueError):
    """Raised when a candidate set breaks an experiment rule.

    ``rule`` is ``"non-commuting"``, ``"single-axis-site"``, ``"size"`` or
    ``"length"``; ``witnesses`` names the offending strings or site.
    """

    def __init__(self, message: str, rule: str, witnesses: tuple = ()):
        super().__init__(message)
        self.rule = rule
        self.witnesses = witnesses


@dataclass(frozen=True)
class Experiment:
    """A validated set of commuting strings, stored sorted."""

    elements: Tuple[PauliString, ...]

    @property
    def n(self) -> int:
        return self.elements[0].n

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.elements)

    def __repr__(self) -> str:
        return f"Experiment({str(self)!r})"

    @property
    def codes(self) -> Tuple[int, ...]:
        return tuple(p.code for p in self.elements)

    @property
    def words(self) -> Tuple[str, ...]:
        return tuple(str(p) for p in self.elements)


def parse_words(text: str, n: int = None) -> Tuple[PauliString, ...]:
    """Parse comma-separated words, keeping the given order."""
    parts = [w for w in (s.strip() for s in text.split(",")) if w]
    if not parts:
        raise ValueError("empty experiment")
    strings = tuple(parse_string(w) for w in parts)
    size = strings[0].n if n is None else n
    for p in strings:
        if p.n != size:
            raise ValueError(f"word {p} has {p.n} sites, expected {size}")
    return strings


def validate(candidate: Iterable[PauliString]) -> Experiment:
    """Check the experiment rules and return the canonical sorted :class:`Experiment`."""
    strings = sorted(set(candidate))
    if not strings:
        raise InvalidExperiment("empty candidate set", "size")
    n = strings[0].n
    for p in strings:
        if p.n != n:
            raise InvalidExperiment(f"{p} has {p.n} sites, expected {n}", "length", (p,))
    if len(strings) < 2:
        raise InvalidExperiment("an experiment needs at least two elements", "size")
    for p, q in itertools.combinations(strings, 2):
        if not commutes(p, q):
            d = orthogonal_sites(p, q)
            raise InvalidExperiment(
                f"{p} and {q} do not commute ({d} orthogonal sites, odd)",
                "non-commuting",
                (p, q, d),
            )
    for j in range(n):
        axes = {p.axes[j] for p in strings}
        if len(axes) < 2:
            (a,) = axes
            raise InvalidExperiment(
                f"site {j + 1} has only axis {a.letter}", "single-axis-site", (j + 1, a)
            )
    return Experiment(tuple(strings))


def parse_experiment(text: str) -> Experiment:
    """Parse and validate ``"xxxx,yyxx,..."``."""
    return validate(parse_words(text))


ExperimentLike = Union[Experiment, Sequence[PauliString]]


def _strings(e: ExperimentLike) -> Tuple[PauliString, ...]:
    return e.elements if isinstance(e, Experiment) else tuple(e)


# --------------------------------------------------------------------------
# Invariants

def _triad_sites(strings: Sequence[PauliString]) -> int:
    n = strings[0].n
    return sum(len({p.axes[j] for p in strings}) == 3 for j in range(n))


def c_invariant(e: ExperimentLike) -> int:
    """Number of sites at which all three axes occur."""
    return _triad_sites(_strings(e))


def r_by_element(e: ExperimentLike) -> Tuple[int, ...]:
    """For each element in the given order, how many others differ from it at exactly two sites."""
    s = _strings(e)
    return tuple(sum(orthogonal_sites(p, q) == 2 for q in s if q is not p) for p in s)


def r_invariant(e: ExperimentLike) -> Tuple[int, ...]:
    """The R invariant as a multiset (sorted, descending)."""
    return tuple(sorted(r_by_element(e), reverse=True))


def triad_profile(e: ExperimentLike) -> Tuple[int, ...]:
    """Triad-site counts over all 3-element subsets, as a sorted multiset (descending).

    Empty for fewer than three elements.
    """
    s = _strings(e)
    return tuple(sorted((_triad_sites(t) for t in itertools.combinations(s, 3)), reverse=True))


@dataclass(frozen=True)
class InvariantRecord:
    c: int
    r: Tuple[int, ...]
    triad_profile: Tuple[int, ...]
    r_by_element: Tuple[int, ...]

    @property
    def key(self) -> tuple:
        """The equivalence-invariant part (drops the per-element ordering)."""
        return (self.c, self.r, self.triad_profile)


def invariants(e: ExperimentLike) -> InvariantRecord:
    return InvariantRecord(
        c=c_invariant(e),
        r=r_invariant(e),
        triad_profile=triad_profile(e),
        r_by_element=r_by_element(e),
    )
