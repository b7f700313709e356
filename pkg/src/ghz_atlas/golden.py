"""Shipped reference data: labeled canonical forms, invariant tables, value tables."""

from __future__ import annotations

import functools
import json
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .experiment import Experiment, parse_words, validate
from .pauli import PauliString
from .symmetry import canonical_key


def _load(name: str) -> dict:
    return json.loads(resources.files("ghz_atlas").joinpath("data").joinpath(name).read_text())


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


@functools.lru_cache(maxsize=None)
def labeled_forms() -> Dict[str, Tuple[PauliString, ...]]:
    """Label -> elements in the order they are listed (eps indices follow this order)."""
    data = _load("labeled_forms.json")
    return {label: parse_words(words) for label, words in data["forms"].items()}


@functools.lru_cache(maxsize=None)
def nontrivial_labels() -> Tuple[str, ...]:
    return tuple(_load("labeled_forms.json")["nontrivial"])


def form_experiment(label: str) -> Experiment:
    return validate(labeled_forms()[label])


@functools.lru_cache(maxsize=None)
def _label_index() -> Dict[Tuple[int, Tuple[int, ...]], List[str]]:
    index: Dict[Tuple[int, Tuple[int, ...]], List[str]] = {}
    for label, strings in labeled_forms().items():
        e = validate(strings)
        index.setdefault((e.n, canonical_key(e.codes, e.n)), []).append(label)
    return index


def labels_for(e: Experiment) -> List[str]:
    """Every label whose form is equivalent to ``e``."""
    return list(_label_index().get((e.n, canonical_key(e.codes, e.n)), []))


def format_labels(labels: List[str]) -> Optional[str]:
    if not labels:
        return None
    return ", ".join(f"({l})" for l in labels)


def reference_tables(path=None) -> dict:
    """Invariant tables keyed by roman numeral: ``{"size": k, "rows": [{label, c, r}]}``."""
    data = load_json(path) if path is not None else _load("invariant_tables.json")
    return data["tables"]


def reference_assignments() -> Dict[str, Dict[str, Dict[str, str]]]:
    """Value tables keyed by source ("II", "IV", "text"), then label."""
    return _load("assignments.json")["assignments"]


def schema() -> dict:
    return _load("report.schema.json")
