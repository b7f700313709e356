"""Report documents: a JSON payload plus tabular sections rendered as text or CSV.

Every command builds its payload first and derives the table rows from
it, so the three output formats always carry the same data.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

FORMATS = ("text", "json", "csv")

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def eps_unicode(text: str) -> str:
    """``-e1e3`` -> ``-ε₁ε₃``; anything else passes through."""
    out = []
    i = 0
    while i < len(text):
        if text[i] == "e" and i + 1 < len(text) and text[i + 1].isdigit():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append("ε" + text[i + 1 : j].translate(_SUBSCRIPTS))
            i = j
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def symbol_unicode(site: int, axis: str) -> str:
    return axis + str(site).translate(_SUBSCRIPTS)


def assignment_unicode(text: str) -> str:
    """``x1=e1; y3=-e1e3`` -> ``ν(x₁) = ε₁, ν(y₃) = -ε₁ε₃``."""
    if not text or text == "-":
        return text
    parts = []
    for item in text.split("; "):
        sym, expr = item.split("=")
        parts.append(f"ν({symbol_unicode(int(sym[1:]), sym[0])}) = {eps_unicode(expr)}")
    return ", ".join(parts)


@dataclass
class Section:
    title: str
    header: List[str]
    rows: List[List[str]]
    # column index -> rewrite applied in text mode only
    text_cols: Dict[int, Callable[[str], str]] = field(default_factory=dict)

    def text_rows(self) -> List[List[str]]:
        if not self.text_cols:
            return self.rows
        return [
            [self.text_cols[j](c) if j in self.text_cols else c for j, c in enumerate(r)]
            for r in self.rows
        ]


@dataclass
class ReportDocument:
    """Ordered sections plus the machine-readable payload they were built from.

    ``notes`` are free text lines shown only in text mode (they also live in
    the payload when they carry data).
    """

    title: str
    payload: Dict[str, Any]
    sections: List[Section] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(
        self,
        title: str,
        header: Sequence[str],
        rows: Sequence[Sequence[Any]],
        text_cols: Optional[Dict[int, Callable[[str], str]]] = None,
    ) -> Section:
        sec = Section(title, list(header), [[str(c) for c in r] for r in rows], dict(text_cols or {}))
        self.sections.append(sec)
        return sec

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return render_json(self.payload)
        if fmt == "csv":
            return render_csv(self)
        if fmt == "text":
            return render_text(self)
        raise ValueError(f"unknown format {fmt!r}")


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(doc: ReportDocument) -> str:
    """One block per section; with several sections each block starts with ``# title``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    multi = len(doc.sections) > 1
    for k, sec in enumerate(doc.sections):
        if multi:
            if k:
                buf.write("\n")
            buf.write(f"# {sec.title}\n")
        w.writerow(sec.header)
        w.writerows(sec.rows)
    return buf.getvalue()


def _table_text(sec: Section) -> List[str]:
    rows = sec.text_rows()
    widths = [len(h) for h in sec.header]
    for r in rows:
        for j, c in enumerate(r):
            widths[j] = max(widths[j], len(c))

    def line(cells):
        return "  ".join(c.ljust(widths[j]) for j, c in enumerate(cells)).rstrip()

    out = [line(sec.header), line(["-" * w for w in widths])]
    out.extend(line(r) for r in rows)
    if not rows:
        out.append("(no rows)")
    return out


def render_text(doc: ReportDocument) -> str:
    lines = [doc.title, "=" * len(doc.title), ""]
    for sec in doc.sections:
        if sec.title:
            lines.append(sec.title)
        lines.extend(_table_text(sec))
        lines.append("")
    for note in doc.notes:
        lines.append(note)
    if doc.notes:
        lines.append("")
    return "\n".join(lines)


def parse_csv_sections(text: str) -> List[List[List[str]]]:
    """Inverse of :func:`render_csv` up to titles: list of tables, each header + rows."""
    blocks: List[List[List[str]]] = []
    current: List[List[str]] = []
    for raw in text.splitlines():
        if raw.startswith("# "):
            if current:
                blocks.append(current)
            current = []
            continue
        if not raw.strip():
            continue
        current.append(next(csv.reader([raw])))
    if current:
        blocks.append(current)
    return blocks
