"""Table documents: symbolic plus numeric columns, as pretty text, JSON or CSV.

JSON layout::

    {"table": label, "order": N,
     "entries": [{"n": 1, "symbolic": "...", "numeric": {"t=1": "..."}}],
     "provenance": "closed-form" | "oracle",
     "errata": [finding, ...]}

Numeric values are stored as decimal strings, so a parsed document
re-renders byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor, log10

import mpmath

from .scalar import PoleError, Scalar
from .tables import CoeffTable, Finding

__all__ = ["TableDoc", "digits_for", "parse_t", "to_json", "from_json", "to_csv", "to_pretty"]


def digits_for(bits: int) -> int:
    return max(1, floor(bits * log10(2)))


def parse_t(text: str) -> Fraction:
    try:
        t = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"t must be a rational number, got {text!r}") from exc
    if t <= 0:
        raise ValueError(f"t must be positive, got {text}")
    return t


def _t_key(t: Fraction) -> str:
    return f"t={t}"


def _numeric(value: Scalar, t: Fraction, bits: int) -> str:
    try:
        return mpmath.nstr(value.eval(t, bits), digits_for(bits), strip_zeros=False)
    except PoleError:
        return "pole"


@dataclass(frozen=True)
class TableDoc:
    table: CoeffTable
    numeric: tuple[tuple[int, tuple[tuple[str, str], ...]], ...]

    @classmethod
    def build(cls, table: CoeffTable, ts=(), bits: int = 53) -> TableDoc:
        rows = tuple(
            (n, tuple((_t_key(t), _numeric(v, t, bits)) for t in ts)) for n, v in table.entries
        )
        return cls(table, rows)

    @property
    def columns(self) -> list[str]:
        return [k for k, _ in self.numeric[0][1]] if self.numeric else []

    def to_dict(self) -> dict:
        nums = dict(self.numeric)
        return {
            "table": self.table.label,
            "order": self.table.order,
            "entries": [
                {"n": n, "symbolic": str(v), "numeric": dict(nums.get(n, ()))}
                for n, v in self.table.entries
            ],
            "provenance": self.table.provenance,
            "errata": [f.to_dict() for f in self.table.errata],
        }

    @classmethod
    def from_dict(cls, d: dict) -> TableDoc:
        table = CoeffTable(
            d["table"],
            tuple((e["n"], Scalar.parse(e["symbolic"])) for e in d["entries"]),
            d["order"],
            d["provenance"],
            tuple(Finding.from_dict(f) for f in d.get("errata", [])),
        )
        numeric = tuple((e["n"], tuple(e.get("numeric", {}).items())) for e in d["entries"])
        return cls(table, numeric)


def to_json(docs: list[TableDoc]) -> str:
    payload = docs[0].to_dict() if len(docs) == 1 else [d.to_dict() for d in docs]
    return json.dumps(payload, indent=2, ensure_ascii=False)


def from_json(text: str) -> list[TableDoc]:
    payload = json.loads(text)
    if isinstance(payload, dict):
        payload = [payload]
    return [TableDoc.from_dict(d) for d in payload]


def to_csv(docs: list[TableDoc]) -> str:
    buf = io.StringIO()
    for i, doc in enumerate(docs):
        if len(docs) > 1:
            if i:
                buf.write("\n")
            buf.write(f"# table={doc.table.label} provenance={doc.table.provenance}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "symbolic", *doc.columns])
        for (n, v), (_, nums) in zip(doc.table.entries, doc.numeric):
            w.writerow([n, str(v), *(s for _, s in nums)])
    return buf.getvalue()


def _pretty_finding(f: Finding) -> list[str]:
    mark = "holds" if f.holds else "FAILS"
    lines = [f"  [{mark}] {f.name}" + (f"  ({f.detail})" if f.detail else "")]
    lines += [f"      {k}: {v}" for k, v in f.data.items()]
    return lines


def to_pretty(docs: list[TableDoc]) -> str:
    out = []
    for doc in docs:
        t = doc.table
        out.append(f"{t.label}  (order {t.order}, {t.provenance})")
        cols = doc.columns
        header = ["n", "symbolic", *cols]
        rows = [[str(n), str(v), *(s for _, s in nums)] for (n, v), (_, nums) in zip(t.entries, doc.numeric)]
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
        for r in [header, *rows]:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if t.errata:
            out.append("findings:")
            for f in t.errata:
                out.extend(_pretty_finding(f))
        out.append("")
    return "\n".join(out)
