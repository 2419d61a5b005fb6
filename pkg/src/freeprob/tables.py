"""Labelled coefficient tables and verification findings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalar import Scalar

__all__ = ["CoeffTable", "Finding"]


@dataclass(frozen=True)
class Finding:
    """Outcome of comparing a printed formula (or identity) with an oracle.

    ``holds`` says whether the two sides agree exactly.  ``data`` carries
    Scalars in textual form (diffs, ratios, the matching variant, ...).
    """

    name: str
    holds: bool
    detail: str = ""
    data: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "holds": self.holds, "detail": self.detail, "data": dict(self.data)}

    @classmethod
    def from_dict(cls, d: dict) -> Finding:
        return cls(d["name"], bool(d["holds"]), d.get("detail", ""), dict(d.get("data", {})))


@dataclass(frozen=True)
class CoeffTable:
    """A labelled run of exact coefficients with contiguous indices."""

    label: str
    entries: tuple[tuple[int, Scalar], ...]
    order: int
    provenance: str = "closed-form"
    errata: tuple[Finding, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(n), Scalar(v)) for n, v in self.entries))
        idx = [n for n, _ in self.entries]
        if idx and idx != list(range(idx[0], idx[0] + len(idx))):
            raise ValueError(f"table {self.label!r} has non-contiguous indices {idx}")
        if self.provenance not in ("closed-form", "oracle"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def from_values(cls, label, values, start=1, order=None, **kw) -> CoeffTable:
        values = list(values)
        if order is None:
            order = start + len(values) - 1
        return cls(label, tuple((start + i, v) for i, v in enumerate(values)), order, **kw)

    def __getitem__(self, n: int) -> Scalar:
        for k, v in self.entries:
            if k == n:
                return v
        raise KeyError(n)

    def __len__(self):
        return len(self.entries)

    def indices(self) -> list[int]:
        return [n for n, _ in self.entries]

    def values(self) -> list[Scalar]:
        return [v for _, v in self.entries]

    def with_errata(self, *findings: Finding) -> CoeffTable:
        return CoeffTable(self.label, self.entries, self.order, self.provenance, self.errata + findings)
