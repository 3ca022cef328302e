"""Report documents and sweep rows, with table / JSON / CSV rendering."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields

from .engine import InvariantReport

SCHEMA_VERSION = 1

CSV_HEADER = (
    "family", "p", "n", "degree", "genus",
    "rank_matrix", "rank_counting", "rank_closed",
    "a_number", "p_rank", "agree",
)

DOCUMENT_FIELDS = (
    "schema_version", "family", "p", "n", "degree", "genus", "cartier_rank",
    "a_number", "p_rank", "nilpotency_index", "superspecial", "ordinary",
    "methods", "timings",
)


def ranks_agree(*ranks: int | None) -> bool:
    present = {r for r in ranks if r is not None}
    return len(present) <= 1


def report_document(rep: InvariantReport) -> dict:
    """Plain dict in the fixed field order of the JSON schema."""
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(
        family=rep.family,
        p=rep.p,
        n=rep.n,
        degree=rep.degree,
        genus=rep.genus,
        cartier_rank=rep.cartier_rank,
        a_number=rep.a_number,
        p_rank=rep.p_rank,
        nilpotency_index=rep.nilpotency_index,
        superspecial=rep.superspecial,
        ordinary=rep.ordinary,
        methods=dict(rep.methods),
        timings={k: float(v) for k, v in rep.timings.items()},
    )
    assert tuple(doc) == DOCUMENT_FIELDS
    return doc


def dumps_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=True, separators=(", ", ": "))


@dataclass(frozen=True)
class SweepRow:
    family: str
    variant: str | None
    p: int
    s: int | None
    n: int
    degree: int
    genus: int
    rank_matrix: int | None
    rank_counting: int | None
    rank_closed: int | None
    a_number: int | None
    p_rank: int | None

    @property
    def agree(self) -> bool:
        return ranks_agree(self.rank_matrix, self.rank_counting, self.rank_closed)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["agree"] = self.agree
        return d

    def csv_values(self) -> list:
        d = self.as_dict()
        return [d[k] for k in CSV_HEADER]


ROW_FIELDS = tuple(f.name for f in fields(SweepRow)) + ("agree",)


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[_cell(v) for v in r] for r in rows]
    widths = [max(len(r[c]) for r in cells) for c in range(len(header))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_document_table(doc: dict) -> str:
    width = max(len(k) for k in doc)
    out = []
    for k, v in doc.items():
        if isinstance(v, dict):
            v = ", ".join(f"{a}={b:.4g}" if isinstance(b, float) else f"{a}={b}" for a, b in v.items()) or "-"
        out.append(f"{k.ljust(width)}  {_cell(v)}")
    return "\n".join(out)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_csv_cell(v) for v in r])
    return buf.getvalue()
