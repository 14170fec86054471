"""Band-edge reports and their table, CSV and JSON renderings.

A :class:`Report` holds energies already rounded to six significant digits,
so parsing an emitted CSV or JSON document gives back an equal report.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .potential import PotentialSpec
from .quantization import BandStructure

SIG_DIGITS = 6


def sig(x: float | None) -> float | None:
    """Round to six significant digits (``None`` passes through)."""
    if x is None:
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.{SIG_DIGITS}g}"


def _kl_name(kL: float | None) -> str:
    if kL is None:
        return ""
    return "0" if kL == 0.0 else "pi"


def _kl_value(name: str) -> float | None:
    return {"": None, "0": 0.0, "pi": math.pi}[name]


@dataclass
class EdgeRecord:
    n: int | None
    branch: str | None
    symmetry: str
    period_multiple: int
    energy: float
    source: str
    kL: float | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "branch": self.branch,
            "symmetry": self.symmetry,
            "period_multiple": self.period_multiple,
            "energy": self.energy,
            "source": self.source,
        }


@dataclass
class CompareRow:
    index: int
    symmetry: str
    energy_exact: float | None
    energy_wkb: float | None
    n: int | None
    branch: str | None
    abs_delta: float | None


@dataclass
class Report:
    mode: str
    potential: dict
    label: str
    v_min: float
    v_max: float
    metadata: dict = field(default_factory=dict)
    edges: list[EdgeRecord] = field(default_factory=list)
    bands: list[list[float]] = field(default_factory=list)
    gaps: list[list[float]] = field(default_factory=list)
    rows: list[CompareRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def edges_from(self, source: str) -> list[EdgeRecord]:
        return [e for e in self.edges if e.source == source]


def edge_records(bs: BandStructure) -> list[EdgeRecord]:
    return [
        EdgeRecord(e.n, e.branch_sign, e.symmetry, e.period_multiple, sig(e.energy), e.source, e.kL)
        for e in bs.edges
    ]


def _pairs(pairs) -> list[list[float]]:
    return [[sig(lo), sig(hi)] for lo, hi in pairs]


def build_report(
    mode: str,
    spec: PotentialSpec,
    *,
    wkb: BandStructure | None = None,
    exact: BandStructure | None = None,
    metadata: dict | None = None,
    notes: list[str] | None = None,
) -> Report:
    v_min, v_max, _ = spec.extrema()
    report = Report(
        mode=mode,
        potential=spec.to_dict(),
        label=spec.label(),
        v_min=sig(v_min),
        v_max=sig(v_max),
        metadata=dict(metadata or {}),
        notes=list(notes or []),
    )
    structures = [bs for bs in (exact, wkb) if bs is not None]
    for bs in structures:
        report.edges.extend(edge_records(bs))
    primary = exact if exact is not None else wkb
    if primary is not None:
        report.bands = _pairs(primary.bands)
        report.gaps = _pairs(primary.gaps)
    if mode == "compare":
        report.rows = compare_rows(exact, wkb)
    return report


def compare_rows(exact: BandStructure | None, wkb: BandStructure | None) -> list[CompareRow]:
    """Align exact and WKB edges by their position in the oscillation sequence."""
    ex = list(exact.edges) if exact is not None else []
    wk = list(wkb.edges) if wkb is not None else []
    rows = []
    for i in range(max(len(ex), len(wk))):
        e = ex[i] if i < len(ex) else None
        w = wk[i] if i < len(wk) else None
        e_val = sig(e.energy) if e else None
        w_val = sig(w.energy) if w else None
        delta = sig(abs(e.energy - w.energy)) if (e and w) else None
        sym = (e or w).symmetry
        rows.append(CompareRow(i, sym, e_val, w_val, w.n if w else None, w.branch_sign if w else None, delta))
    return rows


# --- JSON ------------------------------------------------------------------

def report_to_dict(report: Report) -> dict:
    d = {
        "potential": dict(report.potential, label=report.label, v_min=report.v_min, v_max=report.v_max),
        "mode": report.mode,
        "metadata": report.metadata,
        "edges": [e.to_json() for e in report.edges],
        "bands": report.bands,
        "gaps": report.gaps,
    }
    if report.mode == "compare":
        d["rows"] = [asdict(r) for r in report.rows]
    if report.notes:
        d["notes"] = report.notes
    return d


def report_from_dict(d: dict) -> Report:
    potential = dict(d["potential"])
    label = potential.pop("label")
    v_min = potential.pop("v_min")
    v_max = potential.pop("v_max")
    return Report(
        mode=d["mode"],
        potential=potential,
        label=label,
        v_min=v_min,
        v_max=v_max,
        metadata=d["metadata"],
        edges=[
            EdgeRecord(
                e["n"], e["branch"], e["symmetry"], e["period_multiple"], e["energy"], e["source"],
                (0.0 if e["period_multiple"] == 1 else math.pi) if e["source"] == "exact" else None,
            )
            for e in d["edges"]
        ],
        bands=[list(b) for b in d["bands"]],
        gaps=[list(g) for g in d["gaps"]],
        rows=[CompareRow(**r) for r in d.get("rows", [])],
        notes=list(d.get("notes", [])),
    )


def to_json(reports: list[Report]) -> str:
    """One object for a single report, an array for several."""
    payload = [report_to_dict(r) for r in reports]
    body = payload[0] if len(payload) == 1 else payload
    return json.dumps(body, indent=2) + "\n"


def from_json(text: str) -> list[Report]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = [data]
    return [report_from_dict(d) for d in data]


# --- CSV -------------------------------------------------------------------

CSV_HEADERS = {
    "wkb": ["n", "branch", "symmetry", "period_multiple", "energy"],
    "exact": ["index", "symmetry", "kL", "energy"],
    "compare": ["index", "symmetry", "energy_exact", "energy_wkb", "n", "branch", "abs_delta"],
}


def _csv_cells(report: Report) -> list[list[str]]:
    rows = []
    if report.mode == "wkb":
        for e in report.edges:
            rows.append([str(e.n), e.branch, e.symmetry, str(e.period_multiple), _fmt(e.energy)])
    elif report.mode == "exact":
        for i, e in enumerate(report.edges):
            rows.append([str(i), e.symmetry, _kl_name(e.kL), _fmt(e.energy)])
    else:
        for r in report.rows:
            rows.append([
                str(r.index), r.symmetry, _fmt(r.energy_exact), _fmt(r.energy_wkb),
                "" if r.n is None else str(r.n), r.branch or "", _fmt(r.abs_delta),
            ])
    return rows


def to_csv(reports: list[Report], comment: str | None = None) -> str:
    """Header row then one edge (or comparison row) per line.

    Several reports share one table with a leading ``potential`` column.
    """
    buf = io.StringIO()
    if comment:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    multi = len(reports) > 1
    header = CSV_HEADERS[reports[0].mode]
    writer.writerow((["potential"] if multi else []) + header)
    for report in reports:
        for cells in _csv_cells(report):
            writer.writerow(([report.label] if multi else []) + cells)
    return buf.getvalue()


def _opt_int(s: str) -> int | None:
    return None if s == "" else int(s)


def _opt_float(s: str) -> float | None:
    return None if s == "" else float(s)


def parse_csv(text: str) -> tuple[str, list[dict]]:
    """Parse CSV output back into ``(mode, records)``.

    Records are :class:`EdgeRecord` or :class:`CompareRow` fields plus a
    ``potential`` key when the table carries several potentials.
    """
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    multi = header[0] == "potential"
    cols = header[1:] if multi else header
    mode = next(m for m, h in CSV_HEADERS.items() if h == cols)
    records = []
    for row in reader:
        rec: dict = {"potential": row[0]} if multi else {}
        cells = dict(zip(cols, row[1:] if multi else row))
        if mode == "wkb":
            rec["edge"] = EdgeRecord(
                int(cells["n"]), cells["branch"], cells["symmetry"],
                int(cells["period_multiple"]), float(cells["energy"]), "wkb",
            )
        elif mode == "exact":
            kL = _kl_value(cells["kL"])
            rec["edge"] = EdgeRecord(
                None, None, cells["symmetry"], 1 if kL == 0.0 else 2,
                float(cells["energy"]), "exact", kL,
            )
        else:
            rec["row"] = CompareRow(
                int(cells["index"]), cells["symmetry"], _opt_float(cells["energy_exact"]),
                _opt_float(cells["energy_wkb"]), _opt_int(cells["n"]), cells["branch"] or None,
                _opt_float(cells["abs_delta"]),
            )
        records.append(rec)
    return mode, records


# --- human-readable tables -------------------------------------------------

def _cell(x, decimals: int | None) -> str:
    if x is None:
        return "-"
    if decimals is None:
        return f"{x:.{SIG_DIGITS}g}"
    return f"{x:.{decimals}f}"


def _sym(s: str) -> str:
    return f"{s[0]},{s[1]}"


def format_table(report: Report, decimals: int | None = None, header: str | None = None) -> str:
    """Aligned plain-text table; ``decimals=2`` mirrors a two-decimal layout."""
    out = []
    title = header or f"# bandedge {report.mode}: V(x) = {report.label}"
    out.append(
        f"{title}  [V_min={_cell(report.v_min, None)}, V_max={_cell(report.v_max, None)}]"
    )
    if report.metadata.get("m_substituted"):
        out.append(f"# m = 1 replaced by 1 - {report.metadata['epsilon']:g} for the exact solver")
    if report.mode == "wkb":
        cols = ["n", "branch", "symmetry", "period", "E_WKB"]
        body = [
            [str(e.n), e.branch, _sym(e.symmetry), f"{e.period_multiple}L", _cell(e.energy, decimals)]
            for e in report.edges
        ]
    elif report.mode == "exact":
        cols = ["index", "symmetry", "kL", "E_exact"]
        body = [
            [str(i), _sym(e.symmetry), _kl_name(e.kL), _cell(e.energy, decimals)]
            for i, e in enumerate(report.edges)
        ]
    else:
        cols = ["E_exact", "E_WKB", "n", "symmetry", "|dE|"]
        body = [
            [
                _cell(r.energy_exact, decimals),
                _cell(r.energy_wkb, decimals),
                "-" if r.n is None else str(r.n),
                _sym(r.symmetry) if r.energy_wkb is not None else "-",
                _cell(r.abs_delta, decimals),
            ]
            for r in report.rows
        ]
    widths = [max(len(c), *(len(row[i]) for row in body)) if body else len(c) for i, c in enumerate(cols)]
    out.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    out.append("  ".join("-" * w for w in widths))
    for row in body:
        out.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    for note in report.notes:
        out.append(f"# {note}")
    return "\n".join(out) + "\n"
