"""Report documents (JSON / CSV / text) and the on-disk zero cache."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import warnings
from enum import Enum
from pathlib import Path

import numpy as np

from . import __version__
from .identity import IdentityReport
from .zeros import StripScanCell, ZeroRecord, find_critical_zeros

SCHEMA_VERSION = 1
FINDING_THRESHOLD = 1e-6
ZERO_COLUMNS = ("n", "tau", "bracket_width", "eq20_residual", "eq20_truncated_residual",
                "tau_asymptotic", "asymptotic_error")
IDENTITY_COLUMNS = ("id", "lhs", "rhs", "abs_residual", "rel_residual", "suspect", "note")
SCAN_COLUMNS = ("kind", "sigma", "tau", "residual_eq25", "residual_eq25_plus", "residual_system")


class CacheError(Exception):
    """Zero cache missing, unreadable or inconsistent."""


# ---------------------------------------------------------------------------
# JSON with fixed float formatting
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = format(x, ".17g")
    # keep floats recognisable as floats after a round trip
    return text if any(ch in text for ch in ".e") else text + ".0"


def to_plain(obj):
    """Dataclasses, enums, numpy scalars and complex numbers -> JSON-ready values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, np.ndarray)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    obj = to_plain(obj)
    out: list[str] = []

    def emit(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, bool) or v is None:
            out.append(json.dumps(v))
        elif isinstance(v, int):
            out.append(str(v))
        elif isinstance(v, float):
            out.append(_num(v))
        elif isinstance(v, str):
            out.append(json.dumps(v, ensure_ascii=False))
        elif isinstance(v, dict):
            if not v:
                out.append("{}")
                return
            out.append("{\n")
            for i, (k, item) in enumerate(v.items()):
                out.append(f"{pad}{json.dumps(k, ensure_ascii=False)}: ")
                emit(item, level + 1)
                out.append(",\n" if i < len(v) - 1 else "\n")
            out.append(end + "}")
        elif isinstance(v, list):
            if not v:
                out.append("[]")
                return
            out.append("[\n")
            for i, item in enumerate(v):
                out.append(pad)
                emit(item, level + 1)
                out.append(",\n" if i < len(v) - 1 else "\n")
            out.append(end + "]")
        else:
            raise TypeError(f"cannot serialise {type(v).__name__}")

    emit(obj, 0)
    return "".join(out) + "\n"


_SPECIAL = {"NaN": float("nan"), "Infinity": float("inf"), "-Infinity": float("-inf")}


def _revive(v):
    if isinstance(v, str) and v in _SPECIAL:
        return _SPECIAL[v]
    if isinstance(v, dict):
        if set(v) == {"re", "im"}:
            return complex(_revive(v["re"]), _revive(v["im"]))
        return {k: _revive(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_revive(x) for x in v]
    return v


def loads(text: str):
    """Inverse of :func:`dumps` (complex and non-finite values restored)."""
    return _revive(json.loads(text))


def identity_from_dict(d: dict) -> IdentityReport:
    return IdentityReport(d["id"], complex(d["lhs"]), complex(d["rhs"]),
                          float(d["abs_residual"]), float(d["rel_residual"]),
                          d.get("params", {}), d.get("note", ""), bool(d.get("suspect", False)))


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------

def is_finding(r: IdentityReport) -> bool:
    return r.suspect or r.abs_residual > FINDING_THRESHOLD


def findings_for(identities, scan_summary: dict | None = None) -> list[str]:
    """One sentence per identity residual that is attributed to the source formula."""
    out = []
    for r in identities:
        if is_finding(r) and math.isfinite(r.abs_residual):
            tag = "suspect" if r.suspect else "residual above 1e-6"
            line = f"{r.id}: |lhs - rhs| = {r.abs_residual:.3e} ({tag})"
            if r.note:
                line += f"; {r.note}"
            out.append(line)
    groups: dict[str, list[IdentityReport]] = {}
    for r in identities:
        if r.id.startswith("eq25[denominator="):
            groups.setdefault(r.id.split(",")[0], []).append(r)
    if groups:
        worst = {k: max(r.abs_residual for r in v) for k, v in groups.items()}
        best = min(worst, key=worst.get)
        form = best.split("=", 1)[1]
        out.append(f"eq25 denominator: {form} is consistent with J computed directly "
                   f"(max residual {worst[best]:.3e}); "
                   + ", ".join(f"{k.split('=', 1)[1]}: {v:.3e}" for k, v in worst.items()
                               if k != best))
    if scan_summary and scan_summary.get("conjecture", {}).get("sign_change"):
        c = scan_summary["conjecture"]
        out.append(f"final-conjecture expression changes sign on the scanned grid "
                   f"(min |value| {c['min_abs_value']:.3e} at s, t = {c['argmin']})")
    return out


def build_document(config: dict, identities=(), zeros=(), scans=(), findings=None,
                   summary: dict | None = None) -> dict:
    identities = sorted(identities, key=lambda r: r.id)
    doc = {
        "artifact_version": __version__,
        "config": dict(config),
        "identities": list(identities),
        "zeros": list(zeros),
        "scans": list(scans),
        "findings": list(findings if findings is not None else findings_for(identities, summary)),
    }
    if summary:
        doc["summary"] = summary
    return doc


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return _num(v).strip('"')
    if isinstance(v, complex):
        re, im = _num(v.real).strip('"'), _num(v.imag).strip('"')
        return f"{re}{'' if im.startswith('-') else '+'}{im}j"
    return str(v)


def _rows(items, columns):
    for it in items:
        yield [_cell(getattr(it, c)) for c in columns]


def emit_report(doc: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps(doc)
    tables = [("identities", IDENTITY_COLUMNS, doc.get("identities", [])),
              ("zeros", ZERO_COLUMNS, doc.get("zeros", [])),
              ("scans", SCAN_COLUMNS, doc.get("scans", []))]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        for name, cols, items in tables:
            w.writerow([f"[{name}]"])
            w.writerow(cols)
            w.writerows(_rows(items, cols))
            w.writerow([])
        w.writerow(["[findings]"])
        for f in doc.get("findings", []):
            w.writerow([f])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"artifact_version {doc.get('artifact_version')}"]
        for name, cols, items in tables:
            if not items:
                continue
            rows = [list(cols)] + list(_rows(items, cols))
            widths = [min(max(len(r[i]) for r in rows), 60) for i in range(len(cols))]
            lines.append(f"\n== {name} ({len(items)}) ==")
            for r in rows:
                lines.append("  ".join(c[:60].ljust(w) for c, w in zip(r, widths)).rstrip())
        if doc.get("summary"):
            lines.append("\n== summary ==")
            lines.append(dumps(doc["summary"]).rstrip())
        lines.append(f"\n== findings ({len(doc.get('findings', []))}) ==")
        lines.extend(f"- {f}" for f in doc.get("findings", []))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# zero cache
# ---------------------------------------------------------------------------

def _write_text(path: Path, text: str):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def save_zero_cache(path, records: list[ZeroRecord]):
    doc = {"schema_version": SCHEMA_VERSION, "count": len(records),
           "records": sorted(records, key=lambda r: r.n)}
    _write_text(Path(path), dumps(doc))


def load_zero_cache(path) -> list[ZeroRecord]:
    path = Path(path)
    try:
        doc = loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CacheError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise CacheError(f"{path}: unexpected schema_version")
    recs = doc.get("records")
    if not isinstance(recs, list) or doc.get("count") != len(recs):
        raise CacheError(f"{path}: record count mismatch")
    try:
        out = [ZeroRecord(**{k: r[k] for k in ZERO_COLUMNS}) for r in recs]
    except (KeyError, TypeError) as exc:
        raise CacheError(f"{path}: malformed record ({exc})") from exc
    if [r.n for r in out] != list(range(1, len(out) + 1)) or \
            any(b.tau <= a.tau for a, b in zip(out, out[1:])):
        raise CacheError(f"{path}: records not consecutive and increasing")
    return out


def ensure_zeros(path, count: int, step: float = 0.05) -> tuple[list[ZeroRecord], bool]:
    """First ``count`` zero records, reusing the cache when it is long enough.

    Returns (records, computed).  A corrupt cache is replaced, with a warning.
    """
    path = Path(path)
    if path.exists():
        try:
            cached = load_zero_cache(path)
            if len(cached) >= count:
                return cached[:count], False
        except CacheError as exc:
            warnings.warn(f"discarding corrupt zero cache: {exc}", RuntimeWarning)
    records = find_critical_zeros(count, step)
    save_zero_cache(path, records)
    return records, True


def write_document(path, doc: dict):
    _write_text(Path(path), dumps(doc))


def read_document(path) -> dict:
    path = Path(path)
    try:
        return loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def scans_from_dicts(items) -> list[StripScanCell]:
    return [StripScanCell(**d) for d in items]
