"""JSON and CSV files for sequences, plus small CSV/JSON writing helpers.

Rational fields are written as ``"num/den"`` strings and round-trip exactly.
Floats go out with 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .rational import as_rational, fmt
from .seqcore import FAMILIES, RationalPhaseSequence, render

CSV_HEADER = ["n", "phase_num", "phase_den", "re", "im"]


class SequenceFormatError(ValueError):
    """Raised for malformed sequence files; the message names the line or field."""


def ffmt(x: float) -> str:
    return f"{float(x):.12g}"


def jsonable(value: Any) -> Any:
    """Recursively turn Fractions into ``"p/q"`` strings and numpy scalars into Python ones."""
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_table(path_or_buf, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Write a comma-separated table with LF endings and return its text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    text = buf.getvalue()
    if path_or_buf is not None:
        Path(path_or_buf).write_text(text, newline="")
    return text


def _cell(v: Any) -> str:
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, (float, np.floating)):
        return ffmt(v)
    return str(v)


def sequence_to_json(seq: RationalPhaseSequence) -> str:
    doc = {
        "family": seq.label,
        "params": seq.params,
        "N": seq.N,
        "phases": list(seq.phases),
    }
    return dumps_json(doc)


def sequence_from_json(text: str) -> RationalPhaseSequence:
    if not text.strip():
        raise SequenceFormatError("empty sequence file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SequenceFormatError("top-level JSON value must be an object")
    for key in ("family", "N", "phases"):
        if key not in doc:
            raise SequenceFormatError(f"missing field {key!r}")
    family = doc["family"]
    if family not in FAMILIES:
        raise SequenceFormatError(f"field 'family': unknown family {family!r}")
    phases = []
    for i, p in enumerate(doc["phases"]):
        try:
            phases.append(as_rational(p))
        except (TypeError, ValueError) as exc:
            raise SequenceFormatError(f"field 'phases[{i}]': {exc}") from exc
    if doc["N"] != len(phases):
        raise SequenceFormatError(f"field 'N'={doc['N']} but {len(phases)} phases given")
    params = _params_from_json(doc.get("params", {}))
    try:
        return RationalPhaseSequence(tuple(phases), family, params)
    except ValueError as exc:
        raise SequenceFormatError(str(exc)) from exc


def _params_from_json(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key in ("N", "m", "s", "alpha", "beta"):
            out[key] = value
        elif isinstance(value, list):
            out[key] = [as_rational(v) for v in value]
        else:
            out[key] = as_rational(value)
    return out


def sequence_to_csv(seq: RationalPhaseSequence) -> str:
    values = render(seq)
    rows = (
        (n, p.numerator, p.denominator, ffmt(z.real), ffmt(z.imag))
        for n, (p, z) in enumerate(zip(seq.phases, values))
    )
    return write_table(None, CSV_HEADER, rows)


def sequence_from_csv(text: str, family: str = "gsc") -> RationalPhaseSequence:
    """Parse the CSV form; parameters are not stored in CSV so ``params`` is empty."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise SequenceFormatError("empty sequence file")
    reader = csv.reader(lines)
    header = next(reader)
    if header != CSV_HEADER:
        raise SequenceFormatError(f"line 1: expected header {','.join(CSV_HEADER)}")
    phases = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(CSV_HEADER):
            raise SequenceFormatError(f"line {lineno}: expected {len(CSV_HEADER)} fields")
        try:
            n = int(row[0])
            num, den = int(row[1]), int(row[2])
        except ValueError as exc:
            raise SequenceFormatError(f"line {lineno}: {exc}") from exc
        if n != len(phases):
            raise SequenceFormatError(f"line {lineno}: field 'n' out of order")
        if den <= 0:
            raise SequenceFormatError(f"line {lineno}: field 'phase_den' must be positive")
        phases.append(Fraction(num, den))
    if not phases:
        raise SequenceFormatError("no sequence entries")
    return RationalPhaseSequence(tuple(phases), family, {})


def save_sequence(seq: RationalPhaseSequence, path) -> None:
    path = Path(path)
    text = sequence_to_csv(seq) if path.suffix.lower() == ".csv" else sequence_to_json(seq)
    path.write_text(text, newline="")


def load_sequence(path) -> RationalPhaseSequence:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return sequence_from_csv(text)
    return sequence_from_json(text)
