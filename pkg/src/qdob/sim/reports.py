"""
Artifact Writers

CSV and JSON exports of simulation traces, frequency responses, lifted
spectra and command summaries. Floats are written in their shortest
round-trip decimal form so re-runs diff byte for byte.
"""

import csv
import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from ..utils.errors import ArtifactIOError
from .simulator import TRACE_COLUMNS, SimTrace

if TYPE_CHECKING:
    from ..analysis.lifted import LiftedSpectrum
    from ..analysis.transfer import FrequencyResponse

PathLike = Union[str, Path]

FREQUENCY_RESPONSE_COLUMNS = ("omega", "re", "im", "mag_db", "phase_deg")


def format_float(value: float) -> str:
    """Shortest decimal that parses back to the same double."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no inf/nan literals
        return value if math.isfinite(value) else format_float(value)
    return value


def write_csv_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(
                    [format_float(v) if isinstance(v, (float, np.floating)) else v for v in row]
                )
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}", path=str(path)) from e
    return path


def save_json(data: Dict[str, Any], path: PathLike) -> Path:
    """Write a JSON document with stable key order."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(json.dumps(_jsonable(data), indent=2))
            f.write("\n")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}", path=str(path)) from e
    return path


def save_trace_csv(trace: SimTrace, path: PathLike) -> Path:
    """Columns ``t, r, u, d, dhat, y, e``."""
    columns = [trace.column(name) for name in TRACE_COLUMNS]
    return write_csv_rows(path, TRACE_COLUMNS, zip(*(c.tolist() for c in columns)))


def frequency_response_rows(response: "FrequencyResponse") -> List[List[float]]:
    return [
        [w, z.real, z.imag, db, deg]
        for w, z, db, deg in zip(
            response.omega.tolist(),
            response.values.tolist(),
            response.magnitude_db().tolist(),
            response.phase_deg().tolist(),
        )
    ]


def save_frequency_response_csv(response: "FrequencyResponse", path: PathLike) -> Path:
    """Columns ``omega, re, im, mag_db, phase_deg``."""
    return write_csv_rows(path, FREQUENCY_RESPONSE_COLUMNS, frequency_response_rows(response))


def save_frequency_response_json(response: "FrequencyResponse", path: PathLike) -> Path:
    return save_json(response.to_dict(), path)


def save_lifted_spectrum_csv(spectrum: "LiftedSpectrum", path: PathLike) -> Path:
    """Long format: one row per ``(tau, omega)`` cell with ``re, im, power``."""
    rows = (
        [tau, omega, z.real, z.imag, abs(z) ** 2]
        for i, omega in enumerate(spectrum.omega.tolist())
        for tau, z in zip(spectrum.tau.tolist(), spectrum.values[i].tolist())
    )
    return write_csv_rows(path, ("tau", "omega", "re", "im", "power"), rows)


def save_lifted_spectrum_json(spectrum: "LiftedSpectrum", path: PathLike) -> Path:
    """Cycle count, axes and per-cell power from :meth:`LiftedSpectrum.to_dict`."""
    return save_json(spectrum.to_dict(), path)
