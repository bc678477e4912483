"""
Encounter CSV I/O for encprim

Reads and writes the geographic (t,lat1,lon1,v1,lat2,lon2,v2) and projected
(t,x1,y1,v1,x2,y2,v2) encounter schemas. An optional first line
`# rate_hz=<value>` declares the sampling rate.
"""

from __future__ import annotations

import io
import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import EncounterParseError, EncounterValidationError
from .models import (
    N_COLUMNS,
    SPACING_TOLERANCE_S,
    T_COL,
    V1_COL,
    V2_COL,
    CoordinateFrame,
    DrivingEncounter,
)


logger = logging.getLogger(__name__)

GEOGRAPHIC_COLUMNS = ["t", "lat1", "lon1", "v1", "lat2", "lon2", "v2"]
LOCAL_COLUMNS = ["t", "x1", "y1", "v1", "x2", "y2", "v2"]

SCHEMAS: dict[CoordinateFrame, list[str]] = {
    CoordinateFrame.GEOGRAPHIC_DEGREES: GEOGRAPHIC_COLUMNS,
    CoordinateFrame.LOCAL_METERS: LOCAL_COLUMNS,
}

_RATE_LINE = re.compile(r"^#\s*rate_hz\s*=\s*(\S+)\s*$")
_PANDAS_LINE = re.compile(r"line (\d+)")


def _frame_for_header(columns: list[str], line: int) -> CoordinateFrame:
    for frame, schema in SCHEMAS.items():
        if columns == schema:
            return frame
    raise EncounterParseError(
        f"unexpected header {','.join(columns)!r}; expected "
        f"{','.join(GEOGRAPHIC_COLUMNS)!r} or {','.join(LOCAL_COLUMNS)!r}",
        line=line,
    )


def _parse_column(values: list[object], name: str, first_line: int) -> np.ndarray:
    for i, raw in enumerate(values):
        if raw is None or (isinstance(raw, float) and np.isnan(raw)) or not str(raw).strip():
            raise EncounterParseError(f"blank field '{name}'", line=first_line + i)

    try:
        parsed = np.array(values, dtype=np.float64)
    except (TypeError, ValueError):
        parsed = None

    if parsed is None:
        for i, raw in enumerate(values):
            text = str(raw)
            try:
                float(text)
            except ValueError:
                raise EncounterParseError(
                    f"cannot parse '{name}' value {text!r}", line=first_line + i
                ) from None
        raise EncounterParseError(f"cannot parse column '{name}'", line=first_line)

    bad = np.flatnonzero(~np.isfinite(parsed))
    if bad.size:
        raise EncounterParseError(f"non-finite '{name}' value", line=first_line + int(bad[0]))
    return parsed


def _infer_rate(t: np.ndarray) -> float:
    return round(1.0 / float(np.median(np.diff(t))), 6)


def _resample_uniform(data: np.ndarray, rate_hz: float) -> np.ndarray:
    t = data[:, T_COL]
    n = int(np.floor((t[-1] - t[0]) * rate_hz + 1e-9)) + 1
    grid = t[0] + np.arange(n) / rate_hz
    out = np.empty((n, N_COLUMNS))
    out[:, T_COL] = grid
    for col in range(1, N_COLUMNS):
        out[:, col] = np.interp(grid, t, data[:, col])
    return out


def load_encounter_csv(
    path: Path | str,
    *,
    resample: bool = False,
    rate_hz: float | None = None,
    encounter_id: str | None = None,
) -> DrivingEncounter:
    """
    Load an encounter CSV.

    Args:
        path: CSV file in either encounter schema
        resample: Linearly interpolate onto a uniform grid instead of
                  rejecting non-uniform spacing
        rate_hz: Sampling rate override (else the `# rate_hz=` line, else 1/median dt)
        encounter_id: Identifier override (defaults to the file stem)

    Returns:
        DrivingEncounter in the frame implied by the header
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Encounter file not found: {path}")

    text = path.read_text(encoding="utf-8")
    header_line = 1
    declared_rate = None
    first, _, rest = text.partition("\n")
    match = _RATE_LINE.match(first)
    if match:
        try:
            declared_rate = float(match.group(1))
        except ValueError:
            raise EncounterParseError(f"invalid rate declaration {first!r}", line=1) from None
        text = rest
        header_line = 2

    try:
        df = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.EmptyDataError:
        raise EncounterParseError("empty file", line=header_line) from None
    except pd.errors.ParserError as e:
        found = _PANDAS_LINE.search(str(e))
        line = int(found.group(1)) + header_line - 1 if found else None
        raise EncounterParseError(f"malformed row ({e})", line=line) from None

    frame = _frame_for_header([str(c).strip() for c in df.columns], header_line)
    first_data_line = header_line + 1
    if len(df) == 0:
        raise EncounterValidationError("no samples", line=first_data_line)

    data = np.column_stack(
        [
            _parse_column(df[col].tolist(), name, first_data_line)
            for col, name in zip(df.columns, SCHEMAS[frame])
        ]
    )

    t = data[:, T_COL]
    dt = np.diff(t)
    bad = np.flatnonzero(dt <= 0)
    if bad.size:
        raise EncounterValidationError("non-monotonic time", line=first_data_line + int(bad[0]) + 1)

    negative = np.flatnonzero((data[:, [V1_COL, V2_COL]] < 0).any(axis=1))
    if negative.size:
        raise EncounterValidationError("negative speed", line=first_data_line + int(negative[0]))

    if len(t) < 2:
        raise EncounterValidationError("need at least 2 samples", line=first_data_line)

    rate = rate_hz or declared_rate or _infer_rate(t)
    off_grid = np.flatnonzero(np.abs(dt - 1.0 / rate) > SPACING_TOLERANCE_S)
    if off_grid.size:
        if not resample:
            raise EncounterValidationError(
                f"non-uniform sampling interval (expected {1.0 / rate:g} s)",
                line=first_data_line + int(off_grid[0]) + 1,
            )
        logger.debug(f"Resampling {path.name} onto a uniform {rate} Hz grid")
        data = _resample_uniform(data, rate)

    return DrivingEncounter(
        id=encounter_id or path.stem,
        data=data,
        rate_hz=rate,
        frame=frame,
    )


def save_encounter_csv(enc: DrivingEncounter, path: Path | str) -> Path:
    """Write an encounter in the schema of its frame, preceded by its rate line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    df = pd.DataFrame(np.asarray(enc.data), columns=SCHEMAS[enc.frame])
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# rate_hz={enc.rate_hz!r}\n")
        df.to_csv(f, index=False, lineterminator="\n")
    return path


def list_encounter_files(directory: Path | str) -> list[Path]:
    """Encounter CSVs of a directory in name order, excluding truth sidecars."""
    directory = Path(directory)
    return sorted(
        p for p in directory.glob("*.csv") if not p.name.endswith(".truth.csv")
    )
