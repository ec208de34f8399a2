"""Deterministic ingestion and emission of stacks, series, and result grids.

Stack format: a directory holding `stack.json` (header) and `stack.bin`
(payload).  The payload is p*rows*cols little-endian complex64 samples
(float32 real, float32 imag pairs), acquisition-major then row-major, which
is exactly numpy's C-ordered '<c8' layout for an array shaped (p, rows, cols).

All readers validate fully before returning; no partially constructed value
escapes.  Read-then-write round trips are byte-exact.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (
    HeaderPayloadMismatch,
    MissingFile,
    NegativePrecip,
    NonFiniteSample,
    NonMonotonicDates,
    OutOfRangeSsm,
    ParseError,
)

HEADER_NAME = "stack.json"
PAYLOAD_NAME = "stack.bin"
GRID_HEADER = ["cell_row", "cell_col", "date", "ssm", "cost", "dry_flag"]


def _require_increasing(values, what: str) -> None:
    for prev, cur in zip(values, values[1:]):
        if cur <= prev:
            raise NonMonotonicDates(f"{what} must be strictly increasing: {prev} then {cur}")


@dataclass
class SlcStack:
    """Co-registered single-look-complex stack plus radar metadata."""

    dates: list[date]
    pixels: np.ndarray  # complex64, shape (p, rows, cols)
    frequency_hz: float = 5.405e9
    incidence_angle_deg: float = 39.0
    extra: dict = field(default_factory=dict)  # auxiliary header keys, preserved on write

    def __post_init__(self):
        self.pixels = np.ascontiguousarray(self.pixels, dtype=np.complex64)
        if self.pixels.ndim != 3:
            raise HeaderPayloadMismatch("pixel array must be (p, rows, cols)")
        if len(self.dates) != self.pixels.shape[0]:
            raise HeaderPayloadMismatch(
                f"{len(self.dates)} dates but {self.pixels.shape[0]} acquisitions"
            )
        _require_increasing(self.dates, "acquisition dates")
        flat = self.pixels.ravel()
        finite = np.isfinite(flat.real) & np.isfinite(flat.imag)
        if not finite.all():
            raise NonFiniteSample(int(np.argmin(finite)))

    @property
    def p(self) -> int:
        return self.pixels.shape[0]

    @property
    def rows(self) -> int:
        return self.pixels.shape[1]

    @property
    def cols(self) -> int:
        return self.pixels.shape[2]

    def amplitude(self) -> np.ndarray:
        return np.abs(self.pixels.astype(np.complex128))


def read_slc_stack(path) -> SlcStack:
    """Read and fully validate a stack directory."""
    root = Path(path)
    header_path = root / HEADER_NAME
    payload_path = root / PAYLOAD_NAME
    for p in (header_path, payload_path):
        if not p.is_file():
            raise MissingFile(str(p))
    header = json.loads(header_path.read_text(encoding="utf-8"))
    p_count, rows, cols = int(header["p"]), int(header["rows"]), int(header["cols"])
    expected = p_count * rows * cols * 8
    raw = payload_path.read_bytes()
    if len(raw) != expected:
        raise HeaderPayloadMismatch(
            f"payload is {len(raw)} bytes, header implies {expected}"
        )
    pixels = np.frombuffer(raw, dtype="<c8").reshape(p_count, rows, cols)
    dates = [date.fromisoformat(d) for d in header["dates"]]
    known = {"p", "rows", "cols", "dates", "frequency_hz", "incidence_angle_deg"}
    extra = {k: v for k, v in header.items() if k not in known}
    return SlcStack(
        dates=dates,
        pixels=pixels.copy(),
        frequency_hz=float(header["frequency_hz"]),
        incidence_angle_deg=float(header["incidence_angle_deg"]),
        extra=extra,
    )


def write_slc_stack(stack: SlcStack, path) -> None:
    """Write a stack directory with a canonical header serialization."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    header = {
        "p": stack.p,
        "rows": stack.rows,
        "cols": stack.cols,
        "dates": [d.isoformat() for d in stack.dates],
        "frequency_hz": stack.frequency_hz,
        "incidence_angle_deg": stack.incidence_angle_deg,
    }
    header.update(stack.extra)
    text = json.dumps(header, sort_keys=True, indent=2) + "\n"
    (root / HEADER_NAME).write_text(text, encoding="utf-8")
    payload = np.ascontiguousarray(stack.pixels, dtype="<c8")
    (root / PAYLOAD_NAME).write_bytes(payload.tobytes())


@dataclass
class MeteoSeries:
    """Daily meteorological records: precipitation, air temperature, snow depth."""

    dates: list[date]
    precip_mm: np.ndarray
    temp_c: np.ndarray
    snow_mm: np.ndarray

    def __post_init__(self):
        _require_increasing(self.dates, "meteo dates")
        self._index = {d: i for i, d in enumerate(self.dates)}

    def __len__(self) -> int:
        return len(self.dates)

    def index_of(self, day: date) -> int | None:
        return self._index.get(day)


def read_meteo(path) -> MeteoSeries:
    """Parse a `date,precip_mm,temp_c,snow_mm` CSV."""
    p = Path(path)
    if not p.is_file():
        raise MissingFile(str(p))
    dates, precip, temp, snow = [], [], [], []
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["date", "precip_mm", "temp_c", "snow_mm"]:
            raise ParseError(1, f"unexpected meteo header {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                dates.append(date.fromisoformat(row[0]))
                precip.append(float(row[1]))
                temp.append(float(row[2]))
                snow.append(float(row[3]))
            except (ValueError, IndexError) as exc:
                raise ParseError(lineno, str(exc)) from exc
            if precip[-1] < 0.0:
                raise NegativePrecip(f"row {lineno}: precip {precip[-1]} mm")
            if snow[-1] < 0.0:
                raise NegativePrecip(f"row {lineno}: snow depth {snow[-1]} mm")
    return MeteoSeries(dates, np.array(precip), np.array(temp), np.array(snow))


def _parse_datetime(text: str) -> datetime:
    # Python 3.10 fromisoformat rejects a trailing Z
    ts = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


@dataclass
class SsmSeries:
    """Reference surface soil moisture samples, m^3/m^3."""

    times: list[datetime]
    ssm: np.ndarray

    def __post_init__(self):
        _require_increasing(self.times, "reference datetimes")


def read_reference_ssm(path) -> SsmSeries:
    """Parse a `datetime,ssm` CSV with ISO-8601 timestamps."""
    p = Path(path)
    if not p.is_file():
        raise MissingFile(str(p))
    times, ssm = [], []
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["datetime", "ssm"]:
            raise ParseError(1, f"unexpected reference header {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                times.append(_parse_datetime(row[0]))
                ssm.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ParseError(lineno, str(exc)) from exc
            if not (0.0 <= ssm[-1] <= 1.0):
                raise OutOfRangeSsm(f"row {lineno}: ssm {ssm[-1]} outside [0, 1]")
    return SsmSeries(times, np.array(ssm))


@dataclass
class GridRow:
    """One estimated value of the output grid."""

    cell_row: int
    cell_col: int
    date: date
    ssm: float
    cost: float
    dry_flag: int


def write_ssm_grid(rows: list[GridRow], path) -> None:
    """Write the result grid CSV in cell-major, then date order.

    Floats are serialized with `repr` (shortest round-trip form) so that
    parse-then-write reproduces the file byte for byte.
    """
    ordered = sorted(rows, key=lambda r: (r.cell_row, r.cell_col, r.date))
    buf = io.StringIO()
    buf.write(",".join(GRID_HEADER) + "\n")
    for r in ordered:
        buf.write(
            f"{r.cell_row},{r.cell_col},{r.date.isoformat()},{r.ssm!r},{r.cost!r},{r.dry_flag}\n"
        )
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_ssm_grid(path) -> list[GridRow]:
    """Parse a grid CSV produced by :func:`write_ssm_grid`."""
    p = Path(path)
    if not p.is_file():
        raise MissingFile(str(p))
    out = []
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != GRID_HEADER:
            raise ParseError(1, f"unexpected grid header {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                out.append(
                    GridRow(
                        cell_row=int(row[0]),
                        cell_col=int(row[1]),
                        date=date.fromisoformat(row[2]),
                        ssm=float(row[3]),
                        cost=float(row[4]),
                        dry_flag=int(row[5]),
                    )
                )
            except (ValueError, IndexError) as exc:
                raise ParseError(lineno, str(exc)) from exc
    return out
