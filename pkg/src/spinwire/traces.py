"""Sampled signals, coherence spectra and lineshapes, with CSV/JSON round trips.

File conventions: CSV has '#'-prefixed metadata comments, then a header row;
JSON carries a schema_version field. All floats are written with a fixed
10-significant-digit format so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1
_FLOAT_FMT = "%.10g"


class TraceFormatError(ValueError):
    """Malformed trace file; message carries the offending line number."""


def _fmt(x: float) -> str:
    return _FLOAT_FMT % float(x)


def _round_trip_float(x: float) -> float:
    return float(_FLOAT_FMT % float(x))


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def _meta_comment(meta: dict) -> str:
    return "# meta " + json.dumps(meta, sort_keys=True, default=_json_default)


def _parse_comments(lines: list[str]) -> dict:
    meta = {}
    for line in lines:
        if line.startswith("# meta "):
            meta = json.loads(line[len("# meta "):])
    return meta


@dataclass(frozen=True)
class SignalTrace:
    """Observable vs time; values are normalized and may be complex (FID)."""

    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values)
        if t.ndim != 1 or v.shape != t.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size and (np.any(np.diff(t) <= 0) or t[0] < 0):
            raise ValueError("times must be nonnegative and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("trace values must be finite")
        if not np.iscomplexobj(v):
            v = v.astype(np.float64)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def to_csv(self) -> str:
        lines = ["# spinwire signal_trace", _meta_comment(self.meta)]
        if self.is_complex:
            lines.append("time_s,value_re,value_im")
            for t, v in zip(self.times, self.values):
                lines.append(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)}")
        else:
            lines.append("time_s,value")
            for t, v in zip(self.times, self.values):
                lines.append(f"{_fmt(t)},{_fmt(v)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "signal_trace",
            "meta": self.meta,
            "times_s": [_round_trip_float(t) for t in self.times],
        }
        if self.is_complex:
            doc["values_re"] = [_round_trip_float(v.real) for v in self.values]
            doc["values_im"] = [_round_trip_float(v.imag) for v in self.values]
        else:
            doc["values"] = [_round_trip_float(v) for v in self.values]
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def signal_trace_from_csv(text: str) -> SignalTrace:
    comments, rows, header = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise TraceFormatError(f"line {lineno}: expected {len(header)} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-numeric field in {line!r}") from None
    if header is None or header[0] != "time_s":
        raise TraceFormatError("line 1: missing 'time_s,...' header row")
    data = np.asarray(rows, dtype=float).reshape(len(rows), len(header))
    if header == ["time_s", "value"]:
        values = data[:, 1]
    elif header == ["time_s", "value_re", "value_im"]:
        values = data[:, 1] + 1j * data[:, 2]
    elif header == ["time_s", "value", "order"]:
        raise TraceFormatError("this is a coherence-spectrum file; use coherence_spectrum_from_csv")
    else:
        raise TraceFormatError(f"unrecognized header {header}")
    return SignalTrace(data[:, 0], values, meta=_parse_comments(comments))


@dataclass(frozen=True)
class CoherenceSpectrum:
    """MQC intensities J_n(t) on an order grid -K..K."""

    times: np.ndarray
    orders: np.ndarray
    intensities: np.ndarray  # shape (n_times, n_orders)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        n = np.asarray(self.orders, dtype=np.int64)
        j = np.asarray(self.intensities, dtype=np.float64)
        if j.shape != (t.size, n.size):
            raise ValueError("intensities must have shape (n_times, n_orders)")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "orders", n)
        object.__setattr__(self, "intensities", j)

    def order(self, n: int) -> np.ndarray:
        """J_n as a function of time."""
        pos = np.nonzero(self.orders == n)[0]
        if pos.size != 1:
            raise ValueError(f"order {n} not present")
        return self.intensities[:, pos[0]]

    def to_csv(self) -> str:
        lines = ["# spinwire coherence_spectrum", _meta_comment(self.meta),
                 "time_s,value,order"]
        for i, t in enumerate(self.times):
            for k, n in enumerate(self.orders):
                lines.append(f"{_fmt(t)},{_fmt(self.intensities[i, k])},{n}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "coherence_spectrum",
            "meta": self.meta,
            "times_s": [_round_trip_float(t) for t in self.times],
            "orders": self.orders.tolist(),
            "intensities": [[_round_trip_float(v) for v in row] for row in self.intensities],
        }
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def coherence_spectrum_from_csv(text: str) -> CoherenceSpectrum:
    comments, rows, header = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            if header != ["time_s", "value", "order"]:
                raise TraceFormatError(f"line {lineno}: expected 'time_s,value,order' header")
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise TraceFormatError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1]), int(parts[2])))
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-numeric field in {line!r}") from None
    if header is None:
        raise TraceFormatError("line 1: empty coherence-spectrum file")
    times = sorted({r[0] for r in rows})
    orders = sorted({r[2] for r in rows})
    t_pos = {t: i for i, t in enumerate(times)}
    n_pos = {n: i for i, n in enumerate(orders)}
    j = np.zeros((len(times), len(orders)))
    for t, v, n in rows:
        j[t_pos[t], n_pos[n]] = v
    return CoherenceSpectrum(np.asarray(times), np.asarray(orders), j,
                             meta=_parse_comments(comments))


@dataclass(frozen=True)
class Spectrum:
    """Real lineshape amplitude vs frequency (Hz), zero-centered axis."""

    freqs: np.ndarray
    amps: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=np.float64)
        a = np.asarray(self.amps, dtype=np.float64)
        if f.ndim != 1 or a.shape != f.shape:
            raise ValueError("freqs and amps must be 1-d arrays of equal length")
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "amps", a)

    def fwhm(self) -> float:
        """Full width at half maximum of the main peak, Hz (linear interpolation)."""
        a = self.amps
        peak = int(np.argmax(a))
        half = a[peak] / 2.0
        left = right = None
        for i in range(peak, 0, -1):
            if a[i - 1] < half <= a[i]:
                frac = (half - a[i - 1]) / (a[i] - a[i - 1])
                left = self.freqs[i - 1] + frac * (self.freqs[i] - self.freqs[i - 1])
                break
        for i in range(peak, a.size - 1):
            if a[i + 1] < half <= a[i]:
                frac = (a[i] - half) / (a[i] - a[i + 1])
                right = self.freqs[i] + frac * (self.freqs[i + 1] - self.freqs[i])
                break
        if left is None or right is None:
            raise ValueError("half-maximum crossings not bracketed by the frequency grid")
        return float(right - left)

    def to_csv(self) -> str:
        lines = ["# spinwire spectrum", _meta_comment(self.meta), "freq_hz,value"]
        for f, a in zip(self.freqs, self.amps):
            lines.append(f"{_fmt(f)},{_fmt(a)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "spectrum",
            "meta": self.meta,
            "freqs_hz": [_round_trip_float(f) for f in self.freqs],
            "values": [_round_trip_float(a) for a in self.amps],
        }
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def spectrum_from_csv(text: str) -> Spectrum:
    comments, rows, header = [], [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            if header != ["freq_hz", "value"]:
                raise TraceFormatError(f"line {lineno}: expected 'freq_hz,value' header")
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise TraceFormatError(f"line {lineno}: expected 2 fields, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-numeric field in {line!r}") from None
    if header is None:
        raise TraceFormatError("line 1: empty spectrum file")
    data = np.asarray(rows)
    return Spectrum(data[:, 0], data[:, 1], meta=_parse_comments(comments))
