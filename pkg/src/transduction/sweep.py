"""Declarative parameter sweeps producing the figure tables.

A sweep fixes the device and state parameters, scans one axis (a curve) or
two axes (a contour) of {C, zeta_o, zeta_m}, and evaluates one or more
quantities for the direct-conversion scheme, the teleportation scheme or both.
Contours are written in long format, one row per grid point, with the first
axis varying slowest.

Values that are not finite (for example an infinite capacity at unit
efficiency) or undefined (additive-noise variance of direct conversion at
C = 0) are written as ``SENTINEL`` and named in the ``flags`` column.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .capacity import dc_bounds, tp_bounds
from .device import DeviceParams, entanglement_cm
from .errors import ConsistencyError, DomainError
from .transfer import (GkpSpec, SchemeNoiseParams, additive_sigma_dc, additive_sigma_tp_device,
                       fidelity_cat, fidelity_coherent, gkp_success, tp_fidelity_cat,
                       tp_fidelity_coherent)

SENTINEL = -1.0

AXES = ("C", "zeta_o", "zeta_m")
SCHEMES = ("dc", "tp", "both")
UNITS = {
    "capacity_lb": "qubits/use",
    "capacity_ub": "qubits/use",
    "bound_gap": "qubits/use",
    "kappa_star": "1",
    "fidelity_coherent": "1",
    "fidelity_cat": "1",
    "gkp_success": "1",
    "additive_sigma": "vacuum variance = 1/2",
}
TP_ONLY = ("kappa_star",)


class SpecError(ValueError):
    """Invalid sweep specification; the message names the offending field."""


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int

    def values(self):
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    quantities: Tuple[str, ...]
    axes: Tuple[Axis, ...]
    scheme: str = "both"
    C: float = 0.1
    zeta_o: float = 1.0
    zeta_m: float = 1.0
    n_in: float = 0.0
    alpha: float = 2.0
    parity: int = 1
    sigma_gkp: float = 0.22
    name: str = ""

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise SpecError(f"unknown field(s): {', '.join(unknown)}")
        for key in ("quantities", "axes"):
            if key not in d:
                raise SpecError(f"{key}: missing")
        q = d["quantities"]
        d["quantities"] = (q,) if isinstance(q, str) else tuple(q)
        try:
            d["axes"] = tuple(a if isinstance(a, Axis) else Axis(**a) for a in d["axes"])
        except TypeError as exc:
            raise SpecError(f"axes: each axis needs name, min, max, count ({exc})") from None
        spec = cls(**d)
        spec.validate()
        return spec

    def to_dict(self):
        d = asdict(self)
        d["quantities"] = list(self.quantities)
        d["axes"] = [asdict(a) for a in self.axes]
        return d

    def validate(self):
        if self.scheme not in SCHEMES:
            raise SpecError(f"scheme: expected one of {SCHEMES}, got {self.scheme!r}")
        if not self.quantities:
            raise SpecError("quantities: at least one quantity is required")
        for q in self.quantities:
            if q not in UNITS:
                raise SpecError(f"quantities: unknown quantity {q!r}; choose from {sorted(UNITS)}")
            if q in TP_ONLY and self.scheme == "dc":
                raise SpecError(f"quantities: {q} is only defined for the tp scheme")
        if not 1 <= len(self.axes) <= 2:
            raise SpecError(f"axes: need one (curve) or two (contour) axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise SpecError(f"axes: repeated axis {names}")
        for i, a in enumerate(self.axes):
            where = f"axes[{i}]"
            if a.name not in AXES:
                raise SpecError(f"{where}.name: expected one of {AXES}, got {a.name!r}")
            if not isinstance(a.count, int) or isinstance(a.count, bool) or a.count < 2:
                raise SpecError(f"{where}.count: need an integer >= 2, got {a.count!r}")
            if not (math.isfinite(a.min) and math.isfinite(a.max)) or a.min > a.max:
                raise SpecError(f"{where}: need finite min <= max, got [{a.min}, {a.max}]")
            if a.name == "C":
                if a.min < 0:
                    raise SpecError(f"{where}.min: cooperativity must be >= 0")
                if self.scheme != "dc" and a.max >= 1:
                    raise SpecError(f"{where}.max: the tp scheme needs C < 1, got {a.max}")
            elif not (0 <= a.min and a.max <= 1):
                raise SpecError(f"{where}: {a.name} must lie in [0, 1]")
        for name in AXES:
            if name in names:
                continue
            v = getattr(self, name)
            if name == "C":
                if not v >= 0:
                    raise SpecError("C: cooperativity must be >= 0")
                if self.scheme != "dc" and v >= 1:
                    raise SpecError(f"C: the tp scheme needs C < 1, got {v}")
            elif not 0 <= v <= 1:
                raise SpecError(f"{name}: must lie in [0, 1], got {v}")
        if not self.n_in >= 0:
            raise SpecError(f"n_in: must be >= 0, got {self.n_in}")
        if not self.alpha >= 0:
            raise SpecError(f"alpha: must be >= 0, got {self.alpha}")
        if self.parity not in (1, -1):
            raise SpecError(f"parity: must be +1 or -1, got {self.parity}")
        if self.parity == -1 and self.alpha == 0 and "fidelity_cat" in self.quantities:
            raise SpecError("alpha: the odd cat state needs alpha != 0")
        if not self.sigma_gkp >= 0:
            raise SpecError(f"sigma_gkp: must be >= 0, got {self.sigma_gkp}")

    @property
    def schemes(self):
        return ("dc", "tp") if self.scheme == "both" else (self.scheme,)

    def columns(self):
        """(key, header) pairs of the value columns, in output order."""
        cols = [(a.name, f"{a.name} [1]") for a in self.axes]
        for q in self.quantities:
            for s in self.schemes:
                if q in TP_ONLY and s != "tp":
                    continue
                key = f"{s}_{q}"
                cols.append((key, f"{key} [{UNITS[q]}]"))
        return cols

    def grid(self):
        """Axis values of every point, row-major over the axes."""
        return list(itertools.product(*[a.values().tolist() for a in self.axes]))


def apply_overrides(d, overrides):
    """Apply ``key=value`` strings to a raw spec dict.

    ``key`` is a top-level field or ``axes.<name>.<min|max|count>``; the value
    is parsed as JSON when possible and kept as a string otherwise.
    """
    d = json.loads(json.dumps(d))
    for item in overrides:
        if "=" not in item:
            raise SpecError(f"override {item!r}: expected key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        parts = key.strip().split(".")
        if parts[0] == "axes" and len(parts) == 3:
            for a in d.get("axes", []):
                if a.get("name") == parts[1]:
                    a[parts[2]] = value
                    break
            else:
                raise SpecError(f"override {key}: no axis named {parts[1]!r}")
        elif len(parts) == 1:
            if parts[0] == "quantities" and isinstance(value, str):
                value = [q for q in value.split(",") if q]
            d[parts[0]] = value
        else:
            raise SpecError(f"override {key}: unsupported key")
    return d


# ---------------------------------------------------------------------------
# Point evaluation


def _point_params(spec, point):
    values = {name: getattr(spec, name) for name in AXES}
    values.update(zip((a.name for a in spec.axes), point))
    return DeviceParams(values["C"], values["zeta_o"], values["zeta_m"], spec.n_in)


class _Point:
    """Lazily computed per-point intermediates, shared between quantities."""

    def __init__(self, spec, p):
        self.spec, self.p = spec, p
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def cm(self):
        return self.get("cm", lambda: entanglement_cm(self.p))

    def bounds(self, scheme):
        if scheme == "dc":
            return self.get("dc_bounds", lambda: dc_bounds(self.p))
        return self.get("tp_bounds", lambda: tp_bounds(self.p))

    def sigma2(self, scheme):
        if scheme == "dc":
            return self.get("dc_sigma", lambda: additive_sigma_dc(self.p))
        return self.get("tp_sigma", lambda: additive_sigma_tp_device(self.p)[0])

    def value(self, scheme, quantity):
        spec = self.spec
        if quantity == "capacity_lb":
            return self.bounds(scheme).q_lower
        if quantity == "capacity_ub":
            return self.bounds(scheme).q_upper
        if quantity == "bound_gap":
            return self.bounds(scheme).gap
        if quantity == "kappa_star":
            return self.bounds(scheme).kappa_star
        if quantity == "fidelity_coherent":
            if scheme == "dc":
                return fidelity_coherent(SchemeNoiseParams.dc(self.p), spec.alpha)
            return tp_fidelity_coherent(self.cm(), spec.alpha)[1]
        if quantity == "fidelity_cat":
            if scheme == "dc":
                return fidelity_cat(SchemeNoiseParams.dc(self.p), spec.alpha, spec.parity)
            return tp_fidelity_cat(self.cm(), spec.alpha, spec.parity)[1]
        if quantity == "gkp_success":
            return gkp_success(self.sigma2(scheme), GkpSpec(spec.sigma_gkp))
        if quantity == "additive_sigma":
            return self.sigma2(scheme)
        raise SpecError(f"quantities: unknown quantity {quantity!r}")


def evaluate_point(spec, point):
    """Values (in column order, axes first) and flag string for one grid point."""
    pt = _Point(spec, _point_params(spec, point))
    row = [float(x) for x in point]
    flags = []
    for key, _ in spec.columns()[len(spec.axes):]:
        scheme, quantity = key.split("_", 1)
        try:
            v = float(pt.value(scheme, quantity))
        except (DomainError, ConsistencyError):
            flags.append(f"{key}:undefined")
            row.append(SENTINEL)
            continue
        if math.isfinite(v):
            row.append(v)
        else:
            flags.append(f"{key}:{'inf' if v > 0 else '-inf' if v < 0 else 'nan'}")
            row.append(SENTINEL)
    return row, ";".join(flags)


def _evaluate_chunk(args):
    spec, points = args
    return [evaluate_point(spec, pt) for pt in points]


@dataclass
class SweepTable:
    spec: SweepSpec
    headers: List[str]
    rows: List[List[float]]
    flags: List[str]

    def column(self, key):
        keys = [k for k, _ in self.spec.columns()]
        i = keys.index(key)
        return np.array([r[i] for r in self.rows])

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.headers + ["flags"])
        for row, flag in zip(self.rows, self.flags):
            writer.writerow(["%.12g" % v for v in row] + [flag])
        return buf.getvalue()

    def to_json(self):
        keys = [k for k, _ in self.spec.columns()]
        records = []
        for row, flag in zip(self.rows, self.flags):
            rec = {k: float("%.12g" % v) for k, v in zip(keys, row)}
            rec["flags"] = flag
            records.append(rec)
        doc = {"spec": self.spec.to_dict(),
               "units": dict(zip(keys, self.headers)),
               "records": records}
        return json.dumps(doc, indent=1) + "\n"


def run_sweep(spec, workers=1, chunk=64):
    """Evaluate every grid point of ``spec``; rows come back in row-major order.

    With ``workers > 1`` the points are split into contiguous chunks and
    evaluated in a process pool; results are concatenated in submission
    order, so the table does not depend on the worker count.
    """
    spec.validate()
    points = spec.grid()
    chunks = [points[i:i + chunk] for i in range(0, len(points), chunk)]
    if workers is None or workers <= 1 or len(chunks) == 1:
        results = [_evaluate_chunk((spec, c)) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_chunk, [(spec, c) for c in chunks]))
    rows, flags = [], []
    for part in results:
        for row, flag in part:
            rows.append(row)
            flags.append(flag)
    return SweepTable(spec, [h for _, h in spec.columns()], rows, flags)


def load_spec(path, overrides=()):
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: not valid JSON ({exc})") from None
    return SweepSpec.from_dict(apply_overrides(raw, overrides))
