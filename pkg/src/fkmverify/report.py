"""Verification reports: checks, JSON serialization and matrix dumps."""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from . import __version__

SCHEMA_VERSION = 1
STATUSES = ("pass", "fail", "warn")


@dataclass
class Check:
    name: str
    anchor: str
    status: str
    residual: float = 0.0
    details: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict, repr=False)   # dumped on request, not in JSON

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self):
        return self.status != "fail"


def check(name, anchor, ok, residual=0.0, warn=False, **details):
    status = "pass" if ok else "fail"
    if ok and warn:
        status = "warn"
    return Check(name, anchor, status, float(residual), details)


@dataclass
class VerificationReport:
    command: str
    seed: int
    scalar: str
    tol: float
    side: str
    checks: list = field(default_factory=list)
    wall_time: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        checks = sorted(self.checks, key=lambda c: c.name)
        return {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "command": self.command,
            "seed": self.seed,
            "scalar": self.scalar,
            "tol": self.tol,
            "side": self.side,
            "params": self.params,
            "status": "pass" if self.passed else "fail",
            "checks": [{"name": c.name, "anchor": c.anchor, "status": c.status,
                        "residual": c.residual, "details": c.details} for c in checks],
            "wall_time": self.wall_time,
        }

    def to_json(self, pretty=False):
        return json.dumps(jsonable(self.to_dict()), sort_keys=True,
                          indent=2 if pretty else None,
                          separators=None if pretty else (",", ":"))

    def summary_lines(self):
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            lines.append(f"{c.status.upper():4s}  {c.name}  residual={c.residual:.3g}")
        n_fail = sum(not c.passed for c in self.checks)
        lines.append(f"{self.command}: {len(self.checks) - n_fail}/{len(self.checks)} checks pass "
                     f"(seed {self.seed}, {self.scalar}, side {self.side})")
        return lines


def _scalar(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return v
    if isinstance(v, complex):
        return [v.real, v.imag]
    if type(v).__name__ == "mpq":
        return str(v)
    return v


def jsonable(obj):
    """Recursively convert numpy and rational values; exact arrays become
    decimal strings, float arrays stay binary64 numbers."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return _scalar(obj)


def format_matrix(m):
    """Plain-text dump: header "rows cols mode", then one row per line."""
    a = np.atleast_2d(np.asarray(m))
    mode = "exact" if a.dtype == object else "float64"
    lines = [f"{a.shape[0]} {a.shape[1]} {mode}"]
    for row in a:
        lines.append(" ".join(str(v) if mode == "exact" else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    from gmpy2 import mpq
    lines = text.strip().splitlines()
    rows, cols, mode = lines[0].split()
    rows, cols = int(rows), int(cols)
    conv = mpq if mode == "exact" else float
    data = [[conv(tok) for tok in line.split()] for line in lines[1:1 + rows]]
    out = np.array(data, dtype=object if mode == "exact" else float).reshape(rows, cols)
    return out
