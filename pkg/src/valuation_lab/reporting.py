"""Verification reports: pass/fail records with full numeric evidence.

The JSON schema is versioned ("verify-report/v1") and round-trip
stable.  A report passes iff every component satisfies

    |lhs - rhs| <= max(3 * std_error, tolerance_used * scale + 1e-9)

with scale the max-abs RHS component, so `tolerance_used` is a relative
tolerance and the 1e-9 floor guards identically-zero components.  Grid
estimates carry zero standard error, so they are judged on the
tolerance alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

SCHEMA = "verify-report/v1"
ABS_FLOOR = 1e-9


@dataclass(frozen=True)
class VerifyReport:
    identity: str
    body_spec: str
    dim: int
    method: str
    samples: int
    seed: int
    lhs: np.ndarray
    lhs_std_error: np.ndarray
    rhs: np.ndarray
    abs_diff: np.ndarray
    rel_diff: np.ndarray
    passed: bool
    tolerance_used: float
    runtime_ms: int
    detail: str = ""

    def __str__(self):
        mark = "PASS" if self.passed else "FAIL"
        extra = f" [{self.detail}]" if self.detail else ""
        return (f"{mark} {self.identity:<12} dim={self.dim} "
                f"{self.body_spec}{extra} max|diff|={self.abs_diff.max():.3g}")


def make_report(identity: str, body_spec: str, dim: int, method: str,
                samples: int, seed: int, lhs, rhs, std_error,
                tolerance: float, runtime_ms: float,
                detail: str = "") -> VerifyReport:
    """Assemble a report and apply the pass rule componentwise."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    std_error = np.broadcast_to(np.asarray(std_error, dtype=float),
                                lhs.shape).copy()
    if lhs.shape != rhs.shape:
        raise ValueError(f"lhs shape {lhs.shape} != rhs shape {rhs.shape}")
    abs_diff = np.abs(lhs - rhs)
    scale = float(np.abs(rhs).max()) if rhs.size else 0.0
    rel_diff = abs_diff / max(scale, 1e-300)
    allowed = np.maximum(3.0 * std_error, tolerance * scale + ABS_FLOOR)
    passed = bool(np.all(abs_diff <= allowed))
    return VerifyReport(
        identity=identity, body_spec=body_spec, dim=dim, method=method,
        samples=samples, seed=seed, lhs=lhs, lhs_std_error=std_error,
        rhs=rhs, abs_diff=abs_diff, rel_diff=rel_diff, passed=passed,
        tolerance_used=float(tolerance), runtime_ms=int(round(runtime_ms)),
        detail=detail)


def report_to_json_dict(report: VerifyReport) -> dict:
    return {
        "schema": SCHEMA,
        "identity": report.identity,
        "body_spec": report.body_spec,
        "dim": report.dim,
        "method": report.method,
        "samples": report.samples,
        "seed": report.seed,
        "lhs": {
            "value": report.lhs.tolist(),
            "std_error": report.lhs_std_error.tolist(),
        },
        "rhs": {"value": report.rhs.tolist()},
        "abs_diff": report.abs_diff.tolist(),
        "rel_diff": report.rel_diff.tolist(),
        "pass": report.passed,
        "tolerance_used": report.tolerance_used,
        "runtime_ms": report.runtime_ms,
        "detail": report.detail,
    }


def report_from_json_dict(data: dict) -> VerifyReport:
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    return VerifyReport(
        identity=data["identity"],
        body_spec=data["body_spec"],
        dim=int(data["dim"]),
        method=data["method"],
        samples=int(data["samples"]),
        seed=int(data["seed"]),
        lhs=np.asarray(data["lhs"]["value"], dtype=float),
        lhs_std_error=np.asarray(data["lhs"]["std_error"], dtype=float),
        rhs=np.asarray(data["rhs"]["value"], dtype=float),
        abs_diff=np.asarray(data["abs_diff"], dtype=float),
        rel_diff=np.asarray(data["rel_diff"], dtype=float),
        passed=bool(data["pass"]),
        tolerance_used=float(data["tolerance_used"]),
        runtime_ms=int(data["runtime_ms"]),
        detail=data.get("detail", ""),
    )


def reports_to_json(reports) -> str:
    return json.dumps([report_to_json_dict(r) for r in reports], indent=2)


def strip_runtime(report: VerifyReport) -> VerifyReport:
    """Runtime-free copy, for determinism comparisons."""
    return replace(report, runtime_ms=0)


def format_table(reports) -> str:
    """Fixed-width summary table, one line per report."""
    header = (f"{'status':<6} {'identity':<12} {'dim':>3} {'method':<22} "
              f"{'samples':>9} {'max|diff|':>12} {'tol':>9}  body")
    lines = [header, "-" * len(header)]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        body = r.body_spec + (f" [{r.detail}]" if r.detail else "")
        lines.append(
            f"{status:<6} {r.identity:<12} {r.dim:>3} {r.method:<22} "
            f"{r.samples:>9} {r.abs_diff.max():>12.4g} "
            f"{r.tolerance_used:>9.1g}  {body}")
    return "\n".join(lines)
