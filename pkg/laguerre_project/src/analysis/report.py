"""Sweep reports and their consolidation into one criterion table."""
import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

LIMITATION = (
    "weak-type (1,1) hypothesis not exercised; only the atom bound is checked"
)
LOWER_BOUND_NOTE = (
    "sweep values are lower bounds of the supremum over the admissible "
    "class; time norms are sampled on a finite grid"
)
REPORT_COLUMNS = ("operator", "condition", "max", "delta", "passed", "config_hash")


@dataclass
class SweepReport:
    """Per-interval values of one sweep with its refinement verdict.

    ``rows`` has one row per interval with columns center, radius, value and
    argmax (the sub-grid point attaining the interval maximum).
    """

    name: str
    condition: str
    rows: pd.DataFrame
    provenance: dict = field(default_factory=dict)
    refined_max: Optional[float] = None
    delta: Optional[float] = None
    passed: Optional[bool] = None
    notes: List[str] = field(default_factory=lambda: [LOWER_BOUND_NOTE])

    @property
    def running_max(self) -> float:
        if self.rows.empty:
            return 0.0
        return float(self.rows["value"].max())

    def summary(self) -> dict:
        """Return the JSON-ready summary of the report."""
        return {
            "name": self.name,
            "condition": self.condition,
            "max": self.running_max,
            "refined_max": self.refined_max,
            "delta": self.delta,
            "passed": self.passed,
            "intervals": int(len(self.rows)),
            "notes": list(self.notes),
            **self.provenance,
        }

    def to_csv(self, path: str, comments: Optional[List[str]] = None):
        """Write the per-interval table with '#'-prefixed comment lines."""
        with open(path, "w", newline="") as handle:
            for line in comments or []:
                handle.write(f"# {line}\n")
            self.rows.to_csv(handle, index=False, float_format="%.12g")


def criterion_report(reports: List[SweepReport]) -> pd.DataFrame:
    """Merge sweep reports into one row per (operator, condition).

    Examples
    --------
    >>> criterion_report([]).empty
    True
    """
    rows = [
        {
            "operator": report.name,
            "condition": report.condition,
            "max": report.running_max,
            "delta": report.delta,
            "passed": report.passed,
            "config_hash": report.provenance.get("config_hash", ""),
        }
        for report in reports
    ]
    return pd.DataFrame(rows, columns=list(REPORT_COLUMNS))


def supported_hypotheses(table: pd.DataFrame) -> dict:
    """Return, per operator, the conditions whose gate passed."""
    supported = {}
    for operator, group in table.groupby("operator", sort=True):
        supported[operator] = sorted(
            group.loc[group["passed"].fillna(False).astype(bool), "condition"]
        )
    return supported


def summary_json(table: pd.DataFrame, provenance: dict) -> str:
    """Return the JSON summary with stable key order."""
    payload = {
        "rows": json.loads(table.to_json(orient="records")),
        "supported": supported_hypotheses(table) if not table.empty else {},
        "all_passed": bool(table["passed"].fillna(False).astype(bool).all())
        if not table.empty
        else True,
        "limitation": LIMITATION,
        **provenance,
    }
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable)


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")
