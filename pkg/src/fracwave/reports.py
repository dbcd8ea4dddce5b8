"""Report records, refinement-trend classification, and serialization.

JSON and CSV emission is fully deterministic: fixed field order, floats
rendered with 17 significant digits, no timestamps.  Reports therefore
byte-compare equal across runs of the same configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInputError

TREND_DIVERGING = "diverging"
TREND_BOUNDED = "bounded"
TREND_INDETERMINATE = "indeterminate"

# A singular term t^mu makes the discrete H^s norm grow per N-doubling at
# the exact rate 2^(s - mu - 1/2) once s exceeds mu + 1/2.
def singular_growth_rate(norm_order: float, singular_exponent: float) -> float:
    return 2.0 ** (norm_order - singular_exponent - 0.5)


def classify_trend(values, r_star: float = 1.8, bounded_limit: float = 1.25) -> str:
    """Label a refinement sequence as diverging / bounded / indeterminate.

    ``r_star`` is the expected per-doubling growth factor of the divergent
    alternative; divergence is declared when every observed ratio exceeds
    half the expected excess and the aggregate growth reaches r_star with
    one doubling of slack.  Needs at least 3 levels.
    """
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise InvalidInputError("classify_trend: need >= 3 refinement levels")
    if any(v <= 0.0 or not math.isfinite(v) for v in vals):
        return TREND_INDETERMINATE
    ratios = [vals[i + 1] / vals[i] for i in range(len(vals) - 1)]
    aggregate = vals[-1] / vals[0]
    div_ratio_floor = 1.0 + 0.5 * (r_star - 1.0)
    if min(ratios) >= div_ratio_floor and aggregate >= r_star ** (len(vals) - 2):
        return TREND_DIVERGING
    if max(ratios) <= bounded_limit:
        return TREND_BOUNDED
    return TREND_INDETERMINATE


@dataclass
class LevelRecord:
    """One refinement level of one inequality."""

    N: int
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs != 0.0 else (0.0 if self.lhs == 0.0 else math.inf)


@dataclass
class RegularityReport:
    """Computed sides of one inequality across a refinement ladder."""

    check_id: str
    anchor: str
    case: str
    levels: list = field(default_factory=list)
    trend: str | None = None
    r_star: float | None = None
    passed: bool | None = None
    note: str = ""

    def add_level(self, N: int, lhs: float, rhs: float) -> None:
        self.levels.append(LevelRecord(N, lhs, rhs))

    def ratios(self) -> list:
        return [lv.ratio for lv in self.levels]

    def to_row_dicts(self) -> list:
        rows = []
        for i, lv in enumerate(self.levels):
            rows.append({
                "check": self.check_id,
                "anchor": self.anchor,
                "case": self.case,
                "level": i,
                "N": lv.N,
                "lhs": lv.lhs,
                "rhs": lv.rhs,
                "ratio": lv.ratio,
                "trend": self.trend if self.trend is not None else "",
                "passed": self.passed if self.passed is not None else "",
                "note": self.note,
            })
        return rows


# -- deterministic serialization ---------------------------------------------

def format_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    if isinstance(obj, bool):  # pragma: no cover - handled above
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        inner = ",".join(f"{_json_value(str(k))}:{_json_value(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_value(v) for v in obj) + "]"
    raise InvalidInputError(f"cannot serialize {type(obj)!r}")


def dumps_json(obj) -> str:
    return _json_value(obj) + "\n"


def dumps_csv(rows) -> str:
    """One CSV row per (check, refinement level); header always present."""
    cols = ["check", "anchor", "case", "level", "N", "lhs", "rhs", "ratio",
            "discrepancy", "tolerance", "trend", "passed", "note"]
    lines = [",".join(cols)]
    for row in rows:
        cells = []
        for c in cols:
            val = row.get(c, "")
            if isinstance(val, bool):
                cells.append("true" if val else "false")
            elif isinstance(val, float):
                cells.append(format_float(val))
            elif val is None:
                cells.append("")
            else:
                text = str(val)
                if "," in text or '"' in text:
                    text = '"' + text.replace('"', '""') + '"'
                cells.append(text)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
