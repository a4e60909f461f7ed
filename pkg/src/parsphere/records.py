"""Per-angle correlation rows shared by the simulators and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

CSV_FIELDS = ("theta_deg", "estimate", "reference", "stderr", "n", "c_pp", "c_pm", "c_mp", "c_mm", "estimator")

STANDARD_SCORE = "standard-score"
COINCIDENCE = "coincidence"
ESTIMATORS = (STANDARD_SCORE, COINCIDENCE)


@dataclass(frozen=True)
class CorrelationRecord:
    theta_deg: float
    estimate: float
    reference: float
    stderr: float
    n: int
    c_pp: int
    c_pm: int
    c_mp: int
    c_mm: int
    estimator: str

    def as_row(self) -> dict:
        return asdict(self)

    @property
    def coincidence_ratio(self) -> float:
        total = self.c_pp + self.c_pm + self.c_mp + self.c_mm
        return (self.c_pp + self.c_mm - self.c_pm - self.c_mp) / total
