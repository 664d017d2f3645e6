import csv
import math
from os import PathLike
from typing import List, Optional, Sequence, Union

import attr

from .config import ExperimentConfig, ExperimentIOError
from .trials import FALSE_ALARM, MISS, TrialOutcome, sweep_outcomes


CSV_HEADER = ["tau", "ser", "fa_rate", "miss_rate", "ci95"]


def wilson_half_width(p: float, n: int, z: float = 1.96) -> float:
    return z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)


@attr.s(frozen=True, slots=True)
class SerPoint:
    tau: float = attr.ib()
    ser: float = attr.ib()
    fa_rate: float = attr.ib()
    miss_rate: float = attr.ib()
    ci95: float = attr.ib()

    @classmethod
    def aggregate(cls, tau: float, outcomes: Sequence[TrialOutcome]) -> "SerPoint":
        n = len(outcomes)
        fa = sum(o.classification == FALSE_ALARM for o in outcomes) / n
        miss = sum(o.classification == MISS for o in outcomes) / n
        ser = fa + miss
        return cls(tau, ser, fa, miss, wilson_half_width(ser, n))

    def row(self) -> List[str]:
        return [f"{v:.6f}" for v in (self.tau, self.ser, self.fa_rate, self.miss_rate, self.ci95)]


def run_sweep(config: ExperimentConfig, workers: Optional[int] = None) -> List[SerPoint]:
    grid = sweep_outcomes(config, workers)
    return [SerPoint.aggregate(tau, outcomes) for tau, outcomes in zip(config.tau_grid, grid)]


def emit_csv(points: Sequence[SerPoint], path: Union[str, "PathLike[str]"]) -> None:
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_HEADER)
            for point in points:
                writer.writerow(point.row())
    except OSError as e:
        raise ExperimentIOError(f"cannot write {path}: {e}")


def read_csv(path: Union[str, "PathLike[str]"]) -> List[SerPoint]:
    try:
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise ExperimentIOError(f"cannot read {path}: {e}")
    if not rows or rows[0] != CSV_HEADER:
        raise ExperimentIOError(f"{path}: not a sweep CSV")
    try:
        return [SerPoint(*(float(v) for v in row)) for row in rows[1:]]
    except (TypeError, ValueError) as e:
        raise ExperimentIOError(f"{path}: malformed row ({e})")
