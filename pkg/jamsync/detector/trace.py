import csv
from os import PathLike
from typing import Optional, Sequence, Union

from .structs import IndexScore


TRACE_HEADER = ["ell", "N", "D", "score", "declared"]


def write_trace_csv(
    scores: Sequence[IndexScore], path: Union[str, "PathLike[str]"], declared: Optional[int] = None
) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(TRACE_HEADER)
        for s in scores:
            writer.writerow(
                [
                    s.ell,
                    f"{float(s.numerator):.6f}",
                    f"{float(s.denominator):.6f}",
                    f"{s.score:.6f}",
                    int(s.ell == declared),
                ]
            )
