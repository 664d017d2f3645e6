"""Per-delay-index cycle bookkeeping for the accelerator schedule."""
from typing import Dict, Iterable, NamedTuple, Tuple

import attr

from ..fxp import ConfigurationError


MATVEC_CYCLES = 19
RANK_ONE_CYCLES = 19
INNER_PRODUCT_CYCLES = 5


class ScheduleEntry(NamedTuple):
    name: str
    kind: str
    cycles: int
    count: int = 1

    @property
    def total(self) -> int:
        return self.cycles * self.count


DEFAULT_SCHEDULE: Tuple[ScheduleEntry, ...] = (
    ScheduleEntry("correlate", "matvec", MATVEC_CYCLES),
    ScheduleEntry("lambda_build", "rank_one", RANK_ONE_CYCLES),
    ScheduleEntry("power_matvec", "matvec", MATVEC_CYCLES, 4),
    ScheduleEntry("pseudonorm", "pseudonorm", 1, 4),
    ScheduleEntry("norm_square", "inner", INNER_PRODUCT_CYCLES, 4),
    ScheduleEntry("inv_sqrt", "inv_sqrt", 2, 4),
    ScheduleEntry("normalize_scale", "scale", 1, 4),
    ScheduleEntry("deflate", "rank_one", RANK_ONE_CYCLES, 2),
    ScheduleEntry("b_tilde", "inner", INNER_PRODUCT_CYCLES),
    ScheduleEntry("project_c", "inner", INNER_PRODUCT_CYCLES, 2),
    ScheduleEntry("project_phi", "tree_stream", 36),
    ScheduleEntry("gram_2x2", "tree_stream", 7),
    ScheduleEntry("score", "score", 3),
    ScheduleEntry("phi_slide", "rank_one", RANK_ONE_CYCLES),
)
DEFAULT_CYCLES_PER_INDEX = 268


def _check_entries(instance, attribute, value: Tuple[ScheduleEntry, ...]) -> None:
    for entry in value:
        if entry.cycles < 0 or entry.count < 0:
            raise ConfigurationError(f"schedule entry {entry.name} has a negative cycle count")


@attr.s(frozen=True, slots=True)
class CycleModel:
    schedule: Tuple[ScheduleEntry, ...] = attr.ib(
        default=DEFAULT_SCHEDULE,
        converter=lambda entries: tuple(ScheduleEntry(*e) for e in entries),
        validator=_check_entries,
    )

    @classmethod
    def only(cls, names: Iterable[str]) -> "CycleModel":
        wanted = set(names)
        return cls(e for e in DEFAULT_SCHEDULE if e.name in wanted)

    def by_kind(self) -> Dict[str, int]:
        totals: Dict[str, int] = {}
        for entry in self.schedule:
            totals[entry.kind] = totals.get(entry.kind, 0) + entry.total
        return totals

    def table(self) -> str:
        lines = [f"{'operation':<16} {'kind':<12} {'cycles':>6} {'count':>5} {'total':>6}"]
        for e in self.schedule:
            lines.append(f"{e.name:<16} {e.kind:<12} {e.cycles:>6} {e.count:>5} {e.total:>6}")
        lines.append(f"{'per index':<16} {'':<12} {'':>6} {'':>5} {cycles_per_index(self):>6}")
        return "\n".join(lines)


def cycles_per_index(model: CycleModel) -> int:
    return sum(entry.total for entry in model.schedule)


def throughput(model: CycleModel, clock_hz: float, instances: int = 1) -> float:
    cycles = cycles_per_index(model)
    if cycles == 0:
        raise ConfigurationError("empty schedule has no throughput")
    return instances * clock_hz / cycles
