from typing import Optional

import click

from ..detector.cycles import CycleModel, throughput


@click.command()
@click.option("--clock-hz", type=click.FloatRange(min=0, min_open=True), default=None, help="Report throughput")
@click.option("--instances", type=click.IntRange(min=1), default=1, show_default=True)
def cli(clock_hz: Optional[float], instances: int):
    """Print the per-delay-index cycle schedule."""
    model = CycleModel()
    print(model.table())
    if clock_hz is not None:
        rate = throughput(model, clock_hz, instances)
        print(f"{rate / 1e6:.3f} M delay indices/s at {clock_hz / 1e6:g} MHz x {instances}")
