import click

from . import cycles, detect, lut, selftest, sweep, synth


@click.group()
def cli():
    """Jammer-resilient frame synchronization: simulation, detection and hardware models."""


cli.add_command(sweep.cli, "sweep")
cli.add_command(detect.cli, "detect")
cli.add_command(selftest.cli, "selftest")
cli.add_command(cycles.cli, "cycles")
cli.add_command(synth.cli, "synth")
cli.add_command(lut.cli, "lut")
