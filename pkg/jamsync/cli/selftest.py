import sys
from typing import List

import click

from ..harness.selftest import CheckResult, run_selftest
from .common import configure_logging


@click.command()
@click.option(
    "--scale",
    type=click.FloatRange(min=0, min_open=True),
    default=1.0,
    show_default=True,
    help="Fraction of the full repetition counts",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-v", "--verbose", is_flag=True, help="Display debug info")
def cli(scale: float, seed: int, verbose: bool):
    """Oracle-equivalence and invariant suites."""
    configure_logging(verbose)
    results: List[CheckResult] = []
    try:
        results = run_selftest(scale, seed)
    finally:
        print("=" * 10, "Summary", "=" * 10)
        for result in results:
            print(f"- {result}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"Failed: {', '.join(failed)}")
        sys.exit(1)
    print("Done.")
