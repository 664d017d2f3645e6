from typing import Dict, Optional

import attr
import click

from ..harness.config import METHODS, ExperimentConfig, load_config
from ..harness.report import SerPoint, emit_csv, run_sweep
from .common import configure_logging, domain_errors


@click.command()
@click.option(
    "-c", "--config", "config_path", type=click.Path(dir_okay=False, exists=True), default=None, help="JSON config"
)
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True, help="Output CSV path")
@click.option("--seed", type=int, default=None, help="Master seed, default: config or JAMSYNC_MASTER_SEED")
@click.option("-m", "--method", type=click.Choice(METHODS), default=None, help="Detector, default: config (jass)")
@click.option("-t", "--trials", type=click.IntRange(min=1), default=None, help="Trial count, default: config (2000)")
@click.option("-w", "--workers", type=click.IntRange(min=1), default=None, help="Processes, default: JAMSYNC_WORKERS")
@click.option("-v", "--verbose", is_flag=True, help="Display debug info")
def cli(
    config_path: Optional[str],
    out: str,
    seed: Optional[int],
    method: Optional[str],
    trials: Optional[int],
    workers: Optional[int],
    verbose: bool,
):
    """Threshold sweep: synchronization error rate per tau."""
    configure_logging(verbose)
    with domain_errors():
        config = load_config(config_path) if config_path is not None else ExperimentConfig()
        overrides: Dict[str, object] = {"master_seed": seed, "method": method, "trials": trials}
        config = attr.evolve(config, **{k: v for k, v in overrides.items() if v is not None})

        print(
            f"Sweeping {len(config.tau_grid)} thresholds over {config.trials} trials "
            f"({config.method}, {config.detector.backend} backend, {config.jammer.kind} jammer)"
        )
        points = []
        try:
            points = run_sweep(config, workers)
            emit_csv(points, out)
        finally:
            print("=" * 10, "Summary", "=" * 10)
            for point in points:
                print(_format(point))
            if points:
                best = min(points, key=lambda p: p.ser)
                print(f"Best: tau={best.tau:g} SER={best.ser:.4f}")
    print(f"Wrote {out}")


def _format(point: SerPoint) -> str:
    return (
        f"- tau={point.tau:g}: SER={point.ser:.4f} (FA {point.fa_rate:.4f}, miss {point.miss_rate:.4f}) "
        f"+/- {point.ci95:.4f}"
    )
