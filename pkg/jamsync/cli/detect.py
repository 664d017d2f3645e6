from typing import Optional

import click

from ..airlink.iq import read_iq
from ..detector.jass import Detector
from ..detector.structs import BACKENDS, DetectorConfig
from ..detector.trace import write_trace_csv
from .common import configure_logging, domain_errors, load_sequence


@click.command()
@click.option("-i", "--iq", "iq_path", type=click.Path(dir_okay=False, exists=True), required=True, help="IQ file")
@click.option("-s", "--seq", default=None, help="+-1 list or file, default: built-in sequence")
@click.option("-t", "--tau", type=click.FloatRange(min=0), default=8.0, show_default=True, help="Threshold")
@click.option("-b", "--backend", type=click.Choice(BACKENDS), default="float", show_default=True)
@click.option("--ell-max", type=click.IntRange(min=0), default=None, help="Last delay index, default: stream end")
@click.option("--unmitigated", is_flag=True, help="Plain correlation, no jammer mitigation")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), default=None, help="Per-index trace CSV")
@click.option("-v", "--verbose", is_flag=True, help="Display debug info")
def cli(
    iq_path: str,
    seq: Optional[str],
    tau: float,
    backend: str,
    ell_max: Optional[int],
    unmitigated: bool,
    trace_path: Optional[str],
    verbose: bool,
):
    """Run the detector on an IQ file and print the declared index."""
    configure_logging(verbose)
    sequence = load_sequence(seq)
    with domain_errors():
        stream = read_iq(iq_path)
        config = DetectorConfig(B=stream.shape[1], K=len(sequence), tau=tau, ell_max=ell_max, backend=backend)
        detector = Detector(config, sequence, mitigate=not unmitigated)
        if trace_path is None:
            decision = detector.run(stream)
            declared = decision.declared
        else:
            scores = detector.trace(stream)
            declared = detector.first_acceptance(scores, tau)
            write_trace_csv(scores, trace_path, declared)
    print("MISS" if declared is None else declared)
