from typing import Optional

import click
import numpy as np

from .. import settings
from ..airlink.iq import write_iq
from ..airlink.structs import JAMMER_KINDS, JammerSpec, TrialScenario
from ..airlink.synth import draw_channel, synth_receive
from ..detector.structs import SUPPORTED_DIM
from .common import configure_logging, domain_errors, load_sequence


@click.command()
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True, help="Output IQ file")
@click.option("-k", "--kind", type=click.Choice(JAMMER_KINDS), default="barrage", show_default=True)
@click.option("--rho-db", type=float, default=30.0, show_default=True, help="Jammer-to-signal ratio")
@click.option("--snr-db", type=float, default=5.0, show_default=True)
@click.option("--antennas", type=click.IntRange(0, 2), default=2, show_default=True, help="Jammer antennas")
@click.option("--length", type=click.IntRange(min=18), default=64, show_default=True, help="Samples")
@click.option("-L", "--delay", type=click.IntRange(min=0), default=None, help="True start index, default: random")
@click.option("-s", "--seq", default=None, help="+-1 list or file, default: built-in sequence")
@click.option("--seed", type=int, default=None, help="Scenario seed, default: JAMSYNC_MASTER_SEED")
@click.option("-v", "--verbose", is_flag=True, help="Display debug info")
def cli(
    out: str,
    kind: str,
    rho_db: float,
    snr_db: float,
    antennas: int,
    length: int,
    delay: Optional[int],
    seq: Optional[str],
    seed: Optional[int],
    verbose: bool,
):
    """Synthesize a jammed receive stream and write it as an IQ file."""
    configure_logging(verbose)
    sequence = load_sequence(seq)
    seed = settings.MASTER_SEED if seed is None else seed
    channel_seq, stream_seq, delay_seq = np.random.SeedSequence(seed).spawn(3)
    with domain_errors():
        if delay is None:
            delay = int(np.random.default_rng(delay_seq).integers(0, length - len(sequence)))
        scenario = TrialScenario(
            L=delay, snr_db=snr_db, seed=int(stream_seq.generate_state(1)[0]), length=length, K=len(sequence)
        )
        spec = JammerSpec(kind=kind, I=antennas, rho_db=rho_db)
        channel = draw_channel(channel_seq, SUPPORTED_DIM, antennas)
        write_iq(out, synth_receive(scenario, channel, spec, sequence))
    print(f"Wrote {length} samples to {out} (L={delay}, {kind} jammer at rho={rho_db:g} dB, SNR={snr_db:g} dB)")
