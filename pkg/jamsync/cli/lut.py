import click

from ..fxp import DEFAULT_LEDGER
from ..kernels.inv_sqrt import build_lut, export_lut_csv


@click.command()
@click.option("-o", "--out", type=click.Path(dir_okay=False), required=True, help="Output CSV path")
@click.option("--addr-bits", type=click.IntRange(2, 12), default=6, show_default=True)
def cli(out: str, addr_bits: int):
    """Export the inverse square root seed table."""
    lut = build_lut(addr_bits, DEFAULT_LEDGER.lut)
    export_lut_csv(lut, out)
    print(f"Wrote {len(lut)} entries ({lut.entry_fmt}) to {out}")
