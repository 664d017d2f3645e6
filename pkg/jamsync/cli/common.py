import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import click

from .. import settings
from ..airlink.iq import IQFormatError
from ..detector.structs import SyncSequence
from ..fxp import ConfigurationError
from ..harness.config import ExperimentIOError


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@contextmanager
def domain_errors() -> Iterator[None]:
    try:
        yield
    except (ConfigurationError, IQFormatError, ExperimentIOError) as e:
        raise click.ClickException(str(e))


def load_sequence(value: Optional[str]) -> SyncSequence:
    """A comma/space separated +-1 list, or a file holding one; the built-in sequence when omitted."""
    if value is None:
        return SyncSequence.from_seed()
    path = Path(value)
    text = path.read_text() if path.is_file() else value
    try:
        return SyncSequence.parse(text)
    except ConfigurationError as e:
        raise click.BadParameter(str(e), param_hint="--seq")
