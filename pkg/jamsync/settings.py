import sys
from os import environ

from dotenv import load_dotenv


load_dotenv()


def _int_env(name: str, default: int) -> int:
    value = environ.get(name, str(default))
    try:
        return int(value, 0)
    except ValueError:
        print(f"Invalid integer value {value!r} for {name} in environment")
        sys.exit(1)


MASTER_SEED = _int_env("JAMSYNC_MASTER_SEED", 2024)
WORKERS = _int_env("JAMSYNC_WORKERS", 1)
LOG_LEVEL = environ.get("JAMSYNC_LOG_LEVEL", "WARNING").upper()
