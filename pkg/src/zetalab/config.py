"""Cache directory resolution and tool metadata."""

import os
from pathlib import Path

TOOL_VERSION = "0.1.0"
CACHE_ENV_VAR = "ZETALAB_CACHE_DIR"


def cache_dir(create: bool = True) -> Path:
    """Directory for sieve/coefficient caches, from ZETALAB_CACHE_DIR.

    Falls back to ~/.cache/zetalab.  Expensive tables are dumped here so
    repeated CLI runs do not re-sieve.
    """
    root = os.environ.get(CACHE_ENV_VAR)
    path = Path(root) if root else Path.home() / ".cache" / "zetalab"
    if create:
        path.mkdir(parents=True, exist_ok=True)
    return path
