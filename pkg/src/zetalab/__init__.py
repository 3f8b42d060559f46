"""zetalab: desk-scale experiments on moments of zeta on the 1-line."""

from .config import TOOL_VERSION as __version__  # noqa: F401
