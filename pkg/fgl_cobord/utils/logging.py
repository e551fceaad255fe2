import logging

from rich.console import Console
from rich.logging import RichHandler

# stderr only: stdout carries JSON
logging.basicConfig(
    level=logging.WARNING,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
)
logger = logging.getLogger("fgl_cobord")


def set_level(level: str):
    logger.setLevel(getattr(logging, str(level).upper(), logging.WARNING))
