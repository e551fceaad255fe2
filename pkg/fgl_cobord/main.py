import sys
from typing import Optional

from fgl_cobord.cli.app import run
from fgl_cobord.utils.logging import logger


def main(argv: Optional[list[str]] = None) -> int:
    """fgl-cobord entry point; returns the process exit code"""
    try:
        return run(argv)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
