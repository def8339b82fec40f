"""
mvrisk

Entry point script for the command line.
"""
import sys

from loguru import logger

from mvrisk.cli import run


if __name__ == "__main__":
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        logger.info("Process interrupted by user")
        sys.exit(130)
