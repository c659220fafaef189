import logging
import sys


def setup_logging(level: int = logging.INFO):
    """
    Set up basic configuration for logging.

    Records go to stderr so stdout and output files carry data only.
    """
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)
