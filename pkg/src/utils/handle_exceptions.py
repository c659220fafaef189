import functools
import logging
import sys
import traceback
from dataclasses import dataclass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CapturedError:
    """
    Marker returned in place of a result when a wrapped call failed.
    """

    function: str
    error_type: str
    message: str
    marker: str = "error"

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.marker}: {self.error_type}: {self.message}"


def handle_exceptions(func):
    """
    Decorator to handle exceptions in a standardized way across sweeps.
    Logs the exception and returns a CapturedError in case of an error.

    :param func: The function to decorate.
    :return: Wrapped function with exception handling.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.exception(f"Exception occurred in {func.__name__}: {str(e)}")
            _, err, _ = sys.exc_info()
            logger.debug(traceback.format_tb(err.__traceback__)[-1])
            return CapturedError(
                function=func.__name__,
                error_type=type(e).__name__,
                message=str(e),
                marker=getattr(e, "marker", "error"),
            )
        else:
            return result

    return wrapper
