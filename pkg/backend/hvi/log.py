import logging
import time
from contextlib import contextmanager
from contextvars import ContextVar
from functools import wraps

from .config import config

# name of the CLI command currently running
current_command: ContextVar[str] = ContextVar("current_command", default="N/A")


class CustomFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        record.command = current_command.get()
        return super().format(record)


def setup_logging(config) -> None:  # pragma: no cover
    debug_on = config["debug"].get(False)
    log_level = logging.DEBUG if debug_on else logging.INFO

    formatter = CustomFormatter(
        "[%(asctime)s] %(levelname)s [%(command)s] %(name)s | %(message)s"
    )
    handler = logging.StreamHandler()
    handler.setFormatter(formatter)

    root = logging.getLogger()
    if not any(isinstance(h.formatter, CustomFormatter) for h in root.handlers):
        root.addHandler(handler)
    root.setLevel(logging.WARNING)

    logging.getLogger("hvi").setLevel(log_level)
    logging.getLogger("hvi").debug("Debugging enabled")


@contextmanager
def command_context(name: str):
    token = current_command.set(name)
    try:
        yield
    finally:
        current_command.reset(token)


def time_me(logger_name: str | None, force: bool = False):
    logger = logging.getLogger(logger_name or __name__)

    def _(func):
        @contextmanager
        def wrapping_logic():
            logger.debug("entered %s", func.__name__)
            wall_start = time.time()
            cpu_start = time.process_time()
            yield
            wall_time = time.time() - wall_start
            cpu_time = time.process_time() - cpu_start
            logger.debug(
                "finished %s (wall/cpu [ms]: %.3f/%.3f)",
                func.__name__,
                wall_time * 1000,
                cpu_time * 1000,
            )

        @wraps(func)
        def wrapper(*args, **kwargs):
            with wrapping_logic():
                return func(*args, **kwargs)

        # Save processing power if trace is not enabled
        if not force and not config["trace"].get(False):
            return func

        return wrapper

    return _
