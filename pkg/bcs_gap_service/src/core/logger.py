import logging
import sys
from pathlib import Path

# Attributes every LogRecord carries; anything else came in through ``extra``
_RECORD_ATTRIBUTES = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime", "taskName"}


class ContextFormatter(logging.Formatter):
    """Appends the ``extra`` fields of a record as sorted key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        context = {key: value for key, value in vars(record).items() if key not in _RECORD_ATTRIBUTES}
        if not context:
            return line
        return line + " | " + " ".join(f"{key}={context[key]!r}" for key in sorted(context))


class _StdoutHandler(logging.StreamHandler):
    """Console handler bound to the current sys.stdout rather than the one seen at creation."""

    @property
    def stream(self):
        return sys.stdout

    @stream.setter
    def stream(self, value) -> None:
        pass


class Logger:
    def __init__(self, name="bcs_gap_logger", level=logging.INFO, log_dir="logs"):
        """Console logger with an error file under ``log_dir``; handlers are attached once per name."""
        self._logger = logging.getLogger(name)
        self._logger.setLevel(level)
        self._logger.propagate = False

        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)

        if not self._logger.handlers:
            formatter = ContextFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

            console_handler = _StdoutHandler()
            console_handler.setFormatter(formatter)
            self._logger.addHandler(console_handler)

            error_file_handler = logging.FileHandler(log_path / "error.log", delay=True)
            error_file_handler.setLevel(logging.ERROR)
            error_file_handler.setFormatter(formatter)
            self._logger.addHandler(error_file_handler)

    def set_level(self, level: int | str) -> None:
        self._logger.setLevel(level)

    def info(self, msg, *args, **kwargs) -> None:
        self._logger.info(msg, *args, **kwargs)

    def error(self, msg, *args, **kwargs) -> None:
        self._logger.error(msg, *args, **kwargs)

    def debug(self, msg, *args, **kwargs) -> None:
        self._logger.debug(msg, *args, **kwargs)

    def warning(self, msg, *args, **kwargs) -> None:
        self._logger.warning(msg, *args, **kwargs)

    def exception(self, msg, *args, **kwargs) -> None:
        """Log an error with the active traceback."""
        self._logger.exception(msg, *args, **kwargs)
