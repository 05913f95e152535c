import os
import sys
import logging
from datetime import datetime
from pathlib import Path
from typing import Set

_current_log_file = None
_loggers_initialized: Set[str] = set()


class CustomFormatter(logging.Formatter):
    def format(self, record):
        timestamp = datetime.fromtimestamp(record.created).strftime("%Y-%m-%d %H:%M:%S")
        return f"[{timestamp}]: {record.filename}: line {record.lineno}: {record.levelname}: {record.getMessage()}"


def get_logger(name: str = "nodalparity"):
    """
    Logger structure:
    <NODAL_LOG_DIR or logs>/<YYYY-MM-DD>/<YYYY-MM-DD HH-MM-SS>.log

    Console → WARNING + ERROR
    File → DEBUG and above

    Format:
    [TIMESTAMP]: filename: line: LEVEL: message
    """
    global _current_log_file

    if _current_log_file is None:
        dated_dir = Path(os.environ.get("NODAL_LOG_DIR", "logs")) / datetime.now().strftime("%Y-%m-%d")
        try:
            dated_dir.mkdir(parents=True, exist_ok=True)
            _current_log_file = dated_dir / f"{datetime.now().strftime('%Y-%m-%d %H-%M-%S')}.log"
        except OSError as e:
            print(f"Failed to create log directory: {e}", file=sys.stderr)
            _current_log_file = Path("fallback.log")

    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    logger.propagate = False

    # Avoid re-adding handlers
    if name in _loggers_initialized:
        return logger

    _loggers_initialized.add(name)
    formatter = CustomFormatter()

    try:
        file_handler = logging.FileHandler(_current_log_file, encoding="utf-8", delay=True)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
    except OSError as e:
        print(f"Failed to create file handler: {e}", file=sys.stderr)

    # stderr only: stdout carries JSON reports
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger
