import logging
import os

_ROOT = "rewardlab"
_configured = False


def configure_logging(level: str = None) -> None:
    """Attach a stderr handler to the package logger, once"""
    global _configured
    root = logging.getLogger(_ROOT)
    level = (level or os.environ.get("LAB_LOG_LEVEL", "WARNING")).upper()
    root.setLevel(getattr(logging, level, logging.WARNING))
    if not _configured:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
        _configured = True


def get_logger(name: str) -> logging.Logger:
    if not name.startswith(_ROOT):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)
