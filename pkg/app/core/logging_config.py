import logging
import logging.config
from pathlib import Path
from typing import Any, Dict

from pydantic import BaseModel

from app.core.config import settings

LOGGER_NAME = "selfmap_chow"


class LogConfig(BaseModel):
    """Logging configuration shared by the server and the command line"""

    LOG_FORMAT: str = "%(levelprefix)s | %(asctime)s | %(message)s"
    LOG_LEVEL: str = settings.LOG_LEVEL

    # Logging config
    version: int = 1
    disable_existing_loggers: bool = False
    formatters: Dict[str, Dict[str, str]] = {
        "default": {
            "()": "uvicorn.logging.DefaultFormatter",
            "fmt": LOG_FORMAT,
            "datefmt": "%Y-%m-%d %H:%M:%S",
        },
        "access": {
            "()": "uvicorn.logging.AccessFormatter",
            "fmt": '%(levelprefix)s %(asctime)s - %(client_addr)s - "%(request_line)s" %(status_code)s',
        },
    }
    handlers: Dict[str, Dict[str, Any]] = {
        "default": {
            "formatter": "default",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stdout",
        },
        "access": {
            "formatter": "access",
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stdout",
        },
    }
    loggers: Dict[str, Dict[str, Any]] = {
        LOGGER_NAME: {
            "handlers": ["default"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "uvicorn": {
            "handlers": ["default"],
            "level": "INFO",
            "propagate": False,
        },
        "uvicorn.error": {
            "level": "INFO",
            "handlers": ["default"],
            "propagate": False,
        },
        "uvicorn.access": {
            "handlers": ["access"],
            "level": "INFO",
            "propagate": False,
        },
    }

    def with_file(self, log_dir: str, log_file: str) -> "LogConfig":
        """Attach a rotating file handler to the project and uvicorn loggers."""
        log_dir_path = Path(log_dir)
        log_dir_path.mkdir(parents=True, exist_ok=True)
        handlers = dict(self.handlers)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": "default",
            "filename": str(log_dir_path / log_file),
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
            "encoding": "utf8",
        }
        loggers = {name: dict(conf) for name, conf in self.loggers.items()}
        for name in (LOGGER_NAME, "uvicorn", "uvicorn.error"):
            loggers[name]["handlers"] = loggers[name]["handlers"] + ["file"]
        return self.model_copy(update={"handlers": handlers, "loggers": loggers})

    def to_stderr(self) -> "LogConfig":
        """Route the default handler to stderr, keeping stdout for results."""
        handlers = dict(self.handlers)
        handlers["default"] = dict(handlers["default"], stream="ext://sys.stderr")
        return self.model_copy(update={"handlers": handlers})


_configured = False


def setup_logging(stderr: bool = False) -> logging.Logger:
    """Apply the logging configuration once and return the project logger."""
    global _configured
    if not _configured:
        config = LogConfig()
        if stderr:
            config = config.to_stderr()
        if settings.LOG_TO_FILE:
            config = config.with_file(settings.LOG_DIR, settings.LOG_FILE)
        logging.config.dictConfig(config.model_dump())
        _configured = True
    return logging.getLogger(LOGGER_NAME)


def get_logger(name: str = "") -> logging.Logger:
    """Return the project logger or one of its children."""
    return logging.getLogger(f"{LOGGER_NAME}.{name}" if name else LOGGER_NAME)
