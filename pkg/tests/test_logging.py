import logging
import logging.config

from app import cli
from app.core import logging_config
from app.core.logging_config import LOGGER_NAME, LogConfig, get_logger, setup_logging


def test_config_builds_and_applies():
    """Test the default configuration can be built and handed to dictConfig."""
    # Test
    config = LogConfig()

    # Assert
    assert config.handlers["default"]["stream"] == "ext://sys.stdout"
    logging.config.dictConfig(config.model_dump())


def test_stderr_routing():
    """Test the command-line configuration sends diagnostics to stderr."""
    config = LogConfig().to_stderr()
    assert config.handlers["default"]["stream"] == "ext://sys.stderr"
    assert LogConfig().handlers["default"]["stream"] == "ext://sys.stdout"


def test_file_handler(tmp_path):
    """Test the rotating file handler is attached to the project logger."""
    # Test
    config = LogConfig().with_file(str(tmp_path / "logs"), "chow.log")

    # Assert
    assert config.handlers["file"]["filename"] == str(tmp_path / "logs" / "chow.log")
    assert "file" in config.loggers[LOGGER_NAME]["handlers"]
    assert (tmp_path / "logs").is_dir()


def test_setup_logging_both_streams(monkeypatch):
    """Test setup_logging for the server and for the command line."""
    # Setup
    monkeypatch.setattr(logging_config, "_configured", False)

    # Test
    server_logger = setup_logging()
    monkeypatch.setattr(logging_config, "_configured", False)
    cli_logger = setup_logging(stderr=True)

    # Assert
    assert server_logger.name == LOGGER_NAME
    assert cli_logger is server_logger
    assert get_logger("engine").name == f"{LOGGER_NAME}.engine"


def test_cli_runs_with_fresh_logging(monkeypatch, capsys):
    """Test a command configures logging itself and reports invalid input."""
    monkeypatch.setattr(logging_config, "_configured", False)
    assert cli.main(["basis", "--d", "1", "--n", "0"]) == cli.EXIT_INVALID
    monkeypatch.setattr(logging_config, "_configured", False)
    assert cli.main(["basis", "--d", "2", "--n", "0"]) == cli.EXIT_OK
    assert "rank 2" in capsys.readouterr().out
