# Unit tests for logging setup
import logging
import warnings

from src.core.exceptions import NonCertifiedSupport
from src.utils.logger import get_logger, setup_logger


class TestLogger:
    """Test cases for logger configuration."""

    def test_file_handler(self, tmp_path):
        """Messages reach the log file with the standard format."""
        path = tmp_path / "logs" / "run.log"
        logger = setup_logger("geospec.test.file", str(path), "INFO")
        logger.info("enumeration finished")
        for handler in logger.handlers:
            handler.flush()
        text = path.read_text(encoding="utf-8")
        assert " - geospec.test.file - INFO - enumeration finished" in text
        assert get_logger("geospec.test.file") is logger

    def test_level_filters(self, tmp_path):
        """Messages below the configured level are dropped."""
        path = tmp_path / "quiet.log"
        logger = setup_logger("geospec.test.level", str(path), "warning")
        logger.info("hidden")
        logger.warning("shown")
        for handler in logger.handlers:
            handler.flush()
        text = path.read_text(encoding="utf-8")
        assert "hidden" not in text
        assert "shown" in text

    def test_captured_warnings(self, tmp_path):
        """Uncertified-support warnings land in the run log."""
        path = tmp_path / "warn.log"
        logger = setup_logger("geospec.test.warn", str(path), "INFO", capture_warnings=True)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("always")
                warnings.warn("support beyond cutoff", NonCertifiedSupport)
            for handler in logger.handlers:
                handler.flush()
            assert "support beyond cutoff" in path.read_text(encoding="utf-8")
        finally:
            logging.captureWarnings(False)
            logging.getLogger("py.warnings").handlers.clear()
