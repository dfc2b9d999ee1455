import csv
import logging

from logtools import IssueTrackingHandler, get_logger
from logtools.color_formatter import ColorFormatter


class TestIssueTracking:
    def test_only_warnings_and_above_are_tracked(self):
        handler = IssueTrackingHandler()
        logger = logging.getLogger("natex.test.tracking")
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)
        try:
            logger.info("solved")
            logger.warning("threshold search skipped")
            assert len(handler.get_issues()) == 1
            assert not handler.has_errors()
            logger.error("property failed")
            assert handler.has_errors()
            assert handler.max_severity_level() == "ERROR"
        finally:
            logger.removeHandler(handler)

    def test_write_csv(self, tmp_path):
        handler = IssueTrackingHandler()
        handler.handle(logging.makeLogRecord({"levelno": logging.WARNING, "levelname": "WARNING", "msg": "capped"}))
        path = tmp_path / "issues.csv"
        assert handler.write_csv(path) == 1
        with open(path, encoding="utf8", newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert rows[0]["severity"] == "WARNING"
        assert rows[0]["message"] == "capped"

    def test_clear(self):
        handler = IssueTrackingHandler()
        handler.handle(logging.makeLogRecord({"levelno": logging.ERROR, "levelname": "ERROR", "msg": "x"}))
        handler.clear()
        assert handler.max_severity_level() is None

    def test_get_logger_attaches_the_tracker_once(self):
        logger = get_logger("natex.test.once")
        get_logger("natex.test.once")
        assert sum(isinstance(h, IssueTrackingHandler) for h in logger.handlers) == 1


class TestColorFormatter:
    def test_record_is_not_modified(self):
        record = logging.makeLogRecord({"levelno": logging.WARNING, "levelname": "WARNING", "msg": "m"})
        text = ColorFormatter("%(levelname)s %(message)s").format(record)
        assert "\033[33m" in text
        assert record.levelname == "WARNING"
