"""Logging for the natex command line: JSON log file, tqdm-safe console output and an issue log."""

from .issue_tracking import IssueTrackingHandler
from .log_config import setup_logging
from .log_manager import get_logger, issue_tracker

__all__ = ["IssueTrackingHandler", "get_logger", "issue_tracker", "setup_logging"]
