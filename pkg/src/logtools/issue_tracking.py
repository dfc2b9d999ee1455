import csv
import logging
from pathlib import Path


class IssueTrackingHandler(logging.Handler):
    """A logging handler that tracks issues with severity WARNING or higher.

    Collects log records as issues and provides methods to export or query them.
    The command line uses it to export warnings and property violations raised
    during a run.
    """

    def __init__(self):
        super().__init__()
        self.issues = []

    def emit(self, record: logging.LogRecord) -> None:
        """Emit a log record.

        Args:
            record: The log record to emit.
        """
        if record.levelno >= logging.WARNING:
            self.issues.append(
                {
                    "severity": record.levelname,
                    "levelno": record.levelno,
                    "message": record.getMessage(),
                    "module": record.module,
                    "line": record.lineno,
                    "func": record.funcName,
                }
            )

    def max_severity_level(self) -> str | None:
        """Returns the name of the most severe tracked level, or None when clean."""
        if self.issues:
            return max(self.issues, key=lambda x: x["levelno"])["severity"]
        return None

    def has_errors(self) -> bool:
        """Checks if errors were logged.

        Returns:
            True if an ERROR or CRITICAL record was tracked, else False.
        """
        return any(issue["levelno"] >= logging.ERROR for issue in self.issues)

    def get_issues(self) -> list:
        """Retrieves list of issues

        Returns:
            List of dictionaries
        """
        return self.issues

    def clear(self) -> None:
        """Forgets all tracked issues (one command run per process in normal use)."""
        self.issues.clear()

    def write_csv(self, file_csv: str | Path) -> int:
        """Exports logged issues to a CSV file.

        Args:
            file_csv: The location of the CSV file

        Returns:
            Number of issues written.
        """
        fieldnames = ["severity", "message", "module", "line", "func"]
        with open(file_csv, "w", encoding="utf8", newline="") as output_file:
            fc = csv.DictWriter(
                output_file,
                fieldnames=fieldnames,
                dialect="excel",
                quoting=csv.QUOTE_STRINGS,
                extrasaction="ignore",
            )
            fc.writeheader()
            fc.writerows(self.issues)
        return len(self.issues)
