import logging
import sys

from tqdm import tqdm


class TqdmLoggingHandler(logging.Handler):
    """Console handler that prints through ``tqdm.write``.

    Messages go to stderr so that running progress bars are redrawn below them
    and stdout stays reserved for reports.
    """

    def __init__(self, level=logging.NOTSET):
        super().__init__(level)

    def emit(self, record):
        try:
            msg = self.format(record)
            tqdm.write(msg, file=sys.stderr)
            self.flush()
        except Exception:
            self.handleError(record)
