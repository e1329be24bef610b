"""
Logging setup for the swarmkit command line.
"""

import logging
import sys

logger = logging.getLogger("swarmkit")


class LogFilter(logging.Filter):
    """Filter to control which log records are emitted."""
    def __init__(self, quiet=False):
        super().__init__()
        self.quiet = quiet

    def filter(self, record):
        # In quiet mode, only let through ERROR or higher level messages
        if self.quiet and record.levelno < logging.ERROR:
            return False
        return True


def configure_logging(options) -> None:
    """
    Configure the ``swarmkit`` logger from command line options.

    The console handler writes to stderr at WARNING, INFO with --verbose,
    DEBUG with --debug and ERROR only with --quiet. A log file, when given,
    receives INFO or DEBUG records with timestamps.
    """
    # The logger passes everything; handlers filter
    logger.setLevel(logging.DEBUG)

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    if options.log_file:
        try:
            file_handler = logging.FileHandler(options.log_file, 'w', encoding='utf-8')
            file_handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)-8s: %(message)s'))
            file_handler.setLevel(logging.DEBUG if options.debug else logging.INFO)
            logger.addHandler(file_handler)
            file_handler.emit(logging.LogRecord(
                name=logger.name, level=logging.INFO, pathname="", lineno=0,
                msg=f"File logging started at level {logging.getLevelName(file_handler.level)}",
                args=(), exc_info=None))
        except OSError as e:
            # logging is not usable yet
            print(f"FATAL: Failed to create log file '{options.log_file}': {e}", file=sys.stderr)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    if options.debug:
        console_handler.setLevel(logging.DEBUG)
    elif options.verbose:
        console_handler.setLevel(logging.INFO)
    else:
        console_handler.setLevel(logging.WARNING)
    console_handler.addFilter(LogFilter(quiet=options.quiet))
    logger.addHandler(console_handler)

    logger.propagate = False
