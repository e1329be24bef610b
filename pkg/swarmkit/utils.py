"""
Utility functions for the swarmkit command line.
"""

import logging
import sys
from fractions import Fraction
from typing import Optional, Union

logger = logging.getLogger(__name__)


def read_stdin_or_file(file_path: Optional[str] = None) -> str:
    """
    Read content from stdin or a file.

    Args:
        file_path: Path to a file (optional, uses stdin if None or "-")

    Returns:
        str: The content read from stdin or the file
    """
    if file_path and file_path != "-":
        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()
    return sys.stdin.read()


def write_stdout_or_file(content: str, file_path: Optional[str] = None) -> None:
    """
    Write content to stdout or a file.

    Args:
        content: The content to write
        file_path: Path to a file (optional, uses stdout if None or "-")
    """
    if file_path and file_path != "-":
        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(content)
        logger.debug("wrote %s", file_path)
    else:
        sys.stdout.write(content)
        sys.stdout.flush()


def parse_param_value(text: str) -> Union[int, Fraction, str]:
    """Read a --param value as an integer, a rational, or else a bare string."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            pass
    return text


def log_error_with_prefix(message, filename=None):
    """
    Log an error and print it to stderr, prefixed with the file it concerns.
    """
    logging.getLogger("swarmkit").error(message)
    if filename:
        print(f"swarmkit: {filename}: {message}", file=sys.stderr)
    else:
        print(f"swarmkit: {message}", file=sys.stderr)
