# scripts/helper/colors.py
import os
import sys


class Colors:
    """
    ANSI colouring for the CLI error prefix on stderr.
    Plain text when stderr is not a TTY, unless FORCE_COLOR=1.
    """
    RED = "\033[91m"
    RESET = "\033[0m"

    @staticmethod
    def _wrap(text: str, code: str, stream=None) -> str:
        stream = stream or sys.stderr
        if not stream.isatty() and os.getenv("FORCE_COLOR") != "1":
            return text
        return f"{code}{text}{Colors.RESET}"

    @staticmethod
    def r(text: str) -> str: return Colors._wrap(text, Colors.RED, sys.stderr)

    @staticmethod
    def tag(tool: str = "qbsim") -> str:
        """Red '[qbsim]' prefix for fatal errors."""
        return Colors.r(f"[{tool}]")
