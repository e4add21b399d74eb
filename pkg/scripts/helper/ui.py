# scripts/helper/ui.py
import sys
from typing import ContextManager

from .env import env_bool


def _wants_verbose() -> bool:
    if env_bool("QBSIM_QUIET", "0"):
        return False
    return env_bool("QBSIM_VERBOSE", "1")


def _wants_rich() -> bool:
    return env_bool("QBSIM_USE_RICH", "1")


class _PlainStatus:
    def __init__(self, ui: 'UI', msg: str):
        self.ui = ui
        self.msg = msg

    def __enter__(self):
        self.ui.log(self.msg)
        return self

    def __exit__(self, exc_type, exc, tb):
        return False


class UI:
    """Console reporter for the CLI: rich when available, plain stderr otherwise."""

    def __init__(self):
        self.verbose = _wants_verbose()
        self._use_rich = _wants_rich()
        self._console = None
        self._Spinner = None

        if self._use_rich:
            try:
                from rich.console import Console  # type: ignore
                from rich.status import Status  # type: ignore
                self._console = Console(stderr=True, highlight=False)
                self._Spinner = Status
            except Exception:
                self._console = None
                self._Spinner = None

    def _print(self, msg: str, style: str | None = None) -> None:
        if self._console is not None:
            self._console.print(msg, style=style, markup=False)
        else:
            print(msg, file=sys.stderr)

    def log(self, msg: str) -> None:
        if not self.verbose:
            return
        self._print(msg)

    def warn(self, msg: str) -> None:
        self._print(msg, "yellow")

    def status(self, msg: str) -> ContextManager:
        if self._Spinner is not None and self._console is not None and self.verbose:
            return self._Spinner(msg, console=self._console)
        return _PlainStatus(self, msg)
