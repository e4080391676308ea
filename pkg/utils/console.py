"""Console output for the CLI: markers and banners on a rich Console"""
import logging

from rich.console import Console
from rich.logging import RichHandler

MARKERS = {"ok": "[✓]", "warn": "[!]", "info": "[i]", "error": "[X]"}
BANNER_WIDTH = 60


class RunConsole:
    """Progress printer; quiet mode drops everything except errors"""

    def __init__(self, quiet=False, console=None):
        self.quiet = quiet
        self.console = console or Console(highlight=False)

    def banner(self, title):
        if self.quiet:
            return
        self.console.print("=" * BANNER_WIDTH, markup=False)
        self.console.print(title, markup=False)
        self.console.print("=" * BANNER_WIDTH, markup=False)

    def line(self, text=""):
        if not self.quiet:
            self.console.print(text, markup=False)

    def mark(self, kind, text):
        if kind == "error" or not self.quiet:
            self.console.print(f"  {MARKERS[kind]} {text}", markup=False)


def configure_logging(quiet=False):
    """Route library logging through rich; warnings and above only when quiet"""
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(show_path=False, markup=False)],
        force=True,
    )
