"""Status lines and spinners for long verification runs."""

from collections.abc import Generator
from contextlib import contextmanager

from rich.console import Console
from rich.live import Live
from rich.spinner import Spinner
from rich.text import Text

console = Console(stderr=True)


@contextmanager
def loading_indicator(message: str = "Computing") -> Generator[None, None, None]:
    """Spinner on stderr while a block runs; removed when the block exits.

    Example:
        with loading_indicator("Solving degree 6"):
            invariant_space(ctx, 6)
    """
    spinner = Spinner("dots", text=f"[cyan]{message}...[/cyan]")
    with Live(spinner, console=console, transient=True):
        yield


def _status(glyph: str, style: str, message: str) -> None:
    text = Text()
    text.append(f"{glyph} ", style=f"bold {style}")
    text.append(message, style=style)
    console.print(text)


def show_success(message: str) -> None:
    _status("✓", "green", message)


def show_error(message: str) -> None:
    """Print a failure line, e.g. the failing (mu, lam, check) triple of a batch run."""
    _status("✗", "red", message)


def show_info(message: str) -> None:
    _status("ℹ", "blue", message)


def show_warning(message: str) -> None:
    _status("⚠", "yellow", message)
