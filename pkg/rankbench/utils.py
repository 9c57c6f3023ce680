from __future__ import annotations

import re
from contextlib import AbstractContextManager, contextmanager, nullcontext
from decimal import ROUND_HALF_UP, Decimal, localcontext
from typing import Callable, Iterator, Optional, Tuple

from yaspin import yaspin

__all__ = ['format_fixed', 'period_sort_key', 'progress_spinner']

_SPINNER_FAILMSG = "💥 "
_SPINNER_SUCCESSMSG = "✅ "

_YEAR_PATTERN = re.compile(r'\d{4}')


@contextmanager
def _spinner(text: str) -> Iterator[None]:
    with yaspin(text=text) as spinner:
        try:
            yield
        except Exception:
            spinner.fail(_SPINNER_FAILMSG)
            raise
        spinner.ok(_SPINNER_SUCCESSMSG)


def progress_spinner(enabled: bool) -> Callable[[str], AbstractContextManager]:
    """
    Get a factory of progress spinners.

    Args:
        enabled: whether to actually spin. The spinner writes to standard output, so callers must only enable it
            when results go elsewhere.

    Returns:
        A callable accepting the spinner's text and returning a context manager.
    """
    if not enabled:
        return lambda text: nullcontext()
    return _spinner


def period_sort_key(period: str) -> Tuple[int, Tuple[int, ...], str]:
    """
    Sort key placing period labels newest first: "2012-2015" before "2011-2014". Labels without a year sort last,
    alphabetically.
    """
    years = tuple(int(y) for y in _YEAR_PATTERN.findall(period))
    if not years:
        return 1, (), period
    return 0, tuple(-y for y in reversed(years)), period


def format_fixed(value: Optional[float], precision: int) -> str:
    """
    Format a value for display with `precision` decimal places, rounding half away from zero.

    The value is rounded from its shortest repr, so 0.345 displays as "0.35" even though the nearest double is
    slightly below it. None formats as an empty string.
    """
    if value is None:
        return ''
    exact = Decimal(repr(value))
    quantum = Decimal(1).scaleb(-precision)
    with localcontext() as ctx:
        # room for every integer digit and every requested decimal place
        ctx.prec = max(exact.adjusted(), 0) + precision + 2
        rounded = exact.quantize(quantum, rounding=ROUND_HALF_UP)
    if rounded.is_zero():
        rounded = abs(rounded)
    return f'{rounded:f}'
