"""
Characteristic scores and scales: impact classes from iteratively truncating a sample at its mean.

Each iteration computes the mean of the current sample, puts the values strictly below it into the next class, and
keeps the values at or above the mean as the next sample. Values equal to a mean therefore go upward.
"""
from __future__ import annotations

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from rankbench.errors import DomainError
from rankbench.pairstats import ValueSeries

__all__ = ['CssClassLabel', 'CssPartition', 'css_partition', 'assign_class', 'class_labels', 'DEFAULT_CLASSES']

_logger = logging.getLogger(__name__)

DEFAULT_CLASSES = 4

_FOUR_CLASS_LABELS = ('poorly cited', 'fairly cited', 'remarkably cited', 'outstandingly cited')


@dataclass(frozen=True)
class CssClassLabel:
    index: int
    """
    1-based class number, 1 being the lowest class.
    """
    label: str

    def __str__(self):
        return self.label


def class_labels(requested_classes: int) -> Tuple[CssClassLabel, ...]:
    """
    The labels of a run requesting `requested_classes` classes. A four class run uses the conventional labels, from
    "poorly cited" to "outstandingly cited"; any other count uses "class 1", "class 2", ...
    """
    if requested_classes == len(_FOUR_CLASS_LABELS):
        names: Sequence[str] = _FOUR_CLASS_LABELS
    else:
        names = [f'class {i}' for i in range(1, requested_classes + 1)]
    return tuple(CssClassLabel(i, name) for i, name in enumerate(names, 1))


@dataclass(frozen=True)
class CssPartition:
    thresholds: Tuple[float, ...]
    """
    The class boundaries, strictly increasing; class j holds the values v with thresholds[j-2] <= v < thresholds[j-1].
    """
    assignments: Tuple[int, ...]
    """
    The class of each input value, in input order.
    """
    class_sizes: Tuple[int, ...]
    requested_classes: int
    generated_classes: int

    @property
    def labels(self) -> Tuple[CssClassLabel, ...]:
        return class_labels(self.requested_classes)[:self.generated_classes]

    def label_of(self, index: int) -> CssClassLabel:
        return class_labels(self.requested_classes)[index - 1]

    def members(self, index: int) -> List[int]:
        """
        The positions of the input values in class `index`.
        """
        return [i for i, c in enumerate(self.assignments) if c == index]


def css_partition(s: Union[ValueSeries, Sequence[float]], requested_classes: int = DEFAULT_CLASSES) -> CssPartition:
    """
    Partition a series into at most `requested_classes` impact classes.

    If the surviving sample becomes constant before all classes are generated, it cannot be split any further; it
    becomes the last class and fewer classes than requested are generated.

    Raises:
        DomainError: the series is empty, or fewer than two classes were requested.
    """
    if requested_classes < 2:
        raise DomainError(f'at least 2 classes are required, got {requested_classes}')
    values = s.values if isinstance(s, ValueSeries) else tuple(float(v) for v in s)
    if not values:
        raise DomainError('cannot partition an empty series')
    if not all(math.isfinite(v) for v in values):
        raise DomainError('a value series must only contain finite values')

    x = np.asarray(values, dtype=float)
    assignments = np.zeros(len(x), dtype=int)
    surviving = np.arange(len(x))
    thresholds: List[float] = []
    class_index = 1
    while class_index < requested_classes:
        sample = x[surviving]
        low, high = sample.min(), sample.max()
        if low == high:
            _logger.info('sample of %d values is constant at %r, stopping after %d classes',
                         len(sample), float(low), class_index)
            break
        # rounding may push the mean of a nearly constant sample past its maximum
        mean = min(math.fsum(sample.tolist()) / len(sample), float(high))
        below = sample < mean
        if not below.any():
            _logger.info('no value below the mean %r, stopping after %d classes', mean, class_index)
            break
        assignments[surviving[below]] = class_index
        surviving = surviving[~below]
        thresholds.append(mean)
        class_index += 1

    assignments[surviving] = class_index
    sizes = np.bincount(assignments, minlength=class_index + 1)[1:]
    return CssPartition(
        thresholds=tuple(thresholds),
        assignments=tuple(int(a) for a in assignments),
        class_sizes=tuple(int(c) for c in sizes),
        requested_classes=requested_classes,
        generated_classes=class_index,
    )


def assign_class(v: float, p: CssPartition) -> int:
    """
    The class a value falls into under an existing partition. A value equal to a threshold belongs to the upper
    class.
    """
    return bisect_right(p.thresholds, v) + 1
