import itertools
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.detectors import build_conventional
from src.metrics import gain_lambda, sensitivity_integral
from src.model import NetworkSpec, assemble_system
from src.response import poles
from src.utils.errors import UnstableSystemError
from src.utils.handle_exceptions import CapturedError, handle_exceptions

logger = logging.getLogger(__name__)

MetricValue = Union[float, Mapping[str, float]]
Family = Callable[..., NetworkSpec]
Metric = Callable[[NetworkSpec], MetricValue]


def grid_sweep(
    family: Family,
    axes: Mapping[str, Sequence[float]],
    metric: Metric,
    workers: Optional[int] = None,
    metric_name: str = "value",
) -> pd.DataFrame:
    """
    Evaluate ``metric(family(**point))`` on the product of ``axes``.

    Rows follow the lexicographic order of the axes as given. A metric may
    return a number (stored under ``metric_name``) or a mapping of named
    numbers. A failing point keeps NaN metrics and its error text in the
    ``error`` column; the sweep continues.

    Raises:
        ValueError: If ``axes`` is empty or an axis has no values.
    """
    if not axes or any(len(values) == 0 for values in axes.values()):
        raise ValueError("every sweep axis needs at least one value")
    names = list(axes)
    points = [
        OrderedDict(zip(names, map(float, combo)))
        for combo in itertools.product(*(axes[name] for name in names))
    ]

    @handle_exceptions
    def evaluate(point: Dict[str, float]) -> MetricValue:
        return metric(family(**point))

    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(executor.map(evaluate, points))

    metric_columns: List[str] = []
    rows = []
    for point, result in zip(points, results):
        row: Dict[str, Any] = dict(point)
        if isinstance(result, CapturedError):
            row["error"] = str(result)
        else:
            values = (
                dict(result)
                if isinstance(result, Mapping)
                else {metric_name: float(result)}
            )
            for key in values:
                if key not in metric_columns:
                    metric_columns.append(key)
            row.update(values)
            row["error"] = ""
        rows.append(row)

    failed = sum(1 for r in results if isinstance(r, CapturedError))
    logger.info(
        f"Sweep over {len(points)} point(s) finished, {failed} failed"
    )
    frame = pd.DataFrame(rows)
    for key in metric_columns or [metric_name]:
        if key not in frame:
            frame[key] = np.nan
    return frame[names + (metric_columns or [metric_name]) + ["error"]]


def gain_versus_conventional(spec: NetworkSpec) -> float:
    """
    Sensitivity gain of ``spec`` over the lossless conventional detector
    with the same readout rate and signal coupling.
    """
    system = assemble_system(spec)
    reference = build_conventional(
        spec.readout.rate, alpha=spec.signals[0].coupling
    )
    return gain_lambda(
        sensitivity_integral(system),
        sensitivity_integral(assemble_system(reference)),
    )


def stable_gain(spec: NetworkSpec) -> float:
    """
    ``gain_versus_conventional`` for stable or marginal networks.

    Raises:
        UnstableSystemError: If a visible pole grows.
    """
    pole_set = poles(spec)
    if pole_set.classification == "unstable":
        raise UnstableSystemError(pole_set.classification, pole_set.max_growth)
    return gain_versus_conventional(spec)
