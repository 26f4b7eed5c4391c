from __future__ import annotations
import logging
from typing import TYPE_CHECKING

from algorithms.bounds import dependent_upper_bound, independent_upper_bound, lower_bound_value
from algorithms.gaps import check_users, gap_summary
from errors import DomainError
from models.bounds import BoundReport

if TYPE_CHECKING:
    from models.instances import EgalMabInstance

logger = logging.getLogger(__name__)


def bound_report(K: int, U: int, T: int, delta_min: float | None = None, delta_max: float | None = None) -> BoundReport:
    """
    Evaluates every bound that applies to (K, U, T) and the given gaps.

    The problem-dependent bound is present only when U < K and delta_min is
    defined and positive, which also requires delta_max; the lower bound only
    when K >= 2U.

    Raises:
        DomainError: If U is out of range, T < 2, or a given gap is negative.
    """
    check_users(K, U)
    if T < 2:
        raise DomainError(f"Horizon must be >= 2, got T={T}.")
    if delta_min is not None and delta_min < 0:
        raise DomainError(f"delta_min must be >= 0, got {delta_min}.")
    if delta_max is not None and delta_max < 0:
        raise DomainError(f"delta_max must be >= 0, got {delta_max}.")

    dependent = None
    if U < K and delta_min is not None and delta_min > 0 and delta_max is not None:
        dependent = dependent_upper_bound(K, U, T, delta_min, delta_max)
    lower = lower_bound_value(K, U, T) if K >= 2 * U else None
    return BoundReport(
        K=K,
        U=U,
        T=T,
        delta_min=delta_min,
        delta_max=delta_max,
        dependent_upper=dependent,
        independent_upper=independent_upper_bound(K, U, T),
        lower=lower,
    )


class BoundService:
    """
    Evaluates regret bounds for concrete instances or hypothetical gaps.
    """

    def for_gaps(self, K: int, U: int, T: int, delta_min: float | None, delta_max: float | None) -> BoundReport:
        report = bound_report(K, U, T, delta_min, delta_max)
        logger.info("[BoundService] K=%d U=%d T=%d indep=%.6g", K, U, T, report.independent_upper)
        return report

    def for_instance(self, instance: EgalMabInstance, U: int, T: int) -> BoundReport:
        """Wires the instance's gap summary into the bound evaluators."""
        summary = gap_summary(instance, U)
        if summary.delta_min is None and U < instance.K:
            logger.warning("[BoundService] delta_min is undefined (tied means at rank %d); skipping the dependent bound.", U)
        return self.for_gaps(instance.K, U, T, summary.delta_min, summary.delta_max)
