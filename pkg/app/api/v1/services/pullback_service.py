from typing import Tuple

from app.chow.picard import DivClass
from app.chow.pullbacks import (
    pullback_compose,
    pullback_forget_last,
    pullback_selfcompose,
)
from app.core.exceptions import InvalidInputError


class PullbackService:
    """Service for handling pullbacks of divisor classes."""

    def compose(self, d1: int, n1: int, d2: int, cls: DivClass) -> Tuple[DivClass, DivClass]:
        """
        Pull back along Y_{d1,n1} x Y_{d2,0} -> Y_{d1*d2,n1}.

        Args:
            d1: Degree of the inner map
            n1: Number of markings
            d2: Degree of the outer map
            cls: Class on Y_{d1*d2,n1}

        Returns:
            The two components on Y_{d1,n1} and Y_{d2,0}
        """
        if d1 < 0 or d2 < 0:
            raise InvalidInputError(f"Degrees must be nonnegative, got {d1} and {d2}")
        return pullback_compose(d1, n1, d2, cls)

    def selfcompose(self, d: int, n: int, m: int, cls: DivClass) -> DivClass:
        """
        Pull back along f -> f^m from Y_{d^m,n} to Y_{d,n}.
        """
        return pullback_selfcompose(d, n, m, cls)

    def forget(self, d: int, n: int, cls: DivClass) -> DivClass:
        """
        Pull back along Y_{d,n+1} -> Y_{d,n}, forgetting the last marking.
        """
        return pullback_forget_last(d, n, cls)
