"""Compensated floating-point accumulation.

All reductions that feed reported numbers go through either `math.fsum`
(error-free transformation, exact to the final rounding) or the running
`CompensatedSum` below. Both give results that do not depend on how work
was partitioned across workers, which is what makes scan outputs
byte-reproducible.
"""

from __future__ import annotations

import math

fsum = math.fsum


class CompensatedSum:
    """Neumaier running sum for streaming accumulation.

    Keeps a carry term for the low-order bits lost by each `+=`, including
    the case where the incoming value is larger than the running sum.
    """

    __slots__ = ("_sum", "_carry")

    def __init__(self) -> None:
        self._sum = 0.0
        self._carry = 0.0

    def add(self, value: float) -> None:
        s = self._sum + value
        if abs(self._sum) >= abs(value):
            self._carry += (self._sum - s) + value
        else:
            self._carry += (value - s) + self._sum
        self._sum = s

    @property
    def value(self) -> float:
        return self._sum + self._carry
