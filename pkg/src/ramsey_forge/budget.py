"""Node-expansion budgets for the exact searches."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import BudgetExceededError

ENV_VAR = "RAMSEY_FORGE_BUDGET"


@dataclass
class Budget:
    """Counts node expansions and raises once a limit is crossed.

    ``limit=None`` means unlimited.  A single Budget may be shared by
    several searches so the cap is global to one run.
    """

    limit: int | None = None
    used: int = field(default=0, compare=False)

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceededError(
                f"search budget exceeded: {self.used} > {self.limit} node expansions"
            )

    @classmethod
    def from_env(cls) -> "Budget":
        raw = os.environ.get(ENV_VAR)
        if raw is None:
            return cls(limit=None)
        try:
            return cls(limit=int(raw))
        except ValueError:
            raise BudgetExceededError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
