"""Exception types shared across modules.

Kept free of third-party imports so the command-line front end can import
them before deciding runtime settings that must precede numpy's load.
"""

from __future__ import annotations

__all__ = ["OptimizerDivergedError"]


class OptimizerDivergedError(RuntimeError):
    """The descent produced a non-finite objective and was aborted.

    ``iteration`` is the 0-based iteration at which the objective stopped
    being finite.
    """

    def __init__(self, iteration: int, value: float):
        self.iteration = int(iteration)
        self.value = value
        super().__init__(
            f"objective became non-finite ({value}) at iteration {iteration}; "
            "aborting descent"
        )
