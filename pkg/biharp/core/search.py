"""
Multiplicative coordinate ascent shared by the domination search and the X0
witness search. Both objectives are invariant under positive rescaling, so
entries are multiplied or divided by a step factor, never shifted.
"""

from typing import Callable

import numpy as np

ASCENT_STEPS = (4.0, 2.0, 1.25, 1.05)

Objective = Callable[[np.ndarray], np.ndarray]


def coordinate_ascent(
    objective: Objective,
    start: np.ndarray,
    budget: int,
    stream: np.random.Generator,
    steps: tuple[float, ...] = ASCENT_STEPS,
) -> tuple[np.ndarray, float, int]:
    """
    Greedy ascent from `start`; returns (best point, best value, evaluations used).
    The evaluation sequence depends only on `start` and `stream`, so a smaller
    budget always sees a prefix of a larger budget's sequence.
    """
    if budget <= 0:
        return np.array(start), float("-inf"), 0
    current = np.array(start, dtype=np.float64)
    value = float(objective(current[None, :])[0])
    used = 1
    for step in steps:
        improved = True
        while improved and used + 2 <= budget:
            improved = False
            for index in stream.permutation(current.size):
                if used + 2 > budget:
                    break
                candidates = np.vstack([current, current])
                candidates[0, index] *= step
                candidates[1, index] /= step
                values = objective(candidates)
                used += 2
                top = int(np.argmax(values))
                if values[top] > value:
                    current, value = candidates[top], float(values[top])
                    improved = True
    return current, value, used
