"""Replayable sources of variable draws.

Every draw of the resampling algorithms goes through a tape, so two
algorithms fed identical copies of a tape see identical random choices.
"""

from __future__ import annotations

import bisect
import copy
import random
from typing import Sequence

from .errors import TapeExhaustedError


class Tape:
    """Interface: ``draw(var)`` returns a value index for ``var``."""

    draw_counter: int

    def draw(self, var) -> int:
        raise NotImplementedError

    def clone(self) -> "Tape":
        """Independent copy positioned at the current draw."""
        return copy.deepcopy(self)

    def fresh(self) -> "Tape":
        """Copy rewound to the very first draw."""
        raise NotImplementedError


class RandomTape(Tape):
    """Seeded tape drawing each value with its exact rational weight.

    A draw picks an integer uniformly below the common denominator of the
    variable's weights, so no floating point rounding enters the sampling.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & (2**64 - 1)
        self.draw_counter = 0
        self._rng = random.Random(self.seed)

    def draw(self, var) -> int:
        denominator, cumulative = var.cumulative
        self.draw_counter += 1
        r = self._rng.randrange(denominator)
        return bisect.bisect_right(cumulative, r)

    def fresh(self) -> "RandomTape":
        return RandomTape(self.seed)

    def __repr__(self):
        return f"RandomTape(seed={self.seed}, draw_counter={self.draw_counter})"


class ForcedTape(Tape):
    """Tape replaying a fixed list of values, then an optional fallback tape."""

    def __init__(self, values: Sequence[int], fallback: Tape | None = None):
        self.values = tuple(int(v) for v in values)
        self.fallback = fallback
        self._fallback_start = fallback.clone() if fallback is not None else None
        self.draw_counter = 0
        self.seed = getattr(fallback, "seed", None)

    @property
    def remaining(self) -> int:
        return max(0, len(self.values) - self.draw_counter)

    def draw(self, var) -> int:
        if self.draw_counter < len(self.values):
            value = self.values[self.draw_counter]
            if not 0 <= value < var.domain_size:
                raise ValueError(
                    f"forced draw {self.draw_counter} = {value} outside domain of variable {var.id}"
                )
        elif self.fallback is not None:
            value = self.fallback.draw(var)
        else:
            raise TapeExhaustedError(f"forced tape exhausted after {len(self.values)} draws")
        self.draw_counter += 1
        return value

    def fresh(self) -> "ForcedTape":
        fallback = self._fallback_start.clone() if self._fallback_start is not None else None
        return ForcedTape(self.values, fallback)

    def __repr__(self):
        return f"ForcedTape({len(self.values)} values, draw_counter={self.draw_counter})"
