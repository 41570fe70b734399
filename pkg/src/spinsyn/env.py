"""XOR reward environment: two input bits, reward 1 for the correct parity."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Sample:
    """One task instance; the target is always the XOR of the two inputs."""

    x: tuple[int, int]
    target: int

    def __post_init__(self) -> None:
        if self.target != self.x[0] ^ self.x[1]:
            raise ValueError(f"target {self.target} is not XOR of {self.x}")


PATTERNS = (
    Sample(x=(0, 0), target=0),
    Sample(x=(0, 1), target=1),
    Sample(x=(1, 0), target=1),
    Sample(x=(1, 1), target=0),
)


class Presentation(enum.Enum):
    """Input ordering: i.i.d. uniform draws or deterministic cycling."""

    UNIFORM = "uniform"
    CYCLIC = "cyclic"


def sample_input(rng: np.random.Generator) -> Sample:
    """Draw one of the four input patterns uniformly at random."""
    bits = rng.integers(0, 2, size=2)
    x0, x1 = int(bits[0]), int(bits[1])
    return Sample(x=(x0, x1), target=x0 ^ x1)


def reward(y: int, target: int) -> int:
    """1 if the emitted bit matches the target, else 0."""
    return 1 if y == target else 0


class InputSchedule:
    """Supplies samples per the configured presentation mode.

    UNIFORM draws i.i.d. from the rng; CYCLIC walks the four patterns in
    truth-table order and never consumes random numbers.
    """

    def __init__(self, mode: Presentation = Presentation.UNIFORM):
        self.mode = mode
        self._index = 0

    def next(self, rng: np.random.Generator) -> Sample:
        if self.mode is Presentation.CYCLIC:
            sample = PATTERNS[self._index % len(PATTERNS)]
            self._index += 1
            return sample
        return sample_input(rng)
