"""Online greedy: accept an arriving box iff it misses every accepted box."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import DimensionMismatch
from .structures import make_checker


@dataclass
class GreedyState:
    dim: int
    checker: object = None
    decisions: list = field(default_factory=list)

    def __post_init__(self):
        if self.checker is None:
            self.checker = make_checker("naive", self.dim)
        elif isinstance(self.checker, str):
            self.checker = make_checker(self.checker, self.dim)

    @property
    def accepted(self) -> list:
        return self.checker.accepted


def greedy_step(state: GreedyState, h) -> bool:
    if len(h[0]) != state.dim:
        raise DimensionMismatch(f"{len(h[0])}-box offered to {state.dim}-dimensional greedy")
    ok = state.checker.independence_update(h)
    state.decisions.append(ok)
    return ok


def greedy_run(seq: Iterable, checker="naive", dim: int | None = None) -> list:
    """Run greedy over ``seq`` in order and return the accepted boxes.

    ``checker`` is a backend name understood by :func:`make_checker` or a
    ready checker instance.
    """
    seq = list(seq)
    if not seq:
        return []
    d = dim if dim is not None else len(seq[0][0])
    if isinstance(checker, str):
        checker = make_checker(checker, d)
    update = checker.independence_update
    for h in seq:
        if len(h[0]) != d:
            raise DimensionMismatch("mixed dimensions in greedy input")
        update(h)
    return list(checker.accepted)


def greedy_decisions(seq: Iterable, checker="naive", dim: int | None = None) -> list:
    """Accept/reject flag for every element of ``seq``."""
    seq = list(seq)
    if not seq:
        return []
    d = dim if dim is not None else len(seq[0][0])
    if isinstance(checker, str):
        checker = make_checker(checker, d)
    return [checker.independence_update(h) for h in seq]
