"""Exact integer combinatorics for the (e, x, o) label parameterization.

Labels are ordered lexicographically by ``(e, x, o)`` so that label vectors
computed on different runs line up entry by entry.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple


class Label(NamedTuple):
    """Per-resource usage counts.

    ``e`` players use the resource only in their equilibrium action, ``x`` in
    both actions and ``o`` only in their optimal action.
    """

    e: int
    x: int
    o: int

    @property
    def total(self) -> int:
        return self.e + self.x + self.o

    @property
    def ne_load(self) -> int:
        return self.e + self.x

    @property
    def opt_load(self) -> int:
        return self.o + self.x

    def __str__(self) -> str:
        return f"({self.e},{self.x},{self.o})"


def falling_factorial(x: int, y: int) -> int:
    """``x!/(x-y)!`` for ``x >= y >= 0`` and zero when ``y > x``."""
    if x < 0 or y < 0:
        raise ValueError(f"falling_factorial needs nonnegative arguments, got ({x}, {y})")
    if y > x:
        return 0
    return math.perm(x, y)


class IndexSet:
    """All labels with ``1 <= e + x + o <= n`` in lexicographic order."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"index set needs n >= 1, got {n}")
        self.n = n
        self.labels: tuple[Label, ...] = tuple(
            Label(e, x, o)
            for e in range(n + 1)
            for x in range(n + 1 - e)
            for o in range(n + 1 - e - x)
            if e + x + o >= 1
        )
        self._position = {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i: int) -> Label:
        return self.labels[i]

    def __contains__(self, label) -> bool:
        return tuple(label) in self._position

    def position(self, label) -> int:
        return self._position[Label(*label)]

    def __repr__(self) -> str:
        return f"IndexSet(n={self.n}, size={len(self)})"


@lru_cache(maxsize=64)
def index_set(n: int) -> IndexSet:
    return IndexSet(n)


def index_set_size(n: int) -> int:
    return math.comb(n + 3, 3) - 1


def coalition_coefficient(label, zeta: int, n: int, alpha: int, beta: int) -> int:
    """Number of ordered ``zeta``-player coalitions that, on one resource with
    this label, contain ``alpha`` type-e and ``beta`` type-o members.

    Such a coalition moves the resource's load from ``e + x`` to
    ``e + x + beta - alpha`` when all members switch to their optimal action.
    """
    e, x, o = label
    if min(e, x, o) < 0 or e + x + o > n:
        raise ValueError(f"label {tuple(label)} is not valid for n={n}")
    if not 1 <= zeta <= n:
        raise ValueError(f"coalition size {zeta} outside [1, {n}]")
    if not (0 <= alpha <= zeta and 0 <= beta <= zeta - alpha):
        raise ValueError(f"need 0 <= alpha <= zeta and 0 <= beta <= zeta - alpha, got ({alpha}, {beta})")
    return _coefficient(e, o, zeta, n, alpha, beta)


@lru_cache(maxsize=None)
def _coefficient(e: int, o: int, zeta: int, n: int, alpha: int, beta: int) -> int:
    return (
        math.comb(zeta, alpha)
        * math.comb(zeta - alpha, beta)
        * falling_factorial(e, alpha)
        * falling_factorial(o, beta)
        * falling_factorial(n - e - o, zeta - alpha - beta)
    )


def deviation_terms(label, zeta: int, n: int) -> list[tuple[int, int]]:
    """Nonzero ``(load_after_deviation, count)`` pairs for one label.

    Zero-count terms are dropped before the load is formed, so the returned
    loads always lie in ``[0, n]``.
    """
    e, x, o = label
    terms = []
    for alpha in range(zeta + 1):
        for beta in range(zeta - alpha + 1):
            c = _coefficient(e, o, zeta, n, alpha, beta)
            if c:
                terms.append((e + x + beta - alpha, c))
    return terms
