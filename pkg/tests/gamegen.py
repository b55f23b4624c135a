"""Random small games for property tests and the oracle suite."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from spoa.bounds import WelfareCurve
from spoa.games import ResourceGame


def random_welfare(rng: random.Random, n: int) -> WelfareCurve:
    if rng.random() < 0.5:
        return WelfareCurve.indicator(n)
    return WelfareCurve([0] + [Fraction(rng.randint(1, 12), rng.randint(1, 6)) for _ in range(n)])


def random_game(rng: random.Random, max_players: int = 3, max_resources: int = 4,
                max_actions: int = 2) -> ResourceGame:
    n = rng.randint(1, max_players)
    m = rng.randint(1, max_resources)
    ids = [f"r{i}" for i in range(m)]
    resources = [(rid, Fraction(rng.randint(0, 9), rng.randint(1, 4))) for rid in ids]
    players = []
    for _ in range(n):
        acts = []
        for _ in range(rng.randint(1, max_actions)):
            acts.append([rid for rid in ids if rng.random() < 0.5])
        players.append(acts)
    return ResourceGame(resources, players, random_welfare(rng, n))


@st.composite
def games(draw, max_players: int = 3, max_resources: int = 4, max_actions: int = 2):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_game(random.Random(seed), max_players, max_resources, max_actions)
