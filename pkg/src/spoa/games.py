"""Finite resource allocation games and brute-force equilibrium tools.

A joint action is a tuple holding one action index per player.  Agents
maximize the *objective* ``U(a) = sum_r v_r u(|a|_r)``, which is the welfare
``W`` itself unless the game carries a separate utility rule.  Equilibrium
membership is always judged on ``U``; price-of-anarchy ratios on ``W``.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .bounds import LabelVector, UtilityRule, WelfareCurve, deviation_value
from .combinatorics import Label
from .rational import to_fraction

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 10**7
DEFAULT_PERMUTATION_CAP = 10**6

JointAction = tuple[int, ...]


class GameError(ValueError):
    pass


class InstanceTooLarge(GameError):
    """A brute-force or construction size guard tripped."""


def _cap(value: int | None, default: int) -> int:
    if value is not None:
        return value
    env = os.environ.get("SPOA_BRUTE_CAP")
    return int(env) if env else default


@dataclass(frozen=True)
class Resource:
    id: str
    value: Fraction


class ResourceGame:
    """Players pick one of their actions; each action is a set of resources."""

    def __init__(self, resources: Iterable, players: Sequence[Sequence[Iterable[str]]],
                 welfare: WelfareCurve, utility: UtilityRule | None = None):
        self.resources: tuple[Resource, ...] = tuple(
            r if isinstance(r, Resource) else Resource(str(r[0]), to_fraction(r[1])) for r in resources
        )
        index = {}
        for i, r in enumerate(self.resources):
            if r.id in index:
                raise GameError(f"duplicate resource id {r.id!r}")
            if r.value < 0:
                raise GameError(f"resource {r.id!r} has negative value {r.value}")
            index[r.id] = i
        self._index = index

        actions = []
        for p, acts in enumerate(players):
            acts = list(acts)
            if not acts:
                raise GameError(f"player {p} has no actions")
            parsed = []
            for q, act in enumerate(acts):
                ids = list(act)
                missing = [rid for rid in ids if rid not in index]
                if missing:
                    raise GameError(f"player {p} action {q} uses unknown resource {missing[0]!r}")
                parsed.append(tuple(sorted({index[rid] for rid in ids})))
            actions.append(tuple(parsed))
        if not actions:
            raise GameError("a game needs at least one player")
        self.actions: tuple[tuple[tuple[int, ...], ...], ...] = tuple(actions)

        if welfare.n != self.n:
            raise GameError(f"welfare curve covers 0..{welfare.n} but the game has {self.n} players")
        if utility is not None and utility.n != self.n:
            raise GameError(f"utility rule covers 0..{utility.n} but the game has {self.n} players")
        self.welfare_curve = welfare
        self.utility_rule = utility

    @property
    def n(self) -> int:
        return len(self.actions)

    @property
    def num_resources(self) -> int:
        return len(self.resources)

    def action_ids(self, player: int, action: int) -> list[str]:
        return [self.resources[r].id for r in self.actions[player][action]]

    def num_joint_actions(self) -> int:
        return math.prod(len(a) for a in self.actions)

    def joint_actions(self) -> Iterator[JointAction]:
        return itertools.product(*(range(len(a)) for a in self.actions))

    def check_action(self, a: Sequence[int]) -> JointAction:
        a = tuple(int(v) for v in a)
        if len(a) != self.n:
            raise GameError(f"joint action has {len(a)} entries for {self.n} players")
        for p, v in enumerate(a):
            if not 0 <= v < len(self.actions[p]):
                raise GameError(f"player {p} has no action {v}")
        return a

    def loads(self, a: JointAction) -> list[int]:
        counts = [0] * self.num_resources
        for p, v in enumerate(a):
            for r in self.actions[p][v]:
                counts[r] += 1
        return counts

    def _evaluate(self, a: JointAction, rule) -> Fraction:
        total = Fraction(0)
        for r, c in enumerate(self.loads(a)):
            if c:
                total += self.resources[r].value * rule(c)
        return total

    def welfare(self, a: JointAction) -> Fraction:
        return self._evaluate(a, self.welfare_curve)

    def objective(self, a: JointAction) -> Fraction:
        return self._evaluate(a, self.utility_rule or self.welfare_curve)

    def with_utility(self, utility: UtilityRule | None) -> "ResourceGame":
        players = [[self.action_ids(p, q) for q in range(len(acts))] for p, acts in enumerate(self.actions)]
        return ResourceGame(self.resources, players, self.welfare_curve, utility)

    def __repr__(self) -> str:
        return f"ResourceGame(players={self.n}, resources={self.num_resources})"


def welfare(game: ResourceGame, a: Sequence[int]) -> Fraction:
    return game.welfare(game.check_action(a))


def objective(game: ResourceGame, a: Sequence[int]) -> Fraction:
    return game.objective(game.check_action(a))


def coalitions(n: int, k: int) -> list[tuple[int, ...]]:
    """Every coalition of 1..k players, ordered by size then members."""
    if not 1 <= k <= n:
        raise GameError(f"coalition size k={k} outside [1, {n}]")
    return [c for size in range(1, k + 1) for c in itertools.combinations(range(n), size)]


def _replace(a: JointAction, coalition: Sequence[int], block: Sequence[int]) -> JointAction:
    out = list(a)
    for p, v in zip(coalition, block):
        out[p] = v
    return tuple(out)


def coalition_best_response(game: ResourceGame, a: Sequence[int], coalition: Sequence[int]) -> JointAction:
    """Replace the coalition's block by an objective-maximizing one.

    The current block is kept if it is already optimal; otherwise the first
    maximizer in lexicographic block order wins.
    """
    a = game.check_action(a)
    coalition = tuple(sorted(set(coalition)))
    if not coalition:
        raise GameError("coalition must be non-empty")
    if coalition[0] < 0 or coalition[-1] >= game.n:
        raise GameError(f"coalition {coalition} names a player outside 0..{game.n - 1}")
    current = game.objective(a)
    best_value, best = current, a
    for block in itertools.product(*(range(len(game.actions[p])) for p in coalition)):
        cand = _replace(a, coalition, block)
        val = game.objective(cand)
        if val > best_value:
            best_value, best = val, cand
    return best


@dataclass(frozen=True)
class EquilibriumCheck:
    is_equilibrium: bool
    coalition: tuple[int, ...] | None = None
    block: tuple[int, ...] | None = None
    gain: Fraction | None = None

    def __bool__(self) -> bool:
        return self.is_equilibrium


def is_k_strong_ne(game: ResourceGame, a: Sequence[int], k: int) -> EquilibriumCheck:
    """No coalition of at most ``k`` players can strictly raise the objective."""
    a = game.check_action(a)
    base = game.objective(a)
    for coalition in coalitions(game.n, k):
        current = tuple(a[p] for p in coalition)
        for block in itertools.product(*(range(len(game.actions[p])) for p in coalition)):
            if block == current:
                continue
            gain = game.objective(_replace(a, coalition, block)) - base
            if gain > 0:
                return EquilibriumCheck(False, coalition, block, gain)
    return EquilibriumCheck(True)


@dataclass(frozen=True)
class Step:
    coalition: tuple[int, ...]
    old_value: Fraction
    new_value: Fraction
    action: JointAction


@dataclass
class DynamicsTrace:
    initial: JointAction
    final: JointAction
    mode: str
    k: int
    steps: list[Step] = field(default_factory=list)
    seed: int | None = None
    rounds: int = 0
    samples: int = 0


def run_dynamics(game: ResourceGame, a0: Sequence[int], k: int, mode: str = "deterministic",
                 seed: int | None = None) -> DynamicsTrace:
    """Coalition best-response dynamics until a k-strong equilibrium.

    ``deterministic`` sweeps all coalitions in order and stops after a round
    without a revision.  ``asynchronous`` draws coalitions uniformly with a
    ``random.Random(seed)`` generator and checks for equilibrium every
    ``|C_[k]|`` draws.
    """
    a = game.check_action(a0)
    groups = coalitions(game.n, k)
    trace = DynamicsTrace(a, a, mode, k, seed=seed)

    def revise(coalition) -> bool:
        nonlocal a
        new = coalition_best_response(game, a, coalition)
        if new == a:
            return False
        trace.steps.append(Step(coalition, game.objective(a), game.objective(new), new))
        a = new
        return True

    if mode == "deterministic":
        while True:
            trace.rounds += 1
            changed = False
            for coalition in groups:
                changed |= revise(coalition)
            if not changed:
                break
    elif mode == "asynchronous":
        rng = random.Random(seed)
        while not is_k_strong_ne(game, a, k):
            for _ in range(len(groups)):
                revise(groups[rng.randrange(len(groups))])
                trace.samples += 1
    else:
        raise GameError(f"unknown dynamics mode {mode!r}")
    trace.final = a
    return trace


def optimum(game: ResourceGame, cap: int | None = None) -> tuple[Fraction, JointAction]:
    """Maximum welfare and the first joint action attaining it."""
    _guard_states(game, cap)
    best_val, best = None, None
    for a in game.joint_actions():
        val = game.welfare(a)
        if best_val is None or val > best_val:
            best_val, best = val, a
    return best_val, best


def _guard_states(game: ResourceGame, cap: int | None) -> None:
    limit = _cap(cap, DEFAULT_STATE_CAP)
    size = game.num_joint_actions()
    if size > limit:
        raise InstanceTooLarge(f"instance too large for brute force: {size} joint actions exceed cap {limit}")


def enumerate_ksne(game: ResourceGame, k: int, cap: int | None = None) -> list[JointAction]:
    """All k-strong equilibria of the objective, by exhaustive search."""
    _guard_states(game, cap)
    found = [a for a in game.joint_actions() if is_k_strong_ne(game, a, k)]
    if not found:
        raise GameError("no k-strong equilibrium found; objective evaluation is broken")
    return found


def brute_force_spoa(game: ResourceGame, k: int, cap: int | None = None) -> Fraction:
    """Worst equilibrium welfare over optimal welfare (1 when the optimum is 0)."""
    eq = enumerate_ksne(game, k, cap)
    best, _ = optimum(game, cap)
    if best == 0:
        return Fraction(1)
    return min(game.welfare(a) for a in eq) / best


def label_resources(game: ResourceGame, a_ne: Sequence[int], a_opt: Sequence[int]) -> LabelVector:
    """Aggregate resource values by their (e, x, o) usage label."""
    a_ne, a_opt = game.check_action(a_ne), game.check_action(a_opt)
    counts = [[0, 0, 0] for _ in range(game.num_resources)]
    for p in range(game.n):
        ne = set(game.actions[p][a_ne[p]])
        opt = set(game.actions[p][a_opt[p]])
        for r in ne - opt:
            counts[r][0] += 1
        for r in ne & opt:
            counts[r][1] += 1
        for r in opt - ne:
            counts[r][2] += 1
    mass: dict[Label, Fraction] = {}
    for r, (e, x, o) in enumerate(counts):
        if e + x + o:
            lab = Label(e, x, o)
            mass[lab] = mass.get(lab, Fraction(0)) + game.resources[r].value
    return LabelVector.from_mapping(game.n, mass)


def deviation_sum_oracle(game: ResourceGame, a_ne: Sequence[int], a_opt: Sequence[int], zeta: int,
                         cap: int | None = None) -> Fraction:
    """Sum of welfare over every ordered ``zeta``-player switch to ``a_opt``."""
    a_ne, a_opt = game.check_action(a_ne), game.check_action(a_opt)
    if not 1 <= zeta <= game.n:
        raise GameError(f"zeta={zeta} outside [1, {game.n}]")
    limit = _cap(cap, DEFAULT_PERMUTATION_CAP)
    count = math.perm(game.n, zeta)
    if count > limit:
        raise InstanceTooLarge(f"{count} ordered coalitions exceed cap {limit}")
    total = Fraction(0)
    for perm in itertools.permutations(range(game.n), zeta):
        total += game.welfare(_replace(a_ne, perm, [a_opt[p] for p in perm]))
    return total


def deviation_sum_from_labels(theta: LabelVector, zeta: int, w: WelfareCurve) -> Fraction:
    """The same sum computed from label masses and the coalition counts."""
    n = theta.n
    return sum((v * deviation_value(lab, zeta, n, w) for lab, v in zip(theta.index_set, theta.entries) if v),
               Fraction(0))


def ring_game(n: int, welfare: WelfareCurve | None = None) -> ResourceGame:
    """Player ``i`` covers ``r_i`` (action 0) or ``r_{i+1}`` and ``s_i`` (action 1).

    With indicator welfare, all-zeros is a Nash equilibrium at half the
    optimal welfare of all-ones.
    """
    if n < 2:
        raise GameError("the ring game needs at least two players")
    w = welfare or WelfareCurve.indicator(n)
    resources = [(f"r{i + 1}", 1) for i in range(n)] + [(f"s{i + 1}", 1) for i in range(n)]
    players = [[[f"r{i + 1}"], [f"r{(i + 1) % n + 1}", f"s{i + 1}"]] for i in range(n)]
    return ResourceGame(resources, players, w)

