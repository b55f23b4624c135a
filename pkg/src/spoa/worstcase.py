"""Ring instances that attain the primal bound.

For every label with positive mass, and every ordering of the players over
``n`` ring positions, one ring of ``n`` resources is built.  The player in
position ``p`` (0-based) covers offsets ``p .. p+e+x-1`` in its equilibrium
action and ``p+e .. p+e+x+o-1`` in its optimal action, all mod ``n``.  Every
resource in a ring carries that label's mass as its value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import LabelVector, WelfareCurve, build_primal, spoa_bound
from .games import GameError, InstanceTooLarge, ResourceGame, is_k_strong_ne, label_resources

MAX_RING_PLAYERS = 6
AUTO_VERIFY_PLAYERS = 3


class TightnessError(RuntimeError):
    """The constructed instance failed a check it must pass."""


@dataclass
class WorstCase:
    game: ResourceGame
    a_ne: tuple[int, ...]
    a_opt: tuple[int, ...]
    theta: LabelVector


def ring_resource_count(n: int, support_size: int) -> int:
    return n * math.factorial(n) * support_size


def construct_worst_case(n: int, w: WelfareCurve, k: int, theta: LabelVector,
                         check_feasible: bool = True) -> WorstCase:
    """Build the ring game for ``theta``; action 0 is equilibrium, 1 optimal."""
    support = sorted(theta.support().items())
    if theta.n != n:
        raise GameError(f"label vector is for n={theta.n}, expected {n}")
    if n > MAX_RING_PLAYERS:
        count = ring_resource_count(n, max(len(support), 1))
        raise InstanceTooLarge(
            f"ring construction for n={n} needs {count} resources "
            f"({n} x {n}! x {len(support)} labels); limit is n <= {MAX_RING_PLAYERS}"
        )
    if check_feasible and not build_primal(n, w, k).is_feasible(theta.entries):
        raise GameError("label vector is not feasible for the primal program")

    resources = []
    ne_sets = [[] for _ in range(n)]
    opt_sets = [[] for _ in range(n)]
    for (e, x, o), mass in support:
        tag = f"{e}.{x}.{o}"
        for ring, order in enumerate(itertools.permutations(range(n))):
            ids = [f"r{tag}:{ring}:{q}" for q in range(n)]
            resources.extend((rid, mass) for rid in ids)
            for pos, player in enumerate(order):
                ne_sets[player].extend(ids[(pos + t) % n] for t in range(e + x))
                opt_sets[player].extend(ids[(pos + e + t) % n] for t in range(x + o))
    players = [[ne_sets[p], opt_sets[p]] for p in range(n)]
    game = ResourceGame(resources, players, w)
    return WorstCase(game, (0,) * n, (1,) * n, theta)


@dataclass
class Certificate:
    n: int
    k: int
    lp_value: Fraction
    constructed_ratio: Fraction
    equilibrium_verified: bool | None
    resource_count: int
    ne_welfare: Fraction
    opt_welfare: Fraction

    @property
    def tight(self) -> bool:
        return self.constructed_ratio * self.lp_value == 1


def certificate_for(game: ResourceGame, a_ne, a_opt, k: int, lp_value: Fraction,
                    verify_equilibrium: bool = True) -> Certificate:
    ne, opt = game.welfare(a_ne), game.welfare(a_opt)
    verified = None
    if verify_equilibrium:
        verified = bool(is_k_strong_ne(game, a_ne, k))
    return Certificate(game.n, k, lp_value, ne / opt, verified, game.num_resources, ne, opt)


def certify_tightness(n: int, w: WelfareCurve, k: int, verify_equilibrium: bool | None = None) -> tuple[Certificate, WorstCase]:
    """Solve the primal program, build its ring instance and check it.

    Raises :class:`TightnessError` if the welfare ratio differs from
    ``1/P*`` or the equilibrium action admits an improving coalition.
    Exhaustive equilibrium checking runs by default only for ``n <= 3``.
    """
    report = spoa_bound(n, w, k)
    case = construct_worst_case(n, w, k, report.theta)
    if verify_equilibrium is None:
        verify_equilibrium = n <= AUTO_VERIFY_PLAYERS
    cert = certificate_for(case.game, case.a_ne, case.a_opt, k, report.primal_value, verify_equilibrium)

    scale = n * math.factorial(n)
    expected_ne = scale * sum((v * w(lab.ne_load) for lab, v in report.theta.support().items()), Fraction(0))
    expected_opt = scale * sum((v * w(lab.opt_load) for lab, v in report.theta.support().items()), Fraction(0))
    if (cert.ne_welfare, cert.opt_welfare) != (expected_ne, expected_opt):
        raise TightnessError("constructed welfare differs from the label-mass formula")
    if not cert.tight:
        raise TightnessError(f"constructed ratio {cert.constructed_ratio} != 1/{report.primal_value}")
    if cert.equilibrium_verified is False:
        raise TightnessError("constructed equilibrium action admits an improving coalition")
    if label_resources(case.game, case.a_ne, case.a_opt) != report.theta.scaled(scale):
        raise TightnessError("relabelling the construction does not return n*n!*theta")
    return cert, case
