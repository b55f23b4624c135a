"""File formats: curve tables, bound reports, games, traces, certificates, SVG."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any

from .bounds import BoundReport, CurveTable, UtilityRule, WelfareCurve
from .games import DynamicsTrace, EquilibriumCheck, GameError, ResourceGame
from .rational import approx, fmt, to_fraction


class FormatError(GameError):
    """Invalid input file; the message starts with the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def exact(q: Fraction | None) -> dict | None:
    if q is None:
        return None
    return {"exact": fmt(q), "approx": approx(q)}


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Curves and reports


def curve_csv(table: CurveTable, decimal: bool = False) -> str:
    show = approx if decimal else fmt
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "spoa", "design_spoa"])
    for row in table.rows:
        design = "" if row.design_spoa is None else show(row.design_spoa)
        writer.writerow([row.k, show(row.spoa), design])
    return buf.getvalue()


def curve_json(table: CurveTable) -> str:
    return _dumps({
        "n": table.n,
        "welfare": [fmt(v) for v in table.welfare],
        "rows": [
            {"k": r.k, "spoa": exact(r.spoa), "design_spoa": exact(r.design_spoa)}
            for r in table.rows
        ],
    })


def bound_json(report: BoundReport) -> str:
    data: dict[str, Any] = {
        "mode": report.mode,
        "n": report.n,
        "k": report.k,
        "welfare": [fmt(v) for v in report.welfare],
        "lp_value": exact(report.primal_value),
        "spoa": exact(report.spoa),
        "upper_bound": report.is_upper_bound,
        "iterations": report.iterations,
    }
    if report.theta is not None:
        data["theta"] = [
            {"label": [lab.e, lab.x, lab.o], "mass": fmt(v)}
            for lab, v in sorted(report.theta.support().items())
        ]
    if report.utility_rules:
        data["mu"] = fmt(report.mu)
        data["utility_rules"] = {
            str(zeta): [fmt(v) for v in rule] for zeta, rule in enumerate(report.utility_rules, 1)
        }
    return _dumps(data)


# ---------------------------------------------------------------------------
# Games


def game_to_dict(game: ResourceGame) -> dict:
    data = {
        "resources": [{"id": r.id, "value": fmt(r.value)} for r in game.resources],
        "players": [
            {"actions": [game.action_ids(p, q) for q in range(len(acts))]}
            for p, acts in enumerate(game.actions)
        ],
        "welfare": [fmt(v) for v in game.welfare_curve],
    }
    if game.utility_rule is not None:
        data["utility"] = [fmt(v) for v in game.utility_rule]
    return data


def dump_game(game: ResourceGame) -> str:
    return _dumps(game_to_dict(game))


def _rational(value, path: str) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise FormatError(path, f"expected a decimal or p/q string, got {value!r}")
    try:
        return to_fraction(value)
    except (ValueError, TypeError) as exc:
        raise FormatError(path, str(exc)) from None


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise FormatError(path, f"expected a list, got {type(value).__name__}")
    return value


def game_from_dict(data) -> ResourceGame:
    """Validate ``data`` field by field, failing on the first problem found."""
    if not isinstance(data, dict):
        raise FormatError("$", "expected an object")
    for key in ("resources", "players", "welfare"):
        if key not in data:
            raise FormatError("$", f"missing key {key!r}")
    extra = set(data) - {"resources", "players", "welfare", "utility"}
    if extra:
        raise FormatError("$", f"unexpected key {sorted(extra)[0]!r}")

    resources, seen = [], set()
    for i, item in enumerate(_list(data["resources"], "$.resources")):
        path = f"$.resources[{i}]"
        if not isinstance(item, dict) or set(item) != {"id", "value"}:
            raise FormatError(path, "expected an object with keys 'id' and 'value'")
        rid = item["id"]
        if not isinstance(rid, str) or not rid:
            raise FormatError(f"{path}.id", "expected a non-empty string")
        if rid in seen:
            raise FormatError(f"{path}.id", f"duplicate resource id {rid!r}")
        seen.add(rid)
        value = _rational(item["value"], f"{path}.value")
        if value < 0:
            raise FormatError(f"{path}.value", "resource values must be nonnegative")
        resources.append((rid, value))

    players = []
    for p, item in enumerate(_list(data["players"], "$.players")):
        path = f"$.players[{p}]"
        if not isinstance(item, dict) or set(item) != {"actions"}:
            raise FormatError(path, "expected an object with key 'actions'")
        acts = _list(item["actions"], f"{path}.actions")
        if not acts:
            raise FormatError(f"{path}.actions", "a player needs at least one action")
        for q, act in enumerate(acts):
            for j, rid in enumerate(_list(act, f"{path}.actions[{q}]")):
                if not isinstance(rid, str) or rid not in seen:
                    raise FormatError(f"{path}.actions[{q}][{j}]", f"unknown resource {rid!r}")
        players.append(acts)
    if not players:
        raise FormatError("$.players", "a game needs at least one player")

    n = len(players)
    curves = {}
    for key, cls in (("welfare", WelfareCurve), ("utility", UtilityRule)):
        if key not in data:
            continue
        values = [_rational(v, f"$.{key}[{j}]") for j, v in enumerate(_list(data[key], f"$.{key}"))]
        if len(values) != n + 1:
            raise FormatError(f"$.{key}", f"expected {n + 1} values for {n} players, got {len(values)}")
        try:
            curves[key] = cls(values)
        except ValueError as exc:
            raise FormatError(f"$.{key}", str(exc)) from None
    return ResourceGame(resources, players, curves["welfare"], curves.get("utility"))


def load_game(text: str) -> ResourceGame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("$", f"invalid JSON: {exc}") from None
    return game_from_dict(data)


def parse_action(text: str, game: ResourceGame) -> tuple[int, ...]:
    """A joint action as comma-separated indices, e.g. ``0,1,0``."""
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise GameError(f"joint action must be comma-separated integers, got {text!r}") from None
    return game.check_action(values)


# ---------------------------------------------------------------------------
# Traces, verdicts and certificates


def trace_json(game: ResourceGame, trace: DynamicsTrace) -> str:
    return _dumps({
        "mode": trace.mode,
        "k": trace.k,
        "seed": trace.seed,
        "initial": list(trace.initial),
        "final": list(trace.final),
        "initial_welfare": fmt(game.welfare(trace.initial)),
        "final_welfare": fmt(game.welfare(trace.final)),
        "rounds": trace.rounds,
        "samples": trace.samples,
        "steps": [
            {
                "coalition": list(s.coalition),
                "old_objective": fmt(s.old_value),
                "new_objective": fmt(s.new_value),
                "action": list(s.action),
            }
            for s in trace.steps
        ],
    })


def verdict_json(check: EquilibriumCheck, action, k: int) -> str:
    data: dict[str, Any] = {"action": list(action), "k": k, "is_k_strong_ne": check.is_equilibrium}
    if not check.is_equilibrium:
        data["witness"] = {
            "coalition": list(check.coalition),
            "block": list(check.block),
            "gain": fmt(check.gain),
        }
    return _dumps(data)


def certificate_dict(cert) -> dict:
    return {
        "n": cert.n,
        "k": cert.k,
        "lp_value": fmt(cert.lp_value),
        "spoa": fmt(1 / cert.lp_value),
        "constructed_ratio": fmt(cert.constructed_ratio),
        "ne_welfare": fmt(cert.ne_welfare),
        "opt_welfare": fmt(cert.opt_welfare),
        "tight": cert.tight,
        "equilibrium_verified": cert.equilibrium_verified,
        "resources": cert.resource_count,
    }


def certificate_json(cert) -> str:
    return _dumps(certificate_dict(cert))


# ---------------------------------------------------------------------------
# SVG


def curve_svg(table: CurveTable, width: int = 640, height: int = 420) -> str:
    """A static line chart of SPoA against k, one polyline per mode."""
    left, right, top, bottom = 60, 170, 20, 50
    pw, ph = width - left - right, height - top - bottom
    ks = [r.k for r in table.rows]
    kmin, kmax = min(ks), max(ks)
    series = [("welfare sharing", "#2a9d4b", [r.spoa for r in table.rows])]
    if table.has_design:
        series.append(("optimal design", "#1f5fbf", [r.design_spoa for r in table.rows]))
    lo = min(min(float(v) for v in vals) for _, _, vals in series)
    ymin = min(0.5, lo)
    ymin = int(ymin * 10) / 10
    ymax = 1.0

    def px(k: int) -> float:
        return left + (pw * (k - kmin) / (kmax - kmin) if kmax > kmin else pw / 2)

    def py(v: float) -> float:
        return top + ph * (ymax - v) / (ymax - ymin) if ymax > ymin else top

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    ticks = 5
    for i in range(ticks + 1):
        v = ymin + (ymax - ymin) * i / ticks
        y = py(v)
        out.append(f'<line x1="{left - 4}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.1f}" text-anchor="end">{v:.2f}</text>')
    for k in ks:
        x = px(k)
        out.append(f'<line x1="{x:.1f}" y1="{top + ph}" x2="{x:.1f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{top + ph + 18}" text-anchor="middle">{k}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">k</text>')
    out.append(f'<text x="15" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 15 {top + ph / 2:.1f})">SPoA (n={table.n})</text>')
    for i, (name, color, vals) in enumerate(series):
        pts = " ".join(f"{px(k):.1f},{py(float(v)):.1f}" for k, v in zip(ks, vals))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 20 + 20 * i
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
