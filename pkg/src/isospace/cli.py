"""Command-line front end: ``isospace list|analyze|table|curve|measure|verify``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import catalog
from .errors import BadParams, DegenerateMarginal, IsospaceError, SingularFisher, UnknownFamily, UnknownGame
from .gamemodel import IDENTITY, GameDefinition, SpaceSpec, combine, expected_payoff, parse_spec
from .infomeasures import conditional_entropy, correlation, entropy, fisher_information, mutual_information
from .probspace import CorrelationFix, ProbabilitySpace, joint_distribution, resolve
from .report import (FORMATS, curve_csv, fmt_number, fmt_pair, fmt_point, render_table, result_json)
from .serialize import dumps, game_to_json, load_game
from .solver import (constrained_equilibrium, comparison_table, entropy_argmax_under_rho,
                     monte_carlo_verify, reduce_table, rho_sweep)

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4
VERIFY_Z_LIMIT = 5.0
DEFAULT_SEED = 42


class UsageError(Exception):
    """Bad names or arguments detected after argparse succeeded."""


# names, presets and specs ----------------------------------------------------

def _game_params(args) -> dict[str, int]:
    out = {}
    if getattr(args, "N", None) is not None:
        out["N"] = args.N
    if getattr(args, "M", None) is not None:
        out["M"] = args.M
    return out


def load_named_game(name: str, params: dict[str, int]) -> GameDefinition:
    """A catalog game, or a JSON game document when ``name`` is a file path."""
    if name.endswith(".json") or Path(name).is_file():
        if params:
            raise UsageError("game parameters do not apply to a game file")
        try:
            return load_game(name)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot load game file {name}: {exc}") from None
    try:
        return catalog.get_game(name, **params)
    except (UnknownGame, BadParams) as exc:
        raise UsageError(str(exc)) from None


def _presets(game: GameDefinition) -> dict[str, SpaceSpec]:
    """Family specs addressable as ``PLAYER=LABEL`` (e.g. ``X=MKV``)."""
    base = game.name.split("|")[0]
    out: dict[str, SpaceSpec] = {}
    for family in catalog.FAMILIES.get(base, ()):
        try:
            fam = catalog.get_space_family(family, game)
        except (UnknownFamily, IsospaceError, ValueError):
            continue
        for spec in list(fam.rows) + list(fam.cols):
            out.setdefault(spec.label, spec)
    return out


def build_spec(game: GameDefinition, text: str | None) -> SpaceSpec:
    if text is None:
        return IDENTITY
    presets = None
    parts: list[SpaceSpec] = []
    plain: list[str] = []
    for item in (s.strip() for s in text.split(",")):
        lhs, _, rhs = item.partition("=")
        if lhs.strip() in game.players and rhs:
            presets = presets if presets is not None else _presets(game)
            label = f"{lhs.strip()}:{rhs.strip()}"
            if label not in presets:
                known = sorted(k for k in presets if k.startswith(lhs.strip() + ":"))
                raise UsageError(f"unknown preset {label!r}; known: {known}")
            parts.append(presets[label])
        elif item:
            plain.append(item)
    if plain:
        try:
            parts.append(parse_spec(game, ",".join(plain)))
        except (ValueError, IsospaceError) as exc:
            raise UsageError(f"bad spec {text!r}: {exc}") from None
    if not parts:
        return IDENTITY
    return parts[0] if len(parts) == 1 else combine(*parts)


def _parse_point(text: str | None, names: Sequence[str]) -> dict[str, object] | None:
    if text is None:
        return None
    point: dict[str, object] = {}
    items = [s.strip() for s in text.split(",") if s.strip()]
    for i, item in enumerate(items):
        if "=" in item:
            k, v = (s.strip() for s in item.split("=", 1))
        else:
            if i >= len(names):
                raise UsageError(f"too many values for {list(names)}")
            k, v = names[i], item
        try:
            point[k] = Fraction(v)
        except ValueError:
            raise UsageError(f"bad number {v!r}") from None
    return point


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# commands ----------------------------------------------------------------------

def cmd_list(args) -> int:
    if args.json:
        game = load_named_game(args.json, _game_params(args))
        _emit(dumps(game_to_json(game)) + "\n", args.output)
        return EXIT_OK
    lines = ["games:"]
    for name, description, families in catalog.catalog_entries():
        fam = f" [families: {', '.join(families)}]" if families else ""
        lines.append(f"  {name:16s} {description}{fam}")
    lines.append("spaces:")
    for name in catalog.SPACES:
        space = catalog.get_space(name)
        lines.append(f"  {name:16s} params {', '.join(p.name for p in space.params)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def analyze_report(game: GameDefinition, spec: SpaceSpec, grid: int | None = None) -> dict:
    result = constrained_equilibrium(game, spec, grid)
    report = {"game": game.name, "spec": spec.label, "constraints": spec.describe()}
    if not any(isinstance(c, CorrelationFix) for c in spec.constraints):
        resolved = game.resolve(spec)
        report["dimension"] = resolved.dimension
        report["free_params"] = list(resolved.free_params)
        report["expected_payoffs"] = {p: str(v) for p, v in expected_payoff(game, spec).items()}
    report["equilibrium"] = result_json(result)
    report["payoffs"] = fmt_pair(result.payoff_tuple(game.players))
    return report


def cmd_analyze(args) -> int:
    game = load_named_game(args.game, _game_params(args))
    spec = build_spec(game, args.spec)
    report = analyze_report(game, spec, args.grid)
    if args.format == "json":
        _emit(json.dumps(report, indent=2, ensure_ascii=False) + "\n", args.output)
        return EXIT_OK
    eq = report["equilibrium"]
    lines = [f"game: {game.name}", f"spec: {spec.label} ({report['constraints']})"]
    if "dimension" in report:
        lines.append(f"dimension: {report['dimension']} ({', '.join(report['free_params']) or 'none'})")
        for p, poly in report["expected_payoffs"].items():
            lines.append(f"<Pi^{p}> = {poly}")
    point = {k: Fraction(v) if isinstance(v, str) else v for k, v in eq["point"].items()}
    lines.append(f"equilibrium ({eq['kind']}, {eq['method']}): {fmt_point(point)}")
    lines.append(f"payoffs ({', '.join(game.players)}): {report['payoffs']}")
    for alt in eq["alternatives"]:
        lines.append("alternative payoffs: " + fmt_pair([Fraction(alt[p]) for p in game.players]))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_table(args) -> int:
    game = load_named_game(args.game, _game_params(args))
    try:
        fam = catalog.get_space_family(args.family, game)
    except UnknownFamily as exc:
        raise UsageError(str(exc)) from None
    table = comparison_table(game, fam.rows, fam.cols, row_player=fam.row_player, grid=args.grid)
    if args.reduce:
        table = reduce_table(table)
    _emit(render_table(table, args.format), args.output)
    return EXIT_OK


def _rhos(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1:
        raise UsageError("--steps must be at least 1")
    if not (-1 <= start <= 1 and -1 <= stop <= 1):
        raise UsageError("correlations must lie in [-1, 1]")
    if steps == 1:
        return [start]
    return [float(round(v, 12)) for v in np.linspace(start, stop, steps)]


def cmd_curve(args) -> int:
    rhos = _rhos(args.start, args.stop, args.steps)
    header = ("rho", "p", "q", "r", "value")
    if args.kind == "rho-sweep":
        game = load_named_game(args.game, _game_params(args))
        rows = [(o.rho, *o.point, o.value) for o in rho_sweep(game, rhos, args.grid)]
    else:
        rows = [(o.rho, *o.point, o.value) for o in (entropy_argmax_under_rho(r, args.grid) for r in rhos)]
    _emit(curve_csv(header, rows), args.output)
    if args.plot:
        plot_curve(rows, args.kind, args.plot)
    return EXIT_OK


def plot_curve(rows, kind: str, path: str) -> None:
    """Write a PNG of value against rho; needs the optional matplotlib extra."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise UsageError("--plot needs matplotlib (pip install 'artifact[plot]')") from None
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r[0] for r in rows], [r[-1] for r in rows], marker="o")
    ax.set_xlabel("rho")
    ax.set_ylabel("maximum entropy" if kind == "entropy-max" else "optimal payoff")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _real(v: float) -> str:
    return f"{float(v) + 0.0:.10g}"


def _measure_space(name: str, params: dict[str, int]) -> tuple[ProbabilitySpace, GameDefinition | None]:
    if name in catalog.SPACES:
        return catalog.get_space(name), None
    game = load_named_game(name, params)
    return game.space, game


def cmd_measure(args) -> int:
    space, game = _measure_space(args.space, _game_params(args))
    if game is not None:
        spec = build_spec(game, args.spec)
        constraints = spec.constraints
    else:
        constraints = _space_constraints(space, args.spec)
    resolved = resolve(space, constraints)
    point = _parse_point(args.point, resolved.free_params)
    if point is None:
        point = {n: Fraction(1, 2) for n in resolved.free_params}
    try:
        dist = joint_distribution(resolved, point)
    except IsospaceError as exc:
        raise UsageError(str(exc)) from None
    lines = [f"space: {space.name}", f"constraints: {SpaceSpec('', constraints).describe()}",
             f"dimension: {resolved.dimension} ({', '.join(resolved.free_params) or 'none'})",
             f"point: {fmt_point(point)}",
             f"entropy: {_real(entropy(dist))}"]
    visible = list(space.visible)
    footnote = False
    if len(visible) == 2:
        x, y = visible
        lines.append(f"H({x}): {_real(entropy(dist.marginal(x)))}")
        lines.append(f"H({y}): {_real(entropy(dist.marginal(y)))}")
        lines.append(f"H({x}|{y}): {_real(conditional_entropy(dist, x, y))}")
        lines.append(f"I({x};{y}): {_real(mutual_information(dist, x, y))}")
        try:
            lines.append(f"rho({x},{y}): {_real(correlation(dist, x, y))}")
        except DegenerateMarginal:
            lines.append(f"rho({x},{y}): 0 (*)")
            footnote = True
    try:
        fisher = fisher_information(resolved, point)
        lines.append("fisher information:")
        for name, row in zip(fisher.params, fisher.entries):
            lines.append(f"  {name}: [" + ", ".join(fmt_number(v) for v in row) + "]")
    except SingularFisher as exc:
        lines.append(f"fisher information: undefined ({exc})")
    if footnote:
        lines.append("(*) a marginal is degenerate; the correlation is 0 by convention")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _space_constraints(space: ProbabilitySpace, text: str | None):
    if not text:
        return ()
    stub = GameDefinition(space.name, tuple(sorted({m.owner for m in space.moves if m.owner})),
                          space, {})
    try:
        return parse_spec(stub, text).constraints
    except (ValueError, IsospaceError) as exc:
        raise UsageError(f"bad spec {text!r}: {exc}") from None


def cmd_verify(args) -> int:
    game = load_named_game(args.game, _game_params(args))
    spec = build_spec(game, args.spec)
    resolved = game.resolve(spec)
    point = _parse_point(args.point, resolved.free_params)
    stats = monte_carlo_verify(game, spec, point, n=args.n, seed=args.seed)
    lines = [f"game: {game.name}", f"spec: {spec.label}", f"samples: {args.n} (seed {args.seed})"]
    worst = 0.0
    for player, s in stats.items():
        worst = max(worst, abs(s.z))
        lines.append(f"{player}: mean {s.mean:.6f} +/- {s.stderr:.6f}, analytic {fmt_number(s.analytic)}, z {s.z:+.3f}")
    ok = worst <= VERIFY_Z_LIMIT
    lines.append("verification " + ("passed" if ok else f"FAILED (|z| > {VERIFY_Z_LIMIT:g})"))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_VERIFY


# parser ----------------------------------------------------------------------

def _add_game_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("-N", type=int, help="number of stages (ipd)")
    p.add_argument("-M", type=int, help="largest offer (ultimatum)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isospace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalog games and spaces")
    p.add_argument("--json", metavar="GAME", help="print one game as a JSON document")
    _add_game_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("analyze", help="resolve a space and solve for its equilibrium")
    p.add_argument("game", help="catalog name or path to a JSON game document")
    p.add_argument("--spec", help="e.g. 'q=1', 'y=copy:x', 'rho=0.5' or presets like 'X=MKV,Y=IND'")
    _add_game_params(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--grid", type=int, help="grid points per axis for numeric searches")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="comparison table over a space family")
    p.add_argument("game")
    p.add_argument("--family", required=True)
    _add_game_params(p)
    p.add_argument("--format", choices=FORMATS, default="md")
    p.add_argument("--reduce", action="store_true", help="collapse duplicate rows and columns")
    p.add_argument("--grid", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("curve", help="optimum against a fixed correlation, as CSV")
    p.add_argument("kind", choices=("entropy-max", "rho-sweep"))
    p.add_argument("--game", default="dtree")
    p.add_argument("--from", dest="start", type=float, default=-1.0)
    p.add_argument("--to", dest="stop", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--grid", type=int)
    p.add_argument("--plot", metavar="PATH", help="also write a PNG (needs matplotlib)")
    _add_game_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("measure", help="information measures at a point of a space")
    p.add_argument("space", help="catalog space or game")
    p.add_argument("--spec")
    p.add_argument("--point", help="values in free-parameter order or name=value pairs")
    _add_game_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", help="Monte Carlo check of expected payoffs")
    p.add_argument("game")
    p.add_argument("--spec")
    p.add_argument("--point")
    p.add_argument("-n", "--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_game_params(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        parser.error("-n must be at least 1")
    if getattr(args, "seed", 0) < 0:
        parser.error("--seed must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isospace: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IsospaceError, ValueError, ZeroDivisionError) as exc:
        print(f"isospace: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
