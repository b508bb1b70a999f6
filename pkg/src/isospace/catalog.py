"""Built-in games, probability spaces, space families and reference tables.

Reference tables carry a ``source`` tag naming the worked example they
reproduce.  Cells with several equilibria are stored as tuples of options.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import BadParams, UnknownFamily, UnknownGame
from .gamemodel import GameDefinition, SpaceSpec
from .numeric import numeric_box_maximize
from .polynomial import Polynomial
from .probspace import (
    CorrelationFix,
    DerivedVar,
    FunctionalAssignment,
    MoveVar,
    ParamFix,
    ProbabilitySpace,
    resolve,
    simplex_volume,
)

F = Fraction
P = Polynomial.parse


# ---------------------------------------------------------------------------
# probability spaces without payoffs
# ---------------------------------------------------------------------------

DIE_LABELS = "abcdefgh"


def die_space(faces: int) -> ProbabilitySpace:
    """One roll of an n-faced die; the last face's probability is eliminated."""
    if faces < 2:
        raise BadParams("a die needs at least two faces")
    domain = tuple(range(faces))
    labels = (((), tuple(DIE_LABELS[i] for i in domain)),)
    names = {2: "coin", 3: "triangle", 4: "square"}
    return ProbabilitySpace([MoveVar("face", domain, reference=faces - 1, labels=labels)],
                            name=names.get(faces, f"die{faces}"))


def square_xy_space() -> ProbabilitySpace:
    """Four-faced die read as two binary coordinates: face i -> (i >> 1, i & 1)."""
    die = die_space(4).variables[0]
    x = DerivedVar("x", ("face",), tuple(((i,), i >> 1) for i in range(4)))
    y = DerivedVar("y", ("face",), tuple(((i,), i & 1) for i in range(4)))
    return ProbabilitySpace([die, x, y], visible=("x", "y"), name="square-xy")


def behavioural_space() -> ProbabilitySpace:
    """p = P(x=1), q = P(y=1|x=0), r = P(y=1|x=1)."""
    return ProbabilitySpace([
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", owner="Y", stage=2, labels=(((0,), "q"), ((1,), "r"))),
    ], name="behavioural")


MIXED_PLANS = {0: (0, 0), 1: (0, 1), 2: (1, 0), 3: (1, 1)}  # plan -> (y if x=0, y if x=1)


def mixed_space() -> ProbabilitySpace:
    """a1 = P(x=1); plan weights b0..b3 over (always 0, copy, negate, always 1)."""
    table = tuple(((x, plan), MIXED_PLANS[plan][x]) for x in (0, 1) for plan in range(4))
    return ProbabilitySpace([
        MoveVar("x", owner="X", labels=(((), ("α0", "α1")),)),
        MoveVar("plan", (0, 1, 2, 3), owner="Y", labels=(((), ("β0", "β1", "β2", "β3")),)),
        DerivedVar("y", ("x", "plan"), table),
    ], visible=("x", "y"), name="mixed")


SPACES: dict[str, Callable[[], ProbabilitySpace]] = {
    "coin": lambda: die_space(2),
    "triangle": lambda: die_space(3),
    "square": lambda: die_space(4),
    "square-xy": square_xy_space,
    "behavioural": behavioural_space,
    "mixed": mixed_space,
}


def get_space(name: str) -> ProbabilitySpace:
    try:
        return SPACES[name]()
    except KeyError:
        raise UnknownGame(f"unknown space {name!r}; known: {sorted(SPACES)}") from None


# correlated constraint on the square-xy space: only (0,0) and (1,1) survive
SQUARE_CORRELATED = (ParamFix("b", 0), ParamFix("c", 0))


def dice_objective(faces: int):
    """Vectorized V^2 * entropy over the free face probabilities."""
    v2 = float(simplex_volume(faces)) ** 2

    def f(X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        probs = np.column_stack([X, 1 - X.sum(axis=1)])
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(probs > 0, probs * np.log(np.where(probs > 0, probs, 1)), 0.0)
        return -v2 * terms.sum(axis=1)

    def feasible(X):
        return np.atleast_2d(X).sum(axis=1) <= 1 + 1e-12

    return f, feasible


def dice_closed_form(faces: int) -> float:
    return math.log(faces) * float(simplex_volume(faces)) ** 2


@dataclass(frozen=True)
class DiceResult:
    space: str
    argmax: tuple[float, ...]
    value: float
    closed_form: float


def dice_choice(faces: Sequence[int] = (2, 3, 4)) -> tuple[list[DiceResult], str]:
    """Maximize V^2 E over each die and report the winner."""
    out = []
    for n in faces:
        f, ok = dice_objective(n)
        arg, val = numeric_box_maximize(f, [(0.0, 1.0)] * (n - 1), ok)
        out.append(DiceResult(die_space(n).name, arg, val, dice_closed_form(n)))
    best = max(out, key=lambda r: r.value)
    return out, best.space


# ---------------------------------------------------------------------------
# games
# ---------------------------------------------------------------------------


def _two_player(name, moves, px, py, description, pair=None, params=None, visible=None):
    space = ProbabilitySpace(moves, visible=visible, name=name)
    return GameDefinition(name, ("X", "Y"), space, {"X": P(px), "Y": P(py)}, description,
                          pair, dict(params or {}))


def twostage() -> GameDefinition:
    return _two_player("twostage", [
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", owner="Y", stage=2, labels=(((0,), "q"), ((1,), "r"))),
    ], "3-2*x-y+4*x*y", "1+3*x+y-2*x*y",
        "X moves, then Y responds having seen x", pair=("x", "y"))


def dtree() -> GameDefinition:
    space = ProbabilitySpace([
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", owner="X", stage=2, labels=(((0,), "q"), ((1,), "r"))),
    ], name="dtree")
    return GameDefinition("dtree", ("X",), space, {"X": P("2*x+3*y-4*x*y")},
                          "one chooser sets x then y", ("x", "y"))


def aumann27() -> GameDefinition:
    return _two_player("aumann27", [
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", owner="Y", labels=(((), "q"),)),
    ], "6+x-4*y-3*x*y", "6-4*x+y-3*x*y", "simultaneous 2x2 game with three Nash equilibria")


def aumann27_device() -> GameDefinition:
    third = F(1, 3)
    return _two_player("aumann27-device", [
        MoveVar("E", (0, 1, 2), owner=None, stage=0, chance=(third, third, third)),
        DerivedVar("u", ("E",), (((0,), 1), ((1,), 0), ((2,), 0))),
        DerivedVar("v", ("E",), (((0,), 0), ((1,), 0), ((2,), 1))),
        MoveVar("x", owner="X", stage=1, observes=("u",), labels=(((0,), "p0"), ((1,), "p1"))),
        MoveVar("y", owner="Y", stage=1, observes=("v",), labels=(((0,), "q0"), ((1,), "q1"))),
    ], "6+x-4*y-3*x*y", "6-4*x+y-3*x*y",
        "the same game with a public three-way lottery; X sees E=A, Y sees E=C")


def chainstore() -> GameDefinition:
    return _two_player("chainstore", [
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", owner="Y", stage=2, active_if=(("x", 1),), labels=(((1,), "q"),)),
    ], "x-2*x*y", "1-x-x*y", "entrant X enters (x=1); incumbent Y fights (y=1)")


def trust() -> GameDefinition:
    return _two_player("trust", [
        MoveVar("x", owner="X", labels=(((), "p"),)),
        MoveVar("y", (0, 1, 2, 3), owner="Y", stage=2, active_if=(("x", 1),),
                labels=(((1,), ("q", "r", "s", "t")),)),
    ], "1+2*x-x*y", "x*y", "X invests (x=1); Y keeps y of the proceeds")


def ultimatum(M: int = 10) -> GameDefinition:
    if not isinstance(M, int) or M < 2:
        raise BadParams("ultimatum needs an integer M >= 2")
    return _two_player("ultimatum", [
        MoveVar("x", tuple(range(1, M + 1)), owner="X"),
        MoveVar("y", owner="Y", stage=2),
    ], f"({M}-x)*y", "x*y", f"X offers x of {M}; Y accepts (y=1) or rejects", params={"M": M})


def publicgoods() -> GameDefinition:
    return _two_player("publicgoods", [
        MoveVar("x1", owner="X", labels=(((), "p1"),)),
        MoveVar("y1", owner="Y", labels=(((), "q1"),)),
        MoveVar("x2", owner="X", stage=2),
        MoveVar("y2", owner="Y", stage=2),
    ], "4-x1+3*y1-4*x2-8*y2", "4+3*x1-y1-8*x2-4*y2",
        "two simultaneous stages; stage-two moves see stage one")


CENTIPEDE_X = ("(1-x1)+x1*(y1*(3*(1-x2)+x2*(2*(1-y2)+y2*(5*(1-x3)+x3*(4*(1-y3)+6*y3)))))")
CENTIPEDE_Y = ("x1*(2*(1-y1)+y1*(1*(1-x2)+x2*(4*(1-y2)+y2*(3*(1-x3)+x3*(6*(1-y3)+5*y3)))))")
CENTIPEDE_ORDER = ("x1", "y1", "x2", "y2", "x3", "y3")


def centipede() -> GameDefinition:
    moves = []
    for i, m in enumerate(CENTIPEDE_ORDER):
        gate = ((CENTIPEDE_ORDER[i - 1], 1),) if i else ()
        moves.append(MoveVar(m, owner=m[0].upper(), stage=i + 1, active_if=gate))
    return _two_player("centipede", moves, CENTIPEDE_X, CENTIPEDE_Y,
                       "six alternating moves; 1 passes across, 0 stops the game")


def ipd(N: int = 2) -> GameDefinition:
    if not isinstance(N, int) or N < 1:
        raise BadParams("the iterated prisoner's dilemma needs an integer N >= 1")
    moves = []
    for n in range(1, N + 1):
        moves.append(MoveVar(f"x{n}", owner="X", stage=n, labels=(((), "p1"),) if n == 1 else ()))
        moves.append(MoveVar(f"y{n}", owner="Y", stage=n, labels=(((), "q1"),) if n == 1 else ()))
    px = " + ".join(f"(2+x{n}-2*y{n})" for n in range(1, N + 1))
    py = " + ".join(f"(2-2*x{n}+y{n})" for n in range(1, N + 1))
    return _two_player("ipd", moves, px, py,
                       f"{N}-stage prisoner's dilemma; 1 defects, every stage sees the past",
                       params={"N": N})


def parity() -> GameDefinition:
    space = ProbabilitySpace([
        MoveVar("c1", owner="X", labels=(((), "p"),)),
        MoveVar("c2", owner="X", labels=(((), "q"),)),
    ], name="parity")
    return GameDefinition("parity", ("X",), space, {"X": P("c1+c2-2*c1*c2")},
                          "two coins; pays 1 when they differ")


GAMES: dict[str, Callable[..., GameDefinition]] = {
    "twostage": twostage,
    "dtree": dtree,
    "aumann27": aumann27,
    "aumann27-device": aumann27_device,
    "chainstore": chainstore,
    "trust": trust,
    "ultimatum": ultimatum,
    "publicgoods": publicgoods,
    "centipede": centipede,
    "ipd": ipd,
    "parity": parity,
}


def get_game(name: str, **params) -> GameDefinition:
    try:
        factory = GAMES[name]
    except KeyError:
        raise UnknownGame(f"unknown game {name!r}; known: {sorted(GAMES)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise BadParams(f"{name}: {exc}") from None


# ---------------------------------------------------------------------------
# space families
# ---------------------------------------------------------------------------


def _spec(label, owner, *constraints) -> SpaceSpec:
    return SpaceSpec(label, tuple(constraints), owner)


def _free(owner: str) -> SpaceSpec:
    return SpaceSpec(f"{owner}:free", (), owner)


def copy(move, src, when=()):
    return FunctionalAssignment.copy(move, src, when)


def anti(move, src, when=()):
    return FunctionalAssignment.anti(move, src, when)


def const(move, value, when=()):
    return FunctionalAssignment.const(move, value, when)


SIGN_ORDER = ("--", "-0", "-+", "0-", "00", "0+", "+-", "+0", "++")


def sign_spec(tag: str) -> SpaceSpec:
    """Y's response in the two-stage game: first symbol at x=0, second at x=1."""
    cons = []
    for x, sym in zip((0, 1), tag):
        if sym == "+":
            cons.append(copy("y", "x", (("x", x),)))
        elif sym == "-":
            cons.append(anti("y", "x", (("x", x),)))
    return _spec(f"Y:{tag}", "Y", *cons)


IPD_HISTORIES = ((0, 0), (0, 1), (1, 0), (1, 1))  # (x1, y1)
IPD_TAGS = tuple(sorted("".join(t) for t in itertools.product("+0", repeat=4)))


def ipd_tag_spec(player: str, tag: str) -> SpaceSpec:
    """Second-stage copy pattern: '+' copies the opponent's first move at that history."""
    me, other = ("x2", "y1") if player == "X" else ("y2", "x1")
    cons = [copy(me, other, (("x1", h[0]), ("y1", h[1])))
            for h, sym in zip(IPD_HISTORIES, tag) if sym == "+"]
    return _spec(f"{player}:{tag}", player, *cons)


def _prefix(player):
    return ("x", "y") if player == "X" else ("y", "x")


def ipd_named_spec(player: str, name: str, N: int) -> SpaceSpec:
    me, other = _prefix(player)
    markov = [copy(f"{me}{n}", f"{other}{n - 1}") for n in range(2, N + 1)]
    if name == "MKV":
        cons = markov
    elif name == "IND":
        cons = []
    elif name == "TFT":
        cons = [const(f"{me}1", 0)] + markov
    elif name == "ALLD":
        cons = [const(f"{me}{n}", 1) for n in range(1, N + 1)]
    else:
        raise UnknownFamily(f"unknown named strategy {name!r}")
    return _spec(f"{player}:{name}", player, *cons)


def ipd_endgame_spec(player: str, k: int, N: int) -> SpaceSpec:
    """Copy the opponent's previous move in stages 2..N-k, play freely after."""
    me, other = _prefix(player)
    cons = [copy(f"{me}{n}", f"{other}{n - 1}") for n in range(2, N - k + 1)]
    return _spec(f"{player}:k={k}", player, *cons)


def centipede_specs(player: str) -> list[SpaceSpec]:
    if player == "X":
        sets = [("x2", "x3"), ("x3",), ("x2",), ()]
        src = {"x2": "y1", "x3": "y2"}
    else:
        sets = [("y1", "y2", "y3"), ("y1", "y3"), ("y2", "y3"), ("y3",),
                ("y1", "y2"), ("y2",), ("y1",), ()]
        src = {"y1": "x1", "y2": "x2", "y3": "x3"}
    out = []
    for s in sets:
        label = ",".join(f"{m}={src[m]}" for m in s) or "free"
        out.append(_spec(f"{player}:{label}", player, *(copy(m, src[m]) for m in s)))
    return out


def ultimatum_specs(M: int) -> list[SpaceSpec]:
    out = [_free("Y")]
    for t in range(2, M + 1):
        cons = [FunctionalAssignment("y", sources=("x",),
                                     table=tuple(((x,), int(x >= t)) for x in range(1, M + 1)))]
        cons += [ParamFix(f"P(x={i})", 0) for i in range(1, t)]
        out.append(_spec(f"Y:threshold={t}", "Y", *cons))
    return out


@dataclass
class SpaceFamily:
    name: str
    row_player: str
    rows: list[SpaceSpec]
    cols: list[SpaceSpec]
    expected: list[list[tuple]] | None = None
    source: str = ""
    col_player: str = ""

    def specs_for(self, player: str) -> list[SpaceSpec]:
        if player == self.row_player:
            return list(self.rows)
        return list(self.cols)


def _fr(text: str) -> tuple:
    return tuple(F(v) for v in text.split(","))


def _grid(rows: Sequence[str]) -> list[list[tuple]]:
    return [[_fr(c) for c in row.split()] for row in rows]


IPD_EXTENDED = _grid([
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 8/3,7/3 8/3,7/3 8/3,7/3 8/3,7/3 2,2 2,2 2,2 2,2",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 8/3,7/3 8/3,7/3 8/3,7/3 8/3,7/3 2,2 2,2 2,2 2,2",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 8/3,7/3 8/3,7/3 8/3,7/3 8/3,7/3 2,2 2,2 2,2 2,2",
    "4,4 4,4 4,4 4,4 4,4 4,4 4,4 4,4 8/3,7/3 8/3,7/3 8/3,7/3 8/3,7/3 2,2 2,2 2,2 2,2",
    "3,3 3,3 3,3 3,3 7/3,8/3 7/3,8/3 7/3,8/3 7/3,8/3 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "3,3 3,3 3,3 3,3 7/3,8/3 7/3,8/3 7/3,8/3 7/3,8/3 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2 3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2",
    "3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2 3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2",
    "3,3 3,3 3,3 3,3 7/3,8/3 7/3,8/3 7/3,8/3 7/3,8/3 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "3,3 3,3 3,3 3,3 7/3,8/3 7/3,8/3 7/3,8/3 7/3,8/3 3,3 3,3 3,3 3,3 3,3 3,3 3,3 3,3",
    "3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2 3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2",
    "3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2 3,3 3,3 3,3 3,3 2,2 2,2 2,2 2,2",
])

IPD_REDUCED_LABELS = ("++++", "+000", "0+++", "0000")
IPD_REDUCED = _grid([
    "4,4 4,4 3,3 3,3",
    "4,4 4,4 8/3,7/3 2,2",
    "3,3 7/3,8/3 3,3 3,3",
    "3,3 2,2 3,3 2,2",
])
# weak Nash cells of the reduced table, as (row label, column label)
IPD_REDUCED_META = (("++++", "++++"), ("++++", "+000"), ("+000", "++++"), ("+000", "+000"),
                    ("0+++", "0+++"), ("0+++", "0000"), ("0000", "0+++"))

IPD_NAMED = ("MKV", "IND", "TFT", "ALLD")
IPD_NAMED_TABLE = _grid([
    "4,4 3,3 4,4 2,2",
    "3,3 2,2 5,2 2,2",
    "4,4 2,5 4,4 1,4",
    "2,2 2,2 4,1 2,2",
])

CENTIPEDE_TABLE = _grid([
    "6,5 6,5 6,5 6,5",
    "6,5 6,5 6,5 6,5",
    "6,5 6,5 6,5 6,5",
    "6,5 6,5 6,5 6,5",
    "4,6 4,6 5,3 5,3",
    "4,6 4,6 5,3 5,3",
    "4,6 4,6 2,4 3,1",
    "4,6 4,6 2,4 1,0",
])


def ipd_endgame_pinned(N: int) -> dict[tuple[int, int], tuple]:
    """Explicitly printed cells of the endgame listing, as (k, j) -> (X, Y)."""
    return {(0, 0): (2 * N, 2 * N), (0, 1): (2 * N - 2, 2 * N + 1), (1, 0): (2 * N + 1, 2 * N - 2),
            (1, 1): (2 * N - 1, 2 * N - 1), (N - 1, N - 1): (N, N)}


def get_space_family(name: str, game: GameDefinition) -> SpaceFamily:
    g = game.name
    if g == "twostage" and name == "signs":
        return SpaceFamily(name, "Y", [sign_spec(t) for t in SIGN_ORDER], [_free("X")],
                           _grid(["2,2", "2,2", "4,3", "2,2", "2,2", "4,3", "3,1", "3,1", "4,3"]),
                           "two-stage game, nine response spaces of Y")
    if g == "twostage" and name == "rho":
        rows = [_free("Y")] + [_spec(f"Y:rho={r}", "Y", CorrelationFix("x", "y", r)) for r in (1, 0, -1)]
        return SpaceFamily(name, "Y", rows, [_free("X")],
                           _grid(["2,2", "4,3", "5/2,5/2", "2,2"]),
                           "two-stage game under fixed correlation")
    if g == "chainstore" and name in ("standard", "default"):
        rows = [_free("Y"), _spec("Y:q=0", "Y", ParamFix("q", 0)), _spec("Y:q=1", "Y", ParamFix("q", 1))]
        return SpaceFamily(name, "Y", rows, [_free("X")], _grid(["1,0", "1,0", "0,1"]),
                           "chain store comparison")
    if g == "trust" and name in ("standard", "default"):
        rows = [_free("Y")] + [_spec(f"Y:y={t}", "Y", FunctionalAssignment("y", P(f"3*(1-x)+{t}*x")))
                               for t in range(4)]
        return SpaceFamily(name, "Y", rows, [_free("X")],
                           _grid(["1,0", "3,0", "2,1", "1,0", "1,0"]), "trust game comparison")
    if g == "ultimatum" and name in ("thresholds", "default"):
        M = game.params["M"]
        expected = [[(F(M - 1), F(1))]] + [[(F(M - t), F(t))] for t in range(2, M + 1)]
        return SpaceFamily(name, "Y", ultimatum_specs(M), [_free("X")], expected,
                           "ultimatum thresholds")
    if g == "publicgoods" and name in ("anticorr", "default"):
        rows = [_free("X"), _spec("X:x2=1-y1", "X", anti("x2", "y1"))]
        cols = [_free("Y"), _spec("Y:y2=1-x1", "Y", anti("y2", "x1"))]
        return SpaceFamily(name, "X", rows, cols, _grid(["4,4 3,7", "7,3 6,6"]),
                           "public goods comparison")
    if g == "centipede" and name in ("markov", "default"):
        return SpaceFamily(name, "Y", centipede_specs("Y"), centipede_specs("X"), CENTIPEDE_TABLE,
                           "centipede comparison, Y spaces by row")
    if g == "ipd":
        N = game.params["N"]
        if name == "named":
            specs = {p: [ipd_named_spec(p, s, N) for s in IPD_NAMED] for p in "XY"}
            return SpaceFamily(name, "X", specs["X"], specs["Y"],
                               IPD_NAMED_TABLE if N == 2 else None, "two-stage named strategies")
        if name in ("tags", "extended"):
            if N != 2:
                raise UnknownFamily("the copy-pattern family is defined for N=2")
            specs = {p: [ipd_tag_spec(p, t) for t in IPD_TAGS] for p in "XY"}
            return SpaceFamily(name, "X", specs["X"], specs["Y"], IPD_EXTENDED,
                               "two-stage copy-pattern comparison")
        if name == "endgame":
            specs = {p: [ipd_endgame_spec(p, k, N) for k in range(N)] for p in "XY"}
            return SpaceFamily(name, "X", specs["X"], specs["Y"], None, "endgame listing")
    raise UnknownFamily(f"no family {name!r} for game {g!r}")


FAMILIES = {
    "twostage": ("signs", "rho"),
    "chainstore": ("standard",),
    "trust": ("standard",),
    "ultimatum": ("thresholds",),
    "publicgoods": ("anticorr",),
    "centipede": ("markov",),
    "ipd": ("named", "tags", "endgame"),
}

# two-stage game reference points
TWOSTAGE_UNCONSTRAINED = {"point": (F(0), F(1), F(0)), "payoffs": (F(2), F(2))}

AUMANN_NASH = ((F(0), F(1), (F(2), F(7))), (F(1), F(0), (F(7), F(2))),
               (F(1, 3), F(1, 3), (F(14, 3), F(14, 3))))
# (p0, q0) projection of the stable device points and their payoffs
AUMANN_DEVICE = (((0, 0), (F(5), F(5))), ((0, 1), (F(2), F(7))), ((1, 0), (F(7), F(2))))

DTREE_SWEEP = (
    (1.0, (1.0, 0.0, 1.0), 1.0),
    (0.75, (0.8138, 0.3876, 1.0), 1.03032),
    (0.5, (0.4831, 0.5917, 1.0), 1.40068),
    (0.25, (0.2590, 0.7953, 1.0), 2.02693),
    (0.0, (0.0, 1.0, 1.0), 3.0),
    (-0.25, (0.0, 1.0, 0.9378), 3.0),
    (-0.5, (0.0, 1.0, 0.7506), 3.0),
    (-0.75, (0.0, 1.0, 0.4386), 3.0),
    (-1.0, (0.0, 1.0, 0.0), 3.0),
)


def catalog_entries() -> list[tuple[str, str, tuple[str, ...]]]:
    out = []
    for name, factory in GAMES.items():
        game = factory()
        out.append((name, game.description, FAMILIES.get(name, ())))
    return out


def resolved_square(correlated: bool = False):
    return resolve(square_xy_space(), SQUARE_CORRELATED if correlated else ())

