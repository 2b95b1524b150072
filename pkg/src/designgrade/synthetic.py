"""Synthetic scored corpus of small command-line programs.

Each program solves one of three intro-course tasks (trip distance, monthly
budget, dice betting) and switches five design flaws on or off. Its rubric
score is fixed by the flaws alone::

    score = 1 - sum(FLAW_PENALTIES[f] for f in flaws that are on)

so the score runs from 1.0 (no flaws) down to 0.15 (every flaw). Naming,
blank-line style and how many values a program handles vary independently of
the score.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import TooFewExamples

FLAW_PENALTIES = {
    "monolithic": 0.25,
    "globals": 0.20,
    "magic_numbers": 0.15,
    "no_exception_handling": 0.15,
    "no_comments": 0.10,
}
FLAWS = tuple(FLAW_PENALTIES)
MIN_SCORE = round(1.0 - sum(FLAW_PENALTIES.values()), 4)
MIN_PROGRAMS = 20
TASKS = ("travel", "budget", "dice")


def rubric_score(flaws: dict) -> float:
    return round(1.0 - sum(p for f, p in FLAW_PENALTIES.items() if flaws.get(f)), 4)


class _Emitter:
    def __init__(self, comments: bool, blank_run: int):
        self.lines: list[str] = []
        self.level = 0
        self.comments = comments
        self.blank_run = blank_run

    def __call__(self, text: str = ""):
        self.lines.append("    " * self.level + text if text else "")

    def comment(self, text: str):
        if self.comments:
            self(f"# {text}")

    def doc(self, text: str):
        if self.comments:
            self(f'"""{text}"""')

    def gap(self):
        for _ in range(self.blank_run):
            self.lines.append("")

    @contextmanager
    def block(self, header: str):
        self(header)
        self.level += 1
        yield
        self.level -= 1

    def text(self) -> str:
        while self.lines and not self.lines[-1]:
            self.lines.pop()
        return "\n".join(self.lines) + "\n"


@dataclass(frozen=True)
class _Constant:
    name: str
    value: str


@dataclass(frozen=True)
class _Input:
    var: str
    prompt: str
    kind: str  # "float" or "int"
    minimum: str


class _Program:
    """Shared layout; task subclasses fill in inputs, constants and logic."""

    def __init__(self, flaws: dict, rng: np.random.Generator):
        self.flaws = flaws
        self.rng = rng
        self.e = _Emitter(comments=not flaws["no_comments"], blank_run=int(rng.integers(1, 3)))
        self.magic = flaws["magic_numbers"]
        self.use_globals = flaws["globals"]
        self.safe_input = not flaws["no_exception_handling"]

    # subclasses provide these
    title = ""
    imports: tuple[str, ...] = ()
    constants: list[_Constant] = []
    inputs: list[_Input] = []
    state: list[str] = []

    def const(self, name: str) -> str:
        for c in self.constants:
            if c.name == name:
                return c.value if self.magic else c.name.lower()
        raise KeyError(name)

    def emit_constants(self):
        if self.magic:
            return
        self.e.comment("named values used in the calculations")
        for c in self.constants:
            self.e(f"{c.name.lower()} = {c.value}")

    def emit_read(self, inp: _Input, target: str):
        e = self.e
        if self.safe_input:
            e(f"{target} = -1")
            with e.block(f"while {target} < {inp.minimum}:"):
                with e.block("try:"):
                    e(f'{target} = {inp.kind}(input("{inp.prompt}: "))')
                with e.block("except ValueError:"):
                    e('print("Please enter a number.")')
                    e(f"{target} = -1")
        else:
            e(f'{target} = {inp.kind}(input("{inp.prompt}: "))')

    def emit_globals_decl(self):
        if self.use_globals and self.state:
            self.e(f"global {', '.join(self.state)}")

    def render(self) -> str:
        e = self.e
        if self.e.comments:
            e(f'"""{self.title}"""')
            e.gap()
        for imp in self.imports:
            e(f"import {imp}")
        if self.imports:
            e.gap()
        if self.use_globals:
            e.comment("program state")
            for var in self.state:
                e(f"{var} = 0")
            e.gap()
        if self.flaws["monolithic"]:
            self.emit_monolithic()
        else:
            self.emit_modular()
        e.gap()
        with e.block('if __name__ == "__main__":'):
            e("main()")
        return e.text()

    def emit_input_helper(self, kind: str):
        e = self.e
        with e.block(f"def read_{kind}(prompt, minimum):"):
            e.doc(f"Ask until the user types a {kind} of at least minimum.")
            if self.safe_input:
                with e.block("while True:"):
                    with e.block("try:"):
                        e(f'value = {kind}(input(prompt + ": "))')
                    with e.block("except ValueError:"):
                        e('print("Please enter a number.")')
                        e("continue")
                    with e.block("if value >= minimum:"):
                        e("return value")
                    e('print("Value is too small.")')
            else:
                e(f'return {kind}(input(prompt + ": "))')
        e.gap()


class _Travel(_Program):
    title = "Compute how far a vehicle travels at a constant speed."
    constants = [_Constant("MINUTES_PER_HOUR", "60"), _Constant("KM_PER_MILE", "1.609")]

    def __init__(self, flaws, rng):
        super().__init__(flaws, rng)
        speed, hours = rng.choice([("speed", "hours"), ("mph", "hrs"), ("rate", "duration")])
        self.inputs = [
            _Input(speed, "Speed in miles per hour", "float", "0"),
            _Input(hours, "Hours driven", "int", "0"),
            _Input("minutes", "Extra minutes driven", "int", "0"),
        ]
        self.trips = int(rng.integers(1, 4))
        self.state = ["total_miles", "trip_count"]

    def emit_modular(self):
        e = self.e
        speed, hours, minutes = (i.var for i in self.inputs)
        self.emit_input_helper("float")
        self.emit_input_helper("int")
        with e.block(f"def trip_distance({speed}, {hours}, {minutes}):"):
            e.doc("Miles covered for the given speed and time.")
            self.emit_constants()
            e(f"elapsed = {hours} + {minutes} / {self.const('MINUTES_PER_HOUR')}")
            e(f"return {speed} * elapsed")
        e.gap()
        with e.block("def to_km(miles):"):
            e.doc("Convert miles to kilometres.")
            if not self.magic:
                e(f"km_per_mile = {self.constants[1].value}")
            e(f"return miles * {self.const('KM_PER_MILE')}")
        e.gap()
        with e.block("def report(miles):"):
            e('print("Distance: %.2f miles" % miles)')
            e('print("Distance: %.2f km" % to_km(miles))')
        e.gap()
        if self.use_globals:
            with e.block("def record_trip(miles):"):
                self.emit_globals_decl()
                e("total_miles += miles")
                e("trip_count += 1")
            e.gap()
        with e.block("def main():"):
            e.comment("one pass per trip")
            e("miles_so_far = 0")
            with e.block(f"for trip in range({self.trips}):"):
                e(f'{speed} = read_float("{self.inputs[0].prompt}", 0)')
                e(f'{hours} = read_int("{self.inputs[1].prompt}", 0)')
                e(f'{minutes} = read_int("{self.inputs[2].prompt}", 0)')
                e(f"miles = trip_distance({speed}, {hours}, {minutes})")
                e("report(miles)")
                e("miles_so_far += miles")
                if self.use_globals:
                    e("record_trip(miles)")
            e('print("All trips: %.2f miles" % miles_so_far)')

    def emit_monolithic(self):
        e = self.e
        speed, hours, minutes = (i.var for i in self.inputs)
        with e.block("def main():"):
            self.emit_globals_decl()
            self.emit_constants()
            e("miles_so_far = 0")
            with e.block(f"for trip in range({self.trips}):"):
                e.comment("read the trip details")
                for inp in self.inputs:
                    self.emit_read(inp, inp.var)
                e(f"elapsed = {hours} + {minutes} / {self.const('MINUTES_PER_HOUR')}")
                e(f"miles = {speed} * elapsed")
                e('print("Distance: %.2f miles" % miles)')
                e(f'print("Distance: %.2f km" % (miles * {self.const("KM_PER_MILE")}))')
                e("miles_so_far += miles")
                if self.use_globals:
                    e("total_miles += miles")
                    e("trip_count += 1")
            e('print("All trips: %.2f miles" % miles_so_far)')


class _Budget(_Program):
    title = "Compare monthly expenses against a budget."
    constants = [_Constant("TAX_RATE", "0.07"), _Constant("WARNING_MARGIN", "50")]
    _ITEMS = ["rent", "food", "fuel", "phone", "insurance", "fun"]

    def __init__(self, flaws, rng):
        super().__init__(flaws, rng)
        k = int(rng.integers(2, 6))
        self.items = [str(x) for x in rng.choice(self._ITEMS, size=k, replace=False)]
        self.inputs = [_Input("budget", "Monthly budget", "float", "0")] + [
            _Input(item, f"Cost of {item}", "float", "0") for item in self.items
        ]
        self.state = ["total_spent", "over_budget"]

    def emit_status(self, remaining: str):
        e = self.e
        with e.block(f"if {remaining} < 0:"):
            e(f'print("Over budget by %.2f" % -{remaining})')
            if self.use_globals:
                e("over_budget = True")
        with e.block(f"elif {remaining} < {self.const('WARNING_MARGIN')}:"):
            e(f'print("Within {self.const("WARNING_MARGIN")} of the budget")')
        with e.block("else:"):
            e(f'print("Under budget by %.2f" % {remaining})')

    def emit_modular(self):
        e = self.e
        self.emit_input_helper("float")
        with e.block("def read_expenses():"):
            e.doc("Collect every expense into a list.")
            e("expenses = []")
            with e.block(f"for name in {self.items!r}:"):
                e('expenses.append(read_float("Cost of " + name, 0))')
            e("return expenses")
        e.gap()
        with e.block("def total_with_tax(expenses):"):
            self.emit_constants()
            e(f"return sum(expenses) * (1 + {self.const('TAX_RATE')})")
        e.gap()
        with e.block("def show_status(remaining):"):
            self.emit_globals_decl()
            if not self.magic:
                e(f"warning_margin = {self.constants[1].value}")
            self.emit_status("remaining")
        e.gap()
        with e.block("def main():"):
            e('budget = read_float("Monthly budget", 0)')
            e("spent = total_with_tax(read_expenses())")
            if self.use_globals:
                e("global total_spent")
                e("total_spent = spent")
            e("show_status(budget - spent)")

    def emit_monolithic(self):
        e = self.e
        with e.block("def main():"):
            self.emit_globals_decl()
            self.emit_constants()
            for inp in self.inputs:
                self.emit_read(inp, inp.var)
            e.comment("add tax to the raw expenses")
            e(f"spent = ({' + '.join(self.items)}) * (1 + {self.const('TAX_RATE')})")
            if self.use_globals:
                e("total_spent = spent")
            e("remaining = budget - spent")
            self.emit_status("remaining")


class _Dice(_Program):
    title = "Bet on rolls of two dice."
    imports = ("random",)
    constants = [_Constant("SIDES", "6"), _Constant("LUCKY_TOTAL", "7"), _Constant("PAYOUT", "2")]

    def __init__(self, flaws, rng):
        super().__init__(flaws, rng)
        self.inputs = [
            _Input("rounds", "Rounds to play", "int", "1"),
            _Input("bet", "Bet per round", "int", "1"),
        ]
        self.state = ["bank", "wins"]
        self.bonus_doubles = bool(rng.integers(0, 2))

    def emit_round(self, winnings: str):
        e = self.e
        sides = self.const("SIDES")
        e(f"first = random.randint(1, {sides})")
        e(f"second = random.randint(1, {sides})")
        with e.block(f"if first + second == {self.const('LUCKY_TOTAL')}:"):
            e(f"{winnings} += bet * {self.const('PAYOUT')}")
            if self.use_globals:
                e("wins += 1")
        if self.bonus_doubles:
            with e.block("elif first == second:"):
                e(f"{winnings} += bet")
        with e.block("else:"):
            e(f"{winnings} -= bet")

    def emit_modular(self):
        e = self.e
        self.emit_input_helper("int")
        with e.block("def play_round(bet):"):
            e.doc("Roll two dice and return the change in money.")
            self.emit_globals_decl()
            self.emit_constants()
            e("change = 0")
            self.emit_round("change")
            e("return change")
        e.gap()
        with e.block("def main():"):
            e('rounds = read_int("Rounds to play", 1)')
            e('bet = read_int("Bet per round", 1)')
            e("money = 0")
            with e.block("for turn in range(rounds):"):
                e("money += play_round(bet)")
            e('print("Net result: %d" % money)')

    def emit_monolithic(self):
        e = self.e
        with e.block("def main():"):
            self.emit_globals_decl()
            self.emit_constants()
            for inp in self.inputs:
                self.emit_read(inp, inp.var)
            e("money = 0")
            with e.block("for turn in range(rounds):"):
                e.comment("one roll of both dice")
                self.emit_round("money")
            if self.use_globals:
                e("bank += money")
            e('print("Net result: %d" % money)')


_TASK_CLASSES = {"travel": _Travel, "budget": _Budget, "dice": _Dice}


def render_program(task: str, flaws: dict, rng: np.random.Generator) -> str:
    flags = {f: bool(flaws.get(f, False)) for f in FLAWS}
    return _TASK_CLASSES[task](flags, rng).render()


@dataclass(frozen=True)
class SyntheticProgram:
    name: str
    task: str
    flaws: dict
    score: float
    source: str


def generate_programs(n: int, seed: int) -> list[SyntheticProgram]:
    """Deterministic list of ``n`` programs.

    A per-program skill level in [0, 1] sets the chance of each flaw
    (``0.1 + 0.7 * (1 - skill)``), so flaws cluster the way they do in
    real submissions.
    """
    if n < MIN_PROGRAMS:
        raise TooFewExamples(f"need at least {MIN_PROGRAMS} programs, got {n}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    programs = []
    for i in range(n):
        task = TASKS[int(rng.integers(len(TASKS)))]
        skill = float(rng.uniform())
        p = 0.1 + 0.7 * (1.0 - skill)
        flaws = {f: bool(rng.uniform() < p) for f in FLAWS}
        source = render_program(task, flaws, rng)
        programs.append(SyntheticProgram(f"prog_{i:04d}.py", task, flaws, rubric_score(flaws), source))
    return programs


def generate_synthetic_corpus(n: int, seed: int, out_dir) -> Path:
    """Write ``n`` programs plus ``manifest.csv`` (``path,score``) into ``out_dir``."""
    programs = generate_programs(n, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = ["path,score"]
    for prog in programs:
        (out / prog.name).write_text(prog.source, encoding="utf-8", newline="\n")
        rows.append(f"{prog.name},{prog.score:.4f}")
    manifest = out / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n", encoding="utf-8", newline="\n")
    return manifest
