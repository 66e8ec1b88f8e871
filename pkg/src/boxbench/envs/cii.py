"""Checkpoint-instrumented reference programs.

A traced program re-executes on every query and records, at each
checkpoint visit, a snapshot of the variables in scope there.  Queries
address snapshots by (checkpoint index, visit number), both 1-based.
Variable names are short and deliberately meaningless so they leak no
intent.
"""

from __future__ import annotations

import ast
import copy
import re
from dataclasses import dataclass, field
from typing import Callable

from ..registry import Environment, EnvironmentSpec, ExactMatch, TestSample, register
from ..seeding import stable_rng


class Trace:
    def __init__(self):
        self.visits: dict[int, list[dict]] = {}

    def emit(self, idx: int, **variables) -> None:
        snapshot = {name: copy.deepcopy(value) for name, value in variables.items()}
        self.visits.setdefault(idx, []).append(snapshot)

    def visit_count(self, idx: int) -> int:
        return len(self.visits.get(idx, []))

    def snapshot(self, idx: int, visit: int) -> dict:
        return self.visits[idx][visit - 1]


@dataclass(frozen=True)
class TracedProgram:
    id: str
    difficulty: str
    description: str
    params: tuple[tuple[str, type], ...]
    checkpoint_count: int
    run: Callable[..., Trace] = field(repr=False)
    sample_inputs: Callable = field(repr=False)
    question_count: int = 6


def _qs_run(arr: list) -> Trace:
    trace = Trace()

    def qs(arr):
        if len(arr) <= 1:
            return list(arr)
        p = arr[-1]
        trace.emit(1, arr=arr, p=p)
        l, r = [], []
        for i in range(len(arr) - 1):
            if arr[i] <= p:
                l.append(arr[i])
            else:
                r.append(arr[i])
        trace.emit(2, arr=arr, p=p, l=l, r=r, i=i)
        s = qs(l) + [p] + qs(r)
        trace.emit(3, arr=arr, p=p, l=l, r=r, i=i, s=s)
        return s

    qs(list(arr))
    return trace


def _fib_run(num: int) -> Trace:
    trace = Trace()

    def f(num):
        trace.emit(1, num=num)
        s = num if num <= 1 else f(num - 1) + f(num - 2)
        trace.emit(2, num=num, s=s)
        return s

    f(num)
    return trace


def _factorial_run(num: int) -> Trace:
    trace = Trace()

    def f(num):
        trace.emit(1, num=num)
        s = 1 if num <= 1 else num * f(num - 1)
        trace.emit(2, num=num, s=s)
        return s

    f(num)
    return trace


def _exgcd_run(a: int, b: int) -> Trace:
    trace = Trace()

    def eg(a, b):
        trace.emit(1, a=a, b=b)
        if b == 0:
            g, x, y = a, 1, 0
        else:
            g, x1, y1 = eg(b, a % b)
            x, y = y1, x1 - (a // b) * y1
        trace.emit(2, a=a, b=b, g=g, x=x, y=y)
        return g, x, y

    eg(a, b)
    return trace


def _bubble_run(arr: list) -> Trace:
    trace = Trace()
    a = list(arr)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 1 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                trace.emit(1, arr=a, i=i, j=j)
        trace.emit(2, arr=a, i=i)
    trace.emit(3, s=a)
    return trace


def _algebra_run(a: int, b: int, c: int) -> Trace:
    trace = Trace()
    d = a + b + c
    trace.emit(1, a=a, b=b, c=c, d=d)
    e = a * b - c
    trace.emit(2, a=a, b=b, c=c, d=d, e=e)
    # Exact halving: integers stay integers, odd numerators become the
    # exact decimal (e.g. 3.5).
    num = e + d - 10
    f = num // 2 if num % 2 == 0 else num / 2
    trace.emit(3, a=a, b=b, c=c, d=d, e=e, f=f)
    return trace


def _complex_algebra_run(a: int, b: int, c: int, d: int) -> Trace:
    trace = Trace()
    e = a * b + c * d
    e = e - 10 if e > 50 else e + 10
    trace.emit(1, a=a, b=b, c=c, d=d, e=e)
    f = e * e - a - b - c - d
    f = (f - 1) // 2 if f % 2 else f // 2
    trace.emit(2, a=a, b=b, c=c, d=d, e=e, f=f)
    g = f - a
    trace.emit(3, a=a, b=b, c=c, d=d, e=e, f=f, g=g)
    return trace


def _int_list(rng, low=1, high=50, min_len=4, max_len=6):
    return [rng.randint(low, high) for _ in range(rng.randint(min_len, max_len))]


def _unsorted_list(rng):
    while True:
        arr = _int_list(rng)
        if any(arr[i] > arr[i + 1] for i in range(len(arr) - 1)):
            return arr


CATALOG: dict[str, TracedProgram] = {}


def _program(program: TracedProgram) -> None:
    CATALOG[program.id] = program


_program(TracedProgram(
    "quicksort", "Easy",
    "Recursive quicksort taking the last element of each slice as pivot; "
    "checkpoints after pivot selection, after partitioning, and after the "
    "combine step.",
    (("arr", list),), 3, _qs_run,
    lambda rng: {"arr": _int_list(rng)},
))
_program(TracedProgram(
    "fib", "Easy",
    "Recursive Fibonacci; checkpoints at call entry and after the result "
    "of each call is known.",
    (("num", int),), 2, _fib_run,
    lambda rng: {"num": rng.randint(5, 12)},
))
_program(TracedProgram(
    "factorial", "Easy",
    "Recursive factorial; checkpoints at call entry and after the result "
    "of each call is known.",
    (("num", int),), 2, _factorial_run,
    lambda rng: {"num": rng.randint(3, 10)},
))
_program(TracedProgram(
    "exgcd", "Easy",
    "Extended Euclid returning gcd and Bezout coefficients; checkpoints "
    "at call entry and after the coefficients of each call are known.",
    (("a", int), ("b", int)), 2, _exgcd_run,
    lambda rng: {"a": rng.randint(10, 99), "b": rng.randint(10, 99)},
))
_program(TracedProgram(
    "bubble-sort", "Easy",
    "Bubble sort; checkpoints after every swap, after every outer pass, "
    "and at the end.",
    (("arr", list),), 3, _bubble_run,
    lambda rng: {"arr": _unsorted_list(rng)},
))
_program(TracedProgram(
    "random-algebra", "Easy",
    "d = a+b+c, e = a*b-c, f = (e+d-10)/2 with exact halving.",
    (("a", int), ("b", int), ("c", int)), 3, _algebra_run,
    lambda rng: {"a": rng.randint(1, 20), "b": rng.randint(1, 20),
                 "c": rng.randint(1, 20)},
))
_program(TracedProgram(
    "complex-algebra", "Hard",
    "e = a*b+c*d shifted by 10 away from or toward 50, f = halved "
    "(e^2-a-b-c-d) with odd adjustment, g = f-a.",
    (("a", int), ("b", int), ("c", int), ("d", int)), 3, _complex_algebra_run,
    lambda rng: {"a": rng.randint(1, 12), "b": rng.randint(1, 12),
                 "c": rng.randint(1, 12), "d": rng.randint(1, 12)},
    question_count=7,
))


def render_snapshot(snapshot: dict) -> str:
    return repr([
        f"name={name}, value={value!r}, type={type(value).__name__}"
        for name, value in snapshot.items()
    ])


_INTRO = """1. Task overview:
- The user plays the role of a code function, but you don't know what the function is. You need to understand the detailed working principle of this function by interacting with user in multiple turns.

2. Goals:
- By interacting with the user within given interaction turns, you need to understand how the code function operates in every checkpoint.

3. User property:
- The code function takes some variables as input.
- The code function has some checkpoints. You can specify `(idx, iter)` to get the value of accessible intermediate variables:
  - `idx`: int is the index of checkpoint (i.e. the idx-th checkpoint).
  - `iter`: int is the number of visited times (i.e. checkpoint will be visited multiple times in loop).
- Example: `(2, 3)` means getting the value of accessible variables when the 2-nd checkpoint is visited for the 3-rd time.

4. Interaction rules:
- Rule 0: The user will first tell you the *type* and *name* of all the function input variables, the *total number of checkpoints*. In each turn, the user will tell *current turn* and *remaining turns*.
- Rule 1: You can assign or re-assign any values to the input variables freely, but they must match the variable types (e.g. if num is int, you can't assign a float number to it). DO NOT assign `idx` and `iter` in this stage.
- Rule 2: You can ask for the value of accessible variables at `idx` checkpoint in `iter` iteration. The user will return the variable names and values.
- The interaction order matters: You are free to implement Interaction Rule 1, 2 at any time, **but you must make sure Rule 1 is implemented before Rule 2.**

5. Output format:
- **You must strictly obey the output format rules, DO NOT output any unrelated text!**:
  - According to Interaction Rule 1, when you want to assign values to input variables, output "variable_name_1 = value_1; variable_name_2 = value_2; ..." (e.g. arr = [1, 5, 2, 9]; k = 3)
  - According to Interaction Rule 2, when you want to ask for accessible variables in `idx` checkpoint in `iter` iteration, output "(`idx`, `iter`)" (e.g. (1, 2)). **Note the minimal number for `idx` and `iter` is 1.**

6. Evaluation:
- When the given number of interactions is reached, several questions on the variable value at certain checkpoint will be presented. **You MUST ONLY output the value, DO NOT contain any other text.**"""

_CHECKPOINT_QUERY = re.compile(r"^\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_FORMAT_REMINDER = (
    "Invalid input. Either assign input variables with "
    '"variable_name_1 = value_1; variable_name_2 = value_2; ..." or query a '
    'checkpoint with "(idx, iter)".'
)


class TracedProgramEnvironment(Environment):
    style = "function"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.program = CATALOG[spec.id.split("/", 1)[1]]
        self.inputs: dict = {}
        super().__init__(spec, seed)

    # -- description --------------------------------------------------------
    def describe(self) -> str:
        params = [
            {"name": name, "type": kind} for name, kind in self.program.params
        ]
        return (
            f"The black-box takes {params} as input variables, and has "
            f"{self.program.checkpoint_count} checkpoints."
        )

    def preamble(self) -> str:
        return _INTRO + "\n\n" + self.describe()

    # -- exploration ---------------------------------------------------------
    def explore(self, query: str) -> str:
        match = _CHECKPOINT_QUERY.match(query)
        if match:
            return self.query_checkpoint(int(match.group(1)), int(match.group(2)))
        if "=" in query:
            return self.set_inputs(query)
        return _FORMAT_REMINDER

    def set_inputs(self, text: str) -> str:
        updates = {}
        for clause in text.split(";"):
            clause = clause.strip()
            if not clause:
                continue
            name, _, raw = clause.partition("=")
            name, raw = name.strip(), raw.strip()
            schema = dict(self.program.params)
            if name not in schema:
                return "Error: The variable name is not in the function parameters"
            expected = schema[name]
            try:
                value = ast.literal_eval(raw)
            except (ValueError, SyntaxError) as err:
                return f"Error: Failed to convert {raw} to {expected.__name__}: {err}"
            if not isinstance(value, expected) or isinstance(value, bool):
                return (
                    f"Error: Failed to convert {raw} to {expected.__name__}: "
                    f"got {type(value).__name__}"
                )
            updates[name] = value
        if not updates:
            return _FORMAT_REMINDER
        self.inputs.update(updates)
        return f"Set {self.inputs}."

    def query_checkpoint(self, idx: int, iteration: int) -> str:
        if set(self.inputs) != {name for name, _ in self.program.params}:
            return (
                "Error: Please assign values to all input variables before "
                "querying checkpoints."
            )
        if not 1 <= idx <= self.program.checkpoint_count:
            return (
                f"Error: Checkpoint index {idx} is out of range "
                f"(1 to {self.program.checkpoint_count})"
            )
        trace = self.program.run(**self.inputs)
        max_visits = trace.visit_count(idx)
        if iteration > max_visits:
            return (
                f"Query iteration {iteration} exceeds maximum possible visits "
                f"{max_visits} for checkpoint {idx}"
            )
        if iteration < 1:
            return _FORMAT_REMINDER
        return render_snapshot(trace.snapshot(idx, iteration))

    # -- evaluation ------------------------------------------------------------
    def _build_test_set(self) -> list[TestSample]:
        rng = stable_rng(self.spec.id, self.seed, "tests")
        samples = []
        for _ in range(5):
            while True:
                inputs = self.program.sample_inputs(rng)
                trace = self.program.run(**inputs)
                pool = [
                    (idx, visit, name)
                    for idx in sorted(trace.visits)
                    for visit in range(1, trace.visit_count(idx) + 1)
                    for name in trace.snapshot(idx, visit)
                ]
                if len(pool) >= self.program.question_count:
                    break
            picks = rng.sample(pool, self.program.question_count)
            for idx, visit, name in sorted(picks):
                value = trace.snapshot(idx, visit)[name]
                question = (
                    f"When the input variables of the blackbox are {inputs}, "
                    f"what's the value for {name} at checkpoint ({idx}, {visit})?"
                )
                samples.append(TestSample(question, ExactMatch(repr(value))))
        return samples

    def eval_question(self, index: int) -> str:
        return "Now answer the question: " + self.samples[index].input

    def hidden_markers(self) -> list[str]:
        return [self.program.id, self.program.description]


def register_all() -> None:
    for name, program in CATALOG.items():
        register(
            EnvironmentSpec(
                id=f"cii/{name}",
                family="CII",
                difficulty=program.difficulty,
                description=program.description,
                public_description=(
                    "A hidden code function with queryable checkpoints: "
                    "assign inputs, then inspect variable snapshots by "
                    "(checkpoint, visit)."
                ),
                default_test_count=5 * program.question_count,
                factory=TracedProgramEnvironment,
            )
        )
