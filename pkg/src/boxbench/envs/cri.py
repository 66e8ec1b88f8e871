"""Acyclic boolean circuits: model, simulator, and the named catalog.

A circuit is an ordered gate list over ``n`` input wires.  Gate ``i`` may
read input wires or outputs of gates with smaller indices only.  Feedback
for a query is the output bit of every gate in index order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from ..registry import (
    BitListMatch,
    Environment,
    EnvironmentSpec,
    TestSample,
    register,
)
from ..seeding import stable_rng

WIRE = 0
GATE = 1


@dataclass(frozen=True)
class Gate:
    kind: str  # AND | OR | NOT
    inputs: tuple[tuple[int, int], ...]  # (source, index), 1-based indices


class Circuit:
    def __init__(self, n: int, gates: list[Gate]):
        self.n = n
        self.gates = list(gates)
        self._validate()

    def _validate(self) -> None:
        for pos, gate in enumerate(self.gates, start=1):
            arity = 1 if gate.kind == "NOT" else 2
            if gate.kind not in ("AND", "OR", "NOT"):
                raise ValueError(f"gate {pos}: unknown kind {gate.kind!r}")
            if len(gate.inputs) != arity:
                raise ValueError(f"gate {pos}: {gate.kind} needs {arity} inputs")
            for source, idx in gate.inputs:
                if source == WIRE and not 1 <= idx <= self.n:
                    raise ValueError(f"gate {pos}: wire {idx} out of range")
                if source == GATE and not 1 <= idx < pos:
                    raise ValueError(f"gate {pos}: gate input {idx} breaks acyclicity")
                if source not in (WIRE, GATE):
                    raise ValueError(f"gate {pos}: bad source {source}")

    def __len__(self) -> int:
        return len(self.gates)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "gates": [
                {"kind": g.kind, "inputs": [list(ref) for ref in g.inputs]}
                for g in self.gates
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        gates = [
            Gate(g["kind"], tuple((s, i) for s, i in g["inputs"]))
            for g in data["gates"]
        ]
        return cls(data["n"], gates)


def simulate(circuit: Circuit, bits: list[int]) -> list[int]:
    """Evaluate every gate in index order; returns the m gate outputs."""
    if len(bits) != circuit.n:
        raise ValueError(f"expected {circuit.n} input bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("input bits must be 0 or 1")
    outputs: list[int] = []
    for gate in circuit.gates:
        vals = [
            bits[idx - 1] if source == WIRE else outputs[idx - 1]
            for source, idx in gate.inputs
        ]
        if gate.kind == "AND":
            outputs.append(vals[0] & vals[1])
        elif gate.kind == "OR":
            outputs.append(vals[0] | vals[1])
        else:
            outputs.append(1 - vals[0])
    return outputs


# --------------------------------------------------------------------------
# Catalog constructors.  Gate lists are built deterministically; "random"
# circuits are frozen literal gate lists committed as data, never
# regenerated per call.
# --------------------------------------------------------------------------


def _copy(ref: tuple[int, int]) -> Gate:
    # Copy is realized as OR(x, x); the catalog has no 1-input identity gate.
    return Gate("OR", (ref, ref))


def _xor_gates(a: tuple[int, int], b: tuple[int, int], base: int) -> list[Gate]:
    """a xor b = (a AND (NOT b)) OR ((NOT a) AND b); appends 5 gates.

    ``base`` is the index the first appended gate will get (1-based).
    The xor output is gate ``base + 4``.
    """
    not_b = Gate("NOT", (b,))
    not_a = Gate("NOT", (a,))
    left = Gate("AND", (a, (GATE, base)))
    right = Gate("AND", ((GATE, base + 1), b))
    return [not_b, not_a, left, right, Gate("OR", ((GATE, base + 2), (GATE, base + 3)))]


def _build_swap_9() -> Circuit:
    gates = [_copy((WIRE, w)) for w in (6, 7, 8, 9)]
    gates += [_copy((WIRE, w)) for w in (1, 2, 3, 4, 5)]
    return Circuit(9, gates)


def _build_random_small_4() -> Circuit:
    data = json.loads(
        resources.files("boxbench.data").joinpath("random_small_4.json").read_text()
    )
    return Circuit.from_dict(data)


def _build_consequence_8() -> Circuit:
    # b[i] = a[i-1] AND a[i]; s chains the b's with ORs.
    gates = [Gate("AND", ((WIRE, i - 1), (WIRE, i))) for i in range(2, 9)]
    prev = (GATE, 1)
    for i in range(2, 8):
        gates.append(Gate("OR", ((GATE, i), prev)))
        prev = (GATE, len(gates))
    return Circuit(8, gates)


def _build_xor_sequence_8() -> Circuit:
    # s[1] = a[1] (wire itself); s[i] = s[i-1] xor a[i] for i = 2..8.
    gates: list[Gate] = []
    prev = (WIRE, 1)
    for i in range(2, 9):
        gates += _xor_gates(prev, (WIRE, i), len(gates) + 1)
        prev = (GATE, len(gates))
    return Circuit(8, gates)


def _build_palindrome_8() -> Circuit:
    # Final gate = 1 iff input reversed equals input AND first half equals
    # second half.  Per position i in 1..4:
    #   d[i] = (a[i] AND a[9-i]) OR NOT(a[i] OR a[9-i])   (mirror equality)
    #   g[i] = (a[i] AND a[i+4]) OR NOT(a[i] OR a[i+4])   (half equality)
    n = 8
    gates: list[Gate] = []

    def eq(a: int, b: int) -> tuple[int, int]:
        gates.append(Gate("AND", ((WIRE, a), (WIRE, b))))
        both = (GATE, len(gates))
        gates.append(Gate("OR", ((WIRE, a), (WIRE, b))))
        gates.append(Gate("NOT", ((GATE, len(gates)),)))
        neither = (GATE, len(gates))
        gates.append(Gate("OR", (both, neither)))
        return (GATE, len(gates))

    terms = []
    for i in range(1, 5):
        terms.append(eq(i, n - i + 1))
        terms.append(eq(i, i + n // 2))
    prev = terms[0]
    for term in terms[1:]:
        gates.append(Gate("AND", (prev, term)))
        prev = (GATE, len(gates))
    return Circuit(n, gates)


def _build_and_tree_8() -> Circuit:
    # n-1 = 7 gates; the last gate is the AND of all wires, the
    # second-to-last covers wires 1..4, the third-to-last wires 5..8.
    gates = [
        Gate("AND", ((WIRE, 1), (WIRE, 2))),
        Gate("AND", ((WIRE, 3), (WIRE, 4))),
        Gate("AND", ((WIRE, 5), (WIRE, 6))),
        Gate("AND", ((WIRE, 7), (WIRE, 8))),
        Gate("AND", ((GATE, 3), (GATE, 4))),
        Gate("AND", ((GATE, 1), (GATE, 2))),
        Gate("AND", ((GATE, 6), (GATE, 5))),
    ]
    return Circuit(8, gates)


def _build_add_10() -> Circuit:
    # a[2..10] as a binary number plus the single bit a[1].  Ripple carry
    # starts at the least significant bit a[10] with carry-in a[1]:
    #   result[i] = a[11-i] xor carry,  carry' = a[11-i] AND carry.
    gates: list[Gate] = []
    carry = (WIRE, 1)
    for i in range(1, 10):
        bit = (WIRE, 11 - i)
        gates += _xor_gates(bit, carry, len(gates) + 1)
        gates.append(Gate("AND", (bit, carry)))
        carry = (GATE, len(gates))
    return Circuit(10, gates)


def _build_compare_10() -> Circuit:
    # x = wires 1..5, y = wires 6..10; final gate = 1 iff x > y
    # lexicographically, using a > b == a AND (NOT b).
    gates: list[Gate] = []
    gt, eq = [], []
    for i in range(1, 6):
        x, y = (WIRE, i), (WIRE, i + 5)
        gates.append(Gate("NOT", (y,)))
        gates.append(Gate("AND", (x, (GATE, len(gates)))))
        gt.append((GATE, len(gates)))
        gates.append(Gate("NOT", (x,)))
        gates.append(Gate("AND", (y, (GATE, len(gates)))))
        lt = (GATE, len(gates))
        gates.append(Gate("OR", (gt[-1], lt)))
        gates.append(Gate("NOT", ((GATE, len(gates)),)))
        eq.append((GATE, len(gates)))
    result = gt[4]
    for i in (3, 2, 1, 0):
        gates.append(Gate("AND", (eq[i], result)))
        gates.append(Gate("OR", (gt[i], (GATE, len(gates)))))
        result = (GATE, len(gates))
    return Circuit(10, gates)


CATALOG: dict[str, object] = {
    "swap-9": _build_swap_9,
    "random-small-4": _build_random_small_4,
    "consequence-8": _build_consequence_8,
    "xor-sequence-8": _build_xor_sequence_8,
    "palindrome-8": _build_palindrome_8,
    "and-tree-8": _build_and_tree_8,
    "add-10": _build_add_10,
    "compare-10": _build_compare_10,
}


def build_named(catalog_id: str) -> Circuit:
    try:
        return CATALOG[catalog_id]()
    except KeyError:
        raise KeyError(f"unknown circuit catalog id {catalog_id!r}") from None


_INTRO = """0. Definitions: A 'circuit' means a boolean circuit with no circle, whose input wires are a fixed number of 0/1 bits, and consisted of `AND`/`OR`/`NOT` gates. For each gates, the input are input wires or the output of other gates.

1. Task overview:
    You are presented with a platform containing a circuit. Your task is to discover the structure of this circuit by interacting with the platform over multiple turns.

2. Goals:
    You have one final goal: You need to know output of circuit gates given every input.

3. Interaction Process:
    To finish the goal, you need to interact with the platform. The interaction process is as follows:
    - The platform will first provide you with the input sizes n
    - In each turn, you can ask the platform for the outputs of every circuit gates with a given input size x=(x_1, x_2, ..., x_n), x_i in {0,1}.
    - Each turn after you ask the platform, you will receive the circuit's gate output in the following format: [y_1, y_2, ..., y_m], y_i in {0,1}, where m is the number of gates, y_i is the output of the i-th gate.

4. Output format in Interaction:
    **You must strictly obey the output format rules, DO NOT output any unrelated text!**:
    Format your queries as: (x_1, x_2, ..., x_n).
    For example, if you want to know the output of circuit given input x=(0,1,1), you should output: (0, 1, 1).

5. Evaluation:
    After reaching the maximum number of allowed interactions, you will be tested on your understanding of the circuit family:
    - You will be given input x=(x_1, x_2, ..., x_n) and you should answer the output of each gate [y_1, y_2, ..., y_m].

6. Circuit Details
   - `AND` and `OR` gates always have exactly two inputs, and `NOT` gates always have one input.
   - There are no restrictions on how many times a gate's output or an input wire can be used as input to other gates.
   - Every circuit in the circuit family contains no loops. For the i-th gate, all inputs must come from either input wires or outputs of gates with indices smaller than i."""


class CircuitEnvironment(Environment):
    style = "function"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.circuit = build_named(spec.id.split("/", 1)[1])
        super().__init__(spec, seed)

    def _build_test_set(self) -> list[TestSample]:
        rng = stable_rng(self.spec.id, self.seed, "tests")
        n = self.circuit.n
        seen: set[tuple[int, ...]] = set()
        samples = []
        while len(samples) < 10:
            bits = tuple(rng.randint(0, 1) for _ in range(n))
            if bits in seen:
                continue
            seen.add(bits)
            expected = simulate(self.circuit, list(bits))
            rendered = "[" + ", ".join(str(b) for b in bits) + "]"
            samples.append(TestSample(rendered, BitListMatch(expected)))
        return samples

    def preamble(self) -> str:
        return (
            _INTRO
            + "\n\nWelcome to the Boolean Circuit Game!\n"
            + f"You are interacting with a blackbox circuit with {self.circuit.n} "
            + f"input wires and {len(self.circuit)} logic gates."
        )

    def explore(self, query: str) -> str:
        bits = _parse_bits(query)
        if bits is None or len(bits) != self.circuit.n:
            return (
                f"Invalid input. Please provide exactly {self.circuit.n} bits of 0/1 "
                f"in the format (x_1, x_2, ..., x_{self.circuit.n})."
            )
        outputs = simulate(self.circuit, bits)
        rendered = "[" + ", ".join(str(b) for b in bits) + "]"
        return (
            f"Gate outputs for your input {rendered}: "
            + " ".join(str(b) for b in outputs)
        )

    def eval_question(self, index: int) -> str:
        lead = ""
        if index == 0:
            lead = (
                "The output format is described in the Evaluation section "
                "previosly. For example:\n[0, 1, 0, 1]\n"
            )
        return (
            lead
            + f"In this turn, given the input {self.samples[index].input}, answer "
            + "the output of the gates in the format we dicussed without any text else."
        )

    def hidden_markers(self) -> list[str]:
        # The gate list itself must never surface before the session ends.
        return [json.dumps(self.circuit.to_dict())]


def _parse_bits(text: str) -> list[int] | None:
    stripped = text.strip()
    if not stripped:
        return None
    if not re.fullmatch(r"[\[\(\)\]\s,01]+", stripped):
        return None
    bits = [int(c) for c in stripped if c in "01"]
    return bits or None


_DESCRIPTIONS = {
    "swap-9": (
        "Easy",
        "For input size n=9, the first 4 output gates copy the last 4 input "
        "wires and the last 5 output gates copy the first 5 input wires; copy "
        "is realized as OR(w, w).",
    ),
    "random-small-4": (
        "Easy",
        "For input size n=4, a frozen 8-gate circuit with no particular "
        "purpose, committed as a literal gate list.",
    ),
    "consequence-8": (
        "Easy",
        "For input size n=8, outputs whether two consecutive input wires are "
        "both 1: b[i] = a[i-1] AND a[i], s[i] = b[i] OR s[i-1].",
    ),
    "xor-sequence-8": (
        "Easy",
        "For input size n=8, computes the prefix XOR s[i] = s[i-1] xor a[i] "
        "with a xor b = (a AND (NOT b)) OR ((NOT a) AND b).",
    ),
    "palindrome-8": (
        "Easy",
        "For input size n=8, checks whether the input is a palindrome and the "
        "first half equals the second half.",
    ),
    "and-tree-8": (
        "Hard",
        "For input size n=8, a 7-gate AND tree whose last gate is the AND of "
        "all input wires.",
    ),
    "add-10": (
        "Hard",
        "For input size n=10, adds the first bit to the binary number formed "
        "by the last 9 bits via a ripple-carry chain.",
    ),
    "compare-10": (
        "Hard",
        "For input size n=10, compares (x_1..x_5) against (y_1..y_5) "
        "lexicographically; the final gate is 1 iff x > y.",
    ),
}


def register_all() -> None:
    for name, (difficulty, description) in _DESCRIPTIONS.items():
        circuit = build_named(name)
        public = (
            f"A hidden boolean circuit with {circuit.n} input wires and "
            f"{len(circuit)} gates."
        )
        register(
            EnvironmentSpec(
                id=f"cri/{name}",
                family="CRI",
                difficulty=difficulty,
                description=description,
                public_description=public,
                default_test_count=10,
                factory=CircuitEnvironment,
            ),
            aliases=[f"cri/{name.rsplit('-', 1)[0]}"] if name[-1].isdigit() else [],
        )
