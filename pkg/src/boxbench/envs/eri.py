"""Cipher catalog: fixed hidden rules mapping plaintext to ciphertext.

Plaintext alphabet is uppercase/lowercase English letters plus spaces.
Space handling varies per entry (kept in place, dropped, or consumed by
the layout) and is part of each cipher's frozen contract.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from importlib import resources

from ..registry import Environment, EnvironmentSpec, ExactMatch, TestSample, register
from ..seeding import stable_rng

LOWER = string.ascii_lowercase
UPPER = string.ascii_uppercase


def _letters_only(text: str) -> str:
    return text.replace(" ", "")


# -- per-letter value schemes -------------------------------------------------
def _val_lower_first(c: str) -> int:
    """a=0..z=25, A=26..Z=51."""
    return LOWER.index(c) if c.islower() else 26 + UPPER.index(c)


def _chr_lower_first(v: int) -> str:
    return LOWER[v] if v < 26 else UPPER[v - 26]


def _val_upper_first(c: str) -> int:
    """A=0..Z=25, a=26..z=51."""
    return UPPER.index(c) if c.isupper() else 26 + LOWER.index(c)


def _chr_upper_first(v: int) -> str:
    return UPPER[v] if v < 26 else LOWER[v - 26]


# -- ciphers ------------------------------------------------------------------
def caesar8(plaintext: str) -> str:
    out = []
    for c in plaintext:
        if c == " ":
            continue
        table = LOWER if c.islower() else UPPER
        out.append(table[(table.index(c) + 8) % 26])
    return "".join(out)


def bacon_xy(plaintext: str) -> str:
    out = []
    for c in plaintext:
        if c == " ":
            continue
        index = LOWER.index(c.lower())
        value = index if index <= 12 else index + 6
        pattern = format(value, "05b")
        zero, one = ("x", "y") if c.islower() else ("X", "Y")
        out.append(pattern.replace("0", zero).replace("1", one))
    return "".join(out)


def zigzag3(plaintext: str) -> str:
    letters = _letters_only(plaintext)
    rails: list[list[str]] = [[], [], []]
    row, direction = 0, 1
    for c in letters:
        rails[row].append(c)
        if row == 2:
            direction = -1
        elif row == 0:
            direction = 1
        row += direction
    return "".join("".join(rail) for rail in rails)


def fibonacci_shift(plaintext: str) -> str:
    out = []
    a, b = 1, 1
    for c in plaintext:
        if c == " ":
            out.append(" ")
            continue
        out.append(_chr_lower_first((_val_lower_first(c) + a) % 52))
        a, b = b, (a + b) % 52
    return "".join(out)


def index_shift(plaintext: str) -> str:
    out = []
    for i, c in enumerate(plaintext):
        if c == " ":
            out.append(" ")
        else:
            out.append(_chr_lower_first((_val_lower_first(c) + i) % 52))
    return "".join(out)


SUBSTITUTION_TABLE = "phqgiumeaylnofdxjkrcvstzwb"


def substitution(plaintext: str) -> str:
    out = []
    for c in plaintext:
        if c == " ":
            out.append(" ")
        elif c.islower():
            out.append(SUBSTITUTION_TABLE[LOWER.index(c)])
        else:
            out.append(SUBSTITUTION_TABLE[UPPER.index(c)].upper())
    return "".join(out)


def _curve_read(letters: str, width: int) -> str:
    """Serpentine read-out of a row-major table, rightmost column first.

    The first (rightmost occupied) column is read bottom-up; direction
    alternates per column.  Column groups are joined with single spaces.
    """
    if not letters:
        return ""
    rows = [letters[i : i + width] for i in range(0, len(letters), width)]
    groups = []
    upward = True
    for col in range(min(width, len(letters)) - 1, -1, -1):
        cells = [row[col] for row in rows if col < len(row)]
        groups.append("".join(reversed(cells)) if upward else "".join(cells))
        upward = not upward
    return " ".join(groups)


def curve6(plaintext: str) -> str:
    return _curve_read(_letters_only(plaintext), 6)


def dynamic_curve(plaintext: str) -> str:
    letters = _letters_only(plaintext)
    return _curve_read(letters, (len(letters) % 3) + 3)


def sequential_feedback(plaintext: str) -> str:
    out = []
    shift = _val_upper_first("b")  # initial hidden letter
    for c in plaintext:
        if c == " ":
            out.append(" ")
            continue
        enc = _chr_upper_first((_val_upper_first(c) + shift) % 52)
        out.append(enc)
        shift = _val_upper_first(enc)
    return "".join(out)


def vigenere_memory(plaintext: str) -> str:
    keyword = "MEMORY"
    out = []
    k = 0
    for c in plaintext:
        if c == " ":
            out.append(" ")
            continue
        shift = UPPER.index(keyword[k % len(keyword)])
        out.append(UPPER[(UPPER.index(c.upper()) + shift) % 26])
        k += 1
    return "".join(out)


HILL_KEY = ((3, 5), (1, 2))


def hill(plaintext: str) -> str:
    letters = _letters_only(plaintext).lower()
    if len(letters) % 2:
        letters += "x"
    cipher = []
    for i in range(0, len(letters), 2):
        v = (LOWER.index(letters[i]), LOWER.index(letters[i + 1]))
        for row in HILL_KEY:
            cipher.append(LOWER[(row[0] * v[0] + row[1] * v[1]) % 26])
    # Spaces are kept: rebuild around the original space positions, with
    # any padding letter appended at the end.
    out = []
    it = iter(cipher)
    for c in plaintext:
        out.append(" " if c == " " else next(it))
    out.extend(it)
    return "".join(out)


def hill_decrypt(ciphertext: str) -> str:
    """Inverse-key decryption; recovers the padded, case-folded plaintext."""
    # det = 1, so the adjugate ((2, -5), (-1, 3)) mod 26 is the inverse key.
    inverse = ((2, 21), (25, 3))
    letters = _letters_only(ciphertext).lower()
    plain = []
    for i in range(0, len(letters), 2):
        v = (LOWER.index(letters[i]), LOWER.index(letters[i + 1]))
        for row in inverse:
            plain.append(LOWER[(row[0] * v[0] + row[1] * v[1]) % 26])
    return "".join(plain)


def positional_keyword(plaintext: str) -> str:
    keyword = "Jackal"
    out = []
    k = 0
    for c in plaintext:
        if c == " ":
            out.append(" ")
            continue
        shift = _val_upper_first(keyword[k % len(keyword)])
        out.append(_chr_upper_first((_val_upper_first(c) + shift) % 52))
        k += 1
    return "".join(out)


def _playfair_grid() -> str:
    seen = []
    for c in "SECURITY" + UPPER:
        if c == "J" or c in seen:
            continue
        seen.append(c)
    return "".join(seen)


PLAYFAIR_GRID = _playfair_grid()  # 25 letters, I/J merged


def playfair(plaintext: str) -> str:
    letters = _letters_only(plaintext).upper().replace("J", "I")
    pairs = []
    i = 0
    while i < len(letters):
        a = letters[i]
        b = letters[i + 1] if i + 1 < len(letters) else None
        if b is None or a == b:
            pairs.append((a, "X" if a != "X" else "Q"))
            i += 1
        else:
            pairs.append((a, b))
            i += 2
    out = []
    for a, b in pairs:
        ra, ca = divmod(PLAYFAIR_GRID.index(a), 5)
        rb, cb = divmod(PLAYFAIR_GRID.index(b), 5)
        if ra == rb:
            out.append(PLAYFAIR_GRID[ra * 5 + (ca + 1) % 5])
            out.append(PLAYFAIR_GRID[rb * 5 + (cb + 1) % 5])
        elif ca == cb:
            out.append(PLAYFAIR_GRID[((ra + 1) % 5) * 5 + ca])
            out.append(PLAYFAIR_GRID[((rb + 1) % 5) * 5 + cb])
        else:
            out.append(PLAYFAIR_GRID[ra * 5 + cb])
            out.append(PLAYFAIR_GRID[rb * 5 + ca])
    return "".join(out)


@dataclass(frozen=True)
class CipherConfig:
    id: str
    kind: str
    difficulty: str
    encrypt: callable = field(repr=False)
    description: str = ""
    parameters: dict = field(default_factory=dict)


CATALOG: dict[str, CipherConfig] = {}


def _add(config: CipherConfig) -> None:
    CATALOG[config.id] = config


_add(CipherConfig(
    "caesar-8", "Caesar", "Easy", caesar8,
    "Each letter shifts 8 places down the alphabet, case-sensitive; "
    "blank spaces are dropped.",
    {"shift": 8},
))
_add(CipherConfig(
    "bacon-xy", "BaconXY", "Easy", bacon_xy,
    "Each letter becomes a 5-bit x/y pattern of its piecewise alphabet "
    "value (index for a-m, index+6 for n-z); case of x/y mirrors the "
    "input case; spaces are dropped.",
    {"zero": "x", "one": "y"},
))
_add(CipherConfig(
    "zigzag-3", "Zigzag", "Easy", zigzag3,
    "Letters are written in a 3-rail zigzag (down then up) and read row "
    "by row; spaces are dropped.",
    {"rails": 3},
))
_add(CipherConfig(
    "fibonacci", "Fibonacci", "Easy", fibonacci_shift,
    "The i-th letter shifts by the i-th Fibonacci number (1, 1, 2, 3, "
    "5, ...) over the 52-letter alphabet a-z then A-Z; spaces are kept "
    "and do not consume a shift.",
    {},
))
_add(CipherConfig(
    "index-shift", "IndexShift", "Easy", index_shift,
    "Each letter shifts by its 0-based string position over the "
    "52-letter alphabet a-z then A-Z; spaces are kept.",
    {},
))
_add(CipherConfig(
    "substitution", "Substitution", "Easy", substitution,
    "Fixed substitution table, case preserved, spaces kept.",
    {"table": SUBSTITUTION_TABLE},
))
_add(CipherConfig(
    "curve-6", "CurveTable", "Easy", curve6,
    "Letters fill a 6-column table row by row; the ciphertext reads "
    "columns serpentine from rightmost to leftmost starting upward, "
    "groups separated by spaces.",
    {"width": 6},
))
_add(CipherConfig(
    "sequential-feedback", "SequentialFeedback", "Hard", sequential_feedback,
    "Each letter shifts by the value of the previous ciphertext letter "
    "(initial hidden letter 'b') over the 52-letter alphabet A-Z then "
    "a-z; spaces are kept.",
    {"seed_letter": "b"},
))
_add(CipherConfig(
    "dynamic-curve", "DynamicCurve", "Hard", dynamic_curve,
    "Curve table whose width is (letter count mod 3) + 3.",
    {},
))
_add(CipherConfig(
    "vigenere-memory", "Vigenere", "Hard", vigenere_memory,
    "Vigenere with keyword MEMORY, case-insensitive (output uppercase), "
    "spaces kept and not consuming key letters.",
    {"keyword": "MEMORY"},
))
_add(CipherConfig(
    "hill", "Hill", "Hard", hill,
    "Hill cipher with key matrix [[3, 5], [1, 2]] over 2-letter column "
    "vectors mod 26, case-insensitive, output lowercase, short final "
    "block padded with 'x', spaces kept in place.",
    {"key": [[3, 5], [1, 2]]},
))
_add(CipherConfig(
    "positional-keyword", "PositionalKeyword", "Hard", positional_keyword,
    "Keyword Jackal written repeatedly over the letters; ciphertext "
    "value is plaintext value plus keyword value mod 52 over A-Z then "
    "a-z; spaces are kept.",
    {"keyword": "Jackal"},
))
_add(CipherConfig(
    "playfair", "Playfair", "Hard", playfair,
    "Playfair over a 5x5 grid built from SECURITY with I/J merged; "
    "uppercase output; 'X' fills duplicate pairs and odd length; spaces "
    "are removed.",
    {"keyword": "SECURITY"},
))


_INTRO = """1. Task overview:
- The user transforms one string into another based on a fixed rule, but you don't know what the fixed rule is. You need to figure out this rule by interacting with the user in multiple turns.

2. Goal:
- By interacting with the user within given interaction turns, you need to understand the fixed rule of transforming one string into another.

3. User property:
- The user will remind you the remaining number of turns in each turn.
- The user will output transformed string in each turn.

4. Interaction rules:
- Rule 1: You must only assign one string in each turn. You can assign any string freely, but make sure the string **only contains uppercase or lowercase English letters (A-Z, a-z) and blank space**. Then you will receive corresponding transformed string from the user.

5. Output format:
- You must strictly obey the output format rules: **Only output the string**. DO NOT output any unrelated text or symbols.
- If you understand the transforming rule before reaching given interaction turns, keep interacting with the user to make sure you don't miss any details.

6. Evaluation:
- When the given number of interactions is reached, you will be given several test strings and you need to output corresponding transformed string. **You MUST ONLY output the value, DO NOT contain any other text.**"""

_VALID_CHARS = set(string.ascii_letters + " ")


def _phrase_pool() -> list[str]:
    return (
        resources.files("boxbench.data").joinpath("common_words.txt")
        .read_text()
        .split()
    )


class CipherEnvironment(Environment):
    style = "function"

    def __init__(self, spec: EnvironmentSpec, seed: int):
        self.config = CATALOG[spec.id.split("/", 1)[1]]
        super().__init__(spec, seed)

    def _build_test_set(self) -> list[TestSample]:
        rng = stable_rng(self.spec.id, self.seed, "tests")
        pool = _phrase_pool()
        samples = []
        seen = set()
        while len(samples) < 8:
            words = [rng.choice(pool) for _ in range(rng.randint(1, 3))]
            if rng.random() < 0.5:
                words = [w.capitalize() for w in words]
            plaintext = " ".join(words)
            if plaintext in seen:
                continue
            seen.add(plaintext)
            samples.append(
                TestSample(plaintext, ExactMatch(self.config.encrypt(plaintext)))
            )
        return samples

    def preamble(self) -> str:
        return _INTRO

    def explore(self, query: str) -> str:
        if not set(query) <= _VALID_CHARS:
            return (
                "Invalid input. Your string must only contain uppercase or "
                "lowercase English letters (A-Z, a-z) and blank space."
            )
        return self.config.encrypt(query)

    def eval_question(self, index: int) -> str:
        return (
            "Now answer the question: What's the output of the blackbox when "
            f"the input plaintext is '{self.samples[index].input}'?"
        )

    def hidden_markers(self) -> list[str]:
        markers = [self.config.kind, self.config.description]
        markers += [str(v) for v in self.config.parameters.values() if str(v) != "8"]
        return markers


def register_all() -> None:
    for name, config in CATALOG.items():
        register(
            EnvironmentSpec(
                id=f"eri/{name}",
                family="ERI",
                difficulty=config.difficulty,
                description=config.description,
                public_description=(
                    "A hidden rule transforms strings of English letters and "
                    "spaces into ciphertext."
                ),
                default_test_count=8,
                factory=CipherEnvironment,
            )
        )
