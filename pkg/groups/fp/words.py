"""
Words in marked generators and presentations built from them.

A word is stored run-length as ``(generator, exponent)`` pairs and is always
kept freely reduced. Rotation presentations use generators ``s1 .. s{n-1}``;
string presentations use involutions ``r0 .. r{n-1}``.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from ..exceptions import WordSyntaxError

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]

ROTATION = "rotation"
STRING = "string"


def free_reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    """Merge adjacent equal generators and drop zero exponents."""
    stack: List[List[int]] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return tuple((g, e) for g, e in stack)


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(tuple((int(g), int(e)) for g, e in self.letters)))

    @classmethod
    def generator(cls, index: int, exponent: int = 1) -> "Word":
        return cls(((index, exponent),))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def generators(self) -> List[int]:
        return sorted({g for g, _ in self.letters})

    def expand(self) -> List[Letter]:
        """Letter-by-letter form, every exponent +1 or -1."""
        result = []
        for g, e in self.letters:
            step = 1 if e > 0 else -1
            result.extend([(g, step)] * abs(e))
        return result

    def substitute(self, images: dict) -> "Word":
        """Replace each generator by a word; inverses are handled automatically."""
        result = Word()
        for g, e in self.letters:
            result = result * (images.get(g, Word.generator(g)) ** e)
        return result

    def __str__(self) -> str:
        return print_word(self)


def print_word(w: Word, letter: str = "s") -> str:
    """Canonical text form, e.g. ``s1 s2^-1 s3^2``; the empty word prints as ``1``."""
    if not w.letters:
        return "1"
    parts = []
    for g, e in w.letters:
        parts.append(f"{letter}{g}" if e == 1 else f"{letter}{g}^{e}")
    return " ".join(parts)


class _WordParser:
    """Recursive descent over ``word := term+ ; term := atom ('^' int)? ; atom := letter int | '(' word ')'``."""

    def __init__(self, text: str, letter: str, allowed: range):
        self.text = text
        self.letter = letter
        self.allowed = allowed
        self.pos = 0

    def error(self, message: str, position: Optional[int] = None):
        raise WordSyntaxError(message, self.pos if position is None else position, self.text)

    def skip_spaces(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_spaces()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self, signed: bool) -> int:
        self.skip_spaces()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            self.error("expected integer", start)
        return int(self.text[start:self.pos])

    def word(self, depth: int) -> Word:
        result = Word()
        terms = 0
        while True:
            ch = self.peek()
            if ch == "" or ch == ")":
                break
            result = result * self.term(depth)
            terms += 1
        if terms == 0:
            self.error("expected a term")
        return result

    def term(self, depth: int) -> Word:
        atom = self.atom(depth)
        if self.peek() == "^":
            self.pos += 1
            return atom ** self.integer(signed=True)
        return atom

    def atom(self, depth: int) -> Word:
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            inner = self.word(depth + 1)
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == self.letter:
            self.pos += 1
            index = self.integer(signed=False)
            if index not in self.allowed:
                self.error(
                    f"generator {self.letter}{index} out of range "
                    f"{self.letter}{self.allowed.start}..{self.letter}{self.allowed.stop - 1}",
                    start,
                )
            return Word.generator(index)
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {ch!r}")

    def parse(self) -> Word:
        if self.text.strip() == "1":
            return Word()
        w = self.word(0)
        if self.peek() != "":
            self.error("unbalanced ')'")
        return w


def generator_range(rank: int, kind: str = ROTATION) -> range:
    if kind == ROTATION:
        return range(1, rank)
    if kind == STRING:
        return range(0, rank)
    raise ValueError(f"Unknown presentation kind {kind}")


def parse_word(text: str, rank: int, kind: str = ROTATION) -> Word:
    """
    Parse a word in the generators of a rank-``rank`` presentation.

    Args:
        text: Word text, e.g. ``(s2^-1 s3)^2 s2 s3^-1``
        rank: Rank n; rotation generators are s1..s{n-1}, string ones r0..r{n-1}
        kind: ``rotation`` or ``string``

    Returns:
        Freely reduced Word
    """
    letter = "s" if kind == ROTATION else "r"
    return _WordParser(text, letter, generator_range(rank, kind)).parse()


@dataclass(frozen=True)
class Presentation:
    """
    Generators and relators of a finitely presented quotient.

    ``orders`` records the nominal Schlaefli type when the relators came from
    one; it is used to flag degenerate quotients.
    """

    rank: int
    relators: Tuple[Word, ...] = ()
    kind: str = ROTATION
    orders: Optional[Tuple[int, ...]] = None
    extra: Tuple[Word, ...] = field(default=())

    def __post_init__(self):
        if self.rank < 2:
            raise ValueError(f"Rank must be at least 2, got {self.rank}")
        object.__setattr__(self, "relators", tuple(self.relators))
        object.__setattr__(self, "extra", tuple(self.extra))
        allowed = self.generators
        for w in self.relators + self.extra:
            bad = [g for g in w.generators() if g not in allowed]
            if bad:
                raise WordSyntaxError(f"relator {print_word(w, self.letter)} uses generators outside {self.letter}{allowed.start}..{self.letter}{allowed.stop - 1}")

    @property
    def generators(self) -> range:
        return generator_range(self.rank, self.kind)

    @property
    def letter(self) -> str:
        return "s" if self.kind == ROTATION else "r"

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @property
    def all_relators(self) -> Tuple[Word, ...]:
        return self.relators + self.extra

    def with_relators(self, words: Sequence[Word]) -> "Presentation":
        """Same presentation with additional (non-standard) relators."""
        return Presentation(self.rank, self.relators, self.kind, self.orders, self.extra + tuple(words))

    def format(self) -> List[str]:
        return [print_word(w, self.letter) for w in self.all_relators]
