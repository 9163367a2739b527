"""
Presentation files.

Line oriented; ``#`` starts a comment::

    rank 4
    orders 3 5 3          # standard relators of the string type
    group string          # optional: involutions r0..r3 instead of s1..s3
    relator (r0 r1 r2)^5

``orders`` may stand in for ``rank``. Without ``orders`` the relators are
taken as the complete presentation.
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from groups.exceptions import PresentationFormatError, WordSyntaxError
from groups.fp import ROTATION, STRING, Presentation, Word, parse_word

from .catalog import string_group, string_rotation

logger = logging.getLogger(__name__)

GROUP_KINDS = {"rotation": ROTATION, "string": STRING}


def _integers(values: List[str], keyword: str, line: int) -> List[int]:
    try:
        return [int(v) for v in values]
    except ValueError:
        raise PresentationFormatError(f"'{keyword}' expects integers, got {' '.join(values)!r}", line)


def parse_presentation(text: str) -> Presentation:
    """
    Parse presentation text.

    Raises:
        PresentationFormatError: unknown directive, missing rank or a bad word
    """
    rank: Optional[int] = None
    orders: Optional[List[int]] = None
    kind = ROTATION
    relator_lines = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "rank":
            values = _integers(rest.split(), keyword, number)
            if len(values) != 1 or values[0] < 2:
                raise PresentationFormatError(f"rank must be a single integer >= 2, got {rest!r}", number)
            rank = values[0]
        elif keyword == "orders":
            orders = _integers(rest.split(), keyword, number)
            if not orders or any(p < 2 for p in orders):
                raise PresentationFormatError(f"orders must be integers >= 2, got {rest!r}", number)
        elif keyword == "group":
            if rest not in GROUP_KINDS:
                raise PresentationFormatError(f"group must be one of {sorted(GROUP_KINDS)}, got {rest!r}", number)
            kind = GROUP_KINDS[rest]
        elif keyword == "relator":
            if not rest:
                raise PresentationFormatError("empty relator", number)
            relator_lines.append((number, rest))
        else:
            raise PresentationFormatError(f"unknown directive {keyword!r}", number)

    if orders is not None:
        if rank is None:
            rank = len(orders) + 1
        elif rank != len(orders) + 1:
            raise PresentationFormatError(f"rank {rank} needs {rank - 1} orders, got {len(orders)}")
    if rank is None:
        raise PresentationFormatError("missing 'rank' or 'orders' line")

    words: List[Word] = []
    for number, body in relator_lines:
        try:
            words.append(parse_word(body, rank, kind))
        except WordSyntaxError as e:
            raise PresentationFormatError(str(e), number) from e

    if orders is None:
        presentation = Presentation(rank, tuple(words), kind)
    elif kind == STRING:
        presentation = string_group(*orders, extra=words)
    else:
        presentation = string_rotation(*orders, extra=words)
    logger.debug(f"Parsed rank {rank} {kind} presentation with {len(presentation.all_relators)} relators")
    return presentation


def load_presentation(path: Union[str, Path]) -> Presentation:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise PresentationFormatError(f"cannot read {path}: {e.strerror}")
    return parse_presentation(text)


def format_presentation(p: Presentation) -> str:
    """Text that parses back to an equivalent presentation (relators listed in full)."""
    lines = [f"rank {p.rank}"]
    if p.kind == STRING:
        lines.append("group string")
    lines.extend(f"relator {w}" for w in p.format())
    return "\n".join(lines) + "\n"
