"""
Word tokenization with character offsets and rule-based sentence
segmentation.

Tokens are produced by splitting on whitespace and detaching leading and
trailing punctuation characters one by one. Characters inside a word
(hyphens, apostrophes, periods as in "U.S") stay attached. Offsets are
Python string indices, i.e. Unicode scalar values.
"""
import re
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

ABBREVIATIONS_FILE = Path(__file__).parent / "resources" / "abbreviations.txt"

TERMINALS = frozenset(".!?")
CLOSERS = frozenset("\"')]}»”’")
OPENERS = frozenset("\"'([{«“‘")

_CHUNK = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    text: str
    char_start: int
    char_end: int
    lower: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.char_start >= self.char_end:
            raise ValueError(
                f"Token [{self.text}] has an empty offset range "
                f"({self.char_start}, {self.char_end})"
            )
        object.__setattr__(self, "lower", self.text.lower())


def is_punctuation(char):
    return unicodedata.category(char).startswith("P")


def tokenize(text):
    """
    Splits text into tokens. Every non-whitespace character of the input
    belongs to exactly one token, so the tokens plus the skipped whitespace
    reconstruct the input.
    """

    tokens = []

    for chunk in _CHUNK.finditer(text):
        start, end = chunk.span()

        while start < end and is_punctuation(text[start]):
            tokens.append(Token(text[start], start, start + 1))
            start += 1

        trailing = []
        while end > start and is_punctuation(text[end - 1]):
            trailing.append(Token(text[end - 1], end - 1, end))
            end -= 1

        if start < end:
            tokens.append(Token(text[start:end], start, end))

        tokens.extend(reversed(trailing))

    return tokens


@lru_cache(maxsize=None)
def load_abbreviations(path=ABBREVIATIONS_FILE):
    """Reads an abbreviation list: one lowercase entry per line, '#' comments"""

    with open(path, "r", encoding="utf8") as abbreviations:
        return frozenset(
            line.strip()
            for line in abbreviations
            if line.strip() and not line.startswith("#")
        )


def _is_abbreviation(tokens, index, abbreviations):
    if tokens[index].text != "." or index == 0:
        return False

    previous = tokens[index - 1]
    if previous.char_end != tokens[index].char_start:
        return False

    return previous.lower + "." in abbreviations


def _starts_sentence(source, boundary_end, next_token):
    gap = source[boundary_end : next_token.char_start]
    if not gap or not gap.isspace():
        return False

    position = next_token.char_start
    while position < len(source) and source[position] in OPENERS:
        position += 1

    if position >= len(source):
        return False

    char = source[position]
    return char.isupper() or char.isdigit()


def sentence_spans(tokens, source, abbreviations=None):
    """
    Groups tokens into sentences, returned as (start_token, end_token_exclusive)
    pairs that partition range(len(tokens)).

    A sentence ends after a '.', '!' or '?' token (plus any closing quotes or
    brackets glued to it) when whitespace follows and the next word starts with
    an uppercase letter or a digit. A period glued to a listed abbreviation
    never ends a sentence.
    """

    if abbreviations is None:
        abbreviations = load_abbreviations()

    count = len(tokens)
    if count == 0:
        return []

    spans = []
    start = 0
    index = 0

    while index < count:
        token = tokens[index]

        if token.text not in TERMINALS or _is_abbreviation(
            tokens, index, abbreviations
        ):
            index += 1
            continue

        last = index
        while (
            last + 1 < count
            and tokens[last + 1].char_start == tokens[last].char_end
            and (tokens[last + 1].text in CLOSERS or tokens[last + 1].text in TERMINALS)
        ):
            last += 1

        if last + 1 < count and _starts_sentence(
            source, tokens[last].char_end, tokens[last + 1]
        ):
            spans.append((start, last + 1))
            start = last + 1

        index = last + 1

    spans.append((start, count))

    return spans


def span_text(tokens, start, end, source):
    """Verbatim source text covered by tokens[start:end]"""

    if start >= end:
        return ""

    return source[tokens[start].char_start : tokens[end - 1].char_end]
