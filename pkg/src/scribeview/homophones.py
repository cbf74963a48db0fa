"""Curated homophone lookup with a Soundex fallback for near matches.

The dictionary ships as a repo asset: one comma-separated group per line,
lines starting with ``#`` and blank lines ignored. Groups are disjoint sets
of at least two lowercase words that share a pronunciation.

Soundex key collisions are far weaker evidence than curated groups, so the
fallback is a separate operation and its results are labeled distinctly,
never merged into homophones_of.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InconsistentDictionaryError, InvalidGroupError, IoError, UnencodableError

BUNDLED_DICTIONARY = "assets/homophones.csv"

_SOUNDEX_CODES = {
    **dict.fromkeys("bfpv", "1"),
    **dict.fromkeys("cgjkqsxz", "2"),
    **dict.fromkeys("dt", "3"),
    "l": "4",
    **dict.fromkeys("mn", "5"),
    "r": "6",
}
_ASCII_LETTERS = set("abcdefghijklmnopqrstuvwxyz")


@dataclass(frozen=True)
class HomophoneDictionary:
    groups: tuple[tuple[str, ...], ...]
    index: dict  # word -> group position

    def words(self) -> list[str]:
        return sorted(self.index)


def _parse_lines(lines, source: str) -> HomophoneDictionary:
    groups: list[tuple[str, ...]] = []
    index: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words = [w.strip().casefold() for w in line.split(",") if w.strip()]
        if len(words) < 2:
            raise InvalidGroupError(
                f"invalid group: {source} line {lineno} has fewer than 2 words"
            )
        if len(set(words)) != len(words):
            raise InconsistentDictionaryError(
                f"inconsistent dictionary: {source} line {lineno} repeats a word"
            )
        for w in words:
            if w in index:
                raise InconsistentDictionaryError(
                    f"inconsistent dictionary: {w!r} appears in more than one group"
                )
            index[w] = len(groups)
        groups.append(tuple(sorted(words)))
    return HomophoneDictionary(groups=tuple(groups), index=index)


def load_dictionary(path: str | Path) -> HomophoneDictionary:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read homophone dictionary {path}: {exc}") from exc
    return _parse_lines(text.splitlines(), str(path))


def bundled_dictionary() -> HomophoneDictionary:
    text = resources.files(__package__).joinpath(BUNDLED_DICTIONARY).read_text("utf-8")
    return _parse_lines(text.splitlines(), BUNDLED_DICTIONARY)


def homophones_of(dictionary: HomophoneDictionary, word: str) -> list[str]:
    """Curated group members for the word, minus the word itself."""
    folded = word.casefold()
    gid = dictionary.index.get(folded)
    if gid is None:
        return []
    return sorted(w for w in dictionary.groups[gid] if w != folded)


def phonetic_key(word: str) -> str:
    """Soundex: initial letter plus up to three digit codes.

    Letters outside the code table (vowels, h, w, y) are dropped before
    adjacent duplicate digits are collapsed, and anything that is not an
    ASCII letter is ignored entirely.
    """
    letters = [c for c in word.casefold() if c in _ASCII_LETTERS]
    if not letters:
        raise UnencodableError(f"unencodable: {word!r} contains no letters")
    digits = [_SOUNDEX_CODES[c] for c in letters[1:] if c in _SOUNDEX_CODES]
    collapsed: list[str] = []
    for d in digits:
        if not collapsed or collapsed[-1] != d:
            collapsed.append(d)
    return (letters[0].upper() + "".join(collapsed) + "000")[:4]


def phonetic_matches(dictionary: HomophoneDictionary, word: str) -> list[str]:
    """Dictionary words sharing the query's Soundex key.

    Excludes the word itself and anything already in its curated group;
    callers present these as "phonetic-key match", not as homophones.
    """
    key = phonetic_key(word)
    folded = word.casefold()
    curated = set(homophones_of(dictionary, folded))
    out = []
    for candidate in dictionary.index:
        if candidate == folded or candidate in curated:
            continue
        try:
            if phonetic_key(candidate) == key:
                out.append(candidate)
        except UnencodableError:
            continue
    return sorted(out)
