"""Context word trees: what precedes or follows a keyword, with counts.

Contexts never cross a segment boundary. Shared prefixes merge exactly (no
pattern mining), so every count is verifiable by enumeration: the root count
equals the number of keyword hits and child counts at a node can never sum
past the node's own count. Words are case-folded; the UI scales node size
from the raw counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidDepthError, KeywordNotFoundError, NoMatchesError, NotANeighborError
from .model import Transcript
from .search import SearchHit, SearchQuery, search, strip_punctuation

FOLLOWING = "following"
PRECEDING = "preceding"
DIRECTIONS = (FOLLOWING, PRECEDING)

DEFAULT_MAX_DEPTH = 5


@dataclass(frozen=True)
class Context:
    """One keyword occurrence with its same-segment neighbors, nearest-first."""

    hit: SearchHit
    preceding: tuple[str, ...]
    following: tuple[str, ...]


@dataclass(frozen=True)
class WordTreeNode:
    word: str
    count: int
    children: tuple["WordTreeNode", ...]


def collect_contexts(transcript: Transcript, keyword: str) -> list[Context]:
    """One Context per token-exact, case-insensitive hit of the keyword.

    Neighboring punctuation tokens are skipped; contents are case-folded.
    """
    hits = search(transcript, SearchQuery(term=keyword))
    if not hits:
        raise KeywordNotFoundError(f"keyword not found: {keyword!r}")
    contexts = []
    for hit in hits:
        segment = transcript.segments[hit.segment_index]
        words = [
            (ti, tok.content.casefold())
            for ti, tok in enumerate(segment.tokens)
            if tok.is_pronunciation
        ]
        preceding = tuple(w for ti, w in reversed(words) if ti < hit.token_index)
        following = tuple(w for ti, w in words if ti > hit.token_index)
        contexts.append(Context(hit=hit, preceding=preceding, following=following))
    return contexts


def build_tree(
    contexts: list[Context], direction: str, max_depth: int = DEFAULT_MAX_DEPTH
) -> WordTreeNode:
    """Merge context sequences into a tree rooted at the keyword.

    Each context contributes one path, truncated at max_depth; counts
    accumulate along shared prefixes.
    """
    if max_depth < 1:
        raise InvalidDepthError(f"invalid depth: {max_depth}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if not contexts:
        raise NoMatchesError("no matches")

    root_word = strip_punctuation(contexts[0].hit.content).casefold()
    counts: dict[tuple[str, ...], int] = {}
    for ctx in contexts:
        seq = ctx.following if direction == FOLLOWING else ctx.preceding
        for depth in range(1, min(len(seq), max_depth) + 1):
            path = tuple(seq[:depth])
            counts[path] = counts.get(path, 0) + 1

    def assemble(path: tuple[str, ...], count: int) -> WordTreeNode:
        child_paths = [
            (p, c) for p, c in counts.items() if len(p) == len(path) + 1 and p[: len(path)] == path
        ]
        children = tuple(
            assemble(p, c) for p, c in sorted(child_paths, key=lambda pc: (-pc[1], pc[0][-1]))
        )
        word = path[-1] if path else root_word
        return WordTreeNode(word=word, count=count, children=children)

    return assemble((), len(contexts))


def navigate_tree(node: WordTreeNode, child_word: str) -> WordTreeNode:
    """Descend to a direct child by word; anything deeper is not a neighbor."""
    wanted = child_word.casefold()
    for child in node.children:
        if child.word == wanted:
            return child
    raise NotANeighborError(f"not a neighbor: {child_word!r}")


def render_tree(node: WordTreeNode, indent: int = 0) -> str:
    """Plain-text rendering, depth-first, two spaces per level."""
    lines = [f"{'  ' * indent}{node.word} ({node.count})"]
    for child in node.children:
        lines.append(render_tree(child, indent + 1))
    return "\n".join(lines)


def tree_to_dict(node: WordTreeNode) -> dict:
    return {
        "word": node.word,
        "count": node.count,
        "children": [tree_to_dict(c) for c in node.children],
    }
