import random

import pytest

from conftest import GOLDEN
from genutil import context_sequences, prefix_count, random_transcript
from scribeview.errors import (
    InvalidDepthError,
    KeywordNotFoundError,
    NoMatchesError,
    NotANeighborError,
)
from scribeview.wordtree import (
    FOLLOWING,
    PRECEDING,
    WordTreeNode,
    build_tree,
    collect_contexts,
    navigate_tree,
    render_tree,
    tree_to_dict,
)


def walk(node, path=()):
    yield path, node
    for child in node.children:
        yield from walk(child, path + (child.word,))


class TestCollectContexts:
    def test_fixture_contexts(self, nixon):
        contexts = collect_contexts(nixon, "pandas")
        assert len(contexts) == 2
        assert contexts[0].preceding == ("the",)
        assert contexts[0].following == ("arrive", "april", "first")
        assert contexts[1].preceding == ("the",)
        assert contexts[1].following == ("live", "at", "the", "zoo")

    def test_contents_are_case_folded(self, nixon):
        contexts = collect_contexts(nixon, "PANDAS")
        assert "april" in contexts[0].following  # source says "April"

    def test_punctuation_neighbors_skipped(self, nixon):
        # "first" is followed by "." in segment 0; the context ends at "first"
        contexts = collect_contexts(nixon, "first")
        assert contexts[0].following == ()
        assert contexts[0].preceding == ("april", "arrive", "pandas", "the")

    def test_unknown_keyword(self, nixon):
        with pytest.raises(KeywordNotFoundError):
            collect_contexts(nixon, "nixon")

    def test_matches_brute_force_on_random_corpora(self):
        rng = random.Random(0x7EEE)
        for _ in range(40):
            t = random_transcript(rng, max_segments=8, max_tokens=8)
            keyword = t.segments[0].pronunciation_tokens()[0].content
            contexts = collect_contexts(t, keyword)
            assert [
                (c.preceding, c.following) for c in contexts
            ] == context_sequences(t, keyword)


class TestBuildTree:
    def test_fixture_following_shape(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING)
        assert tree.word == "pandas" and tree.count == 2
        assert [c.word for c in tree.children] == ["arrive", "live"]
        arrive = tree.children[0]
        assert [n.word for _, n in walk(arrive)] == ["arrive", "april", "first"]
        live = tree.children[1]
        assert [n.word for _, n in walk(live)] == ["live", "at", "the", "zoo"]
        assert all(n.count == 1 for _, n in walk(tree) if n is not tree)

    def test_fixture_preceding_merges_shared_prefix(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), PRECEDING)
        assert tree.count == 2
        assert len(tree.children) == 1
        assert tree.children[0] == WordTreeNode(word="the", count=2, children=())

    def test_depth_cap(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING, max_depth=2)
        deepest = max(len(path) for path, _ in walk(tree))
        assert deepest == 2

    def test_children_ordered_by_count_then_word(self):
        contexts = collect_contexts_from_sequences(
            [("b",), ("b",), ("a",), ("c",), ("c",)]
        )
        tree = build_tree(contexts, FOLLOWING)
        assert [(c.word, c.count) for c in tree.children] == [
            ("b", 2), ("c", 2), ("a", 1),
        ]

    def test_counts_equal_prefix_counts(self):
        rng = random.Random(0xC0DE)
        for _ in range(30):
            t = random_transcript(rng, max_segments=10, max_tokens=6,
                                  vocab=("pan", "the", "zoo", "at"))
            keyword = t.segments[0].pronunciation_tokens()[0].content
            contexts = collect_contexts(t, keyword)
            sequences = [c.following for c in contexts]
            tree = build_tree(contexts, FOLLOWING)
            for path, node in walk(tree):
                if path:
                    assert node.count == prefix_count(sequences, path)

    def test_shuffle_invariance(self, nixon):
        contexts = collect_contexts(nixon, "the")
        shuffled = contexts[:]
        random.Random(3).shuffle(shuffled)
        assert build_tree(contexts, FOLLOWING) == build_tree(shuffled, FOLLOWING)

    def test_bad_inputs(self, nixon):
        contexts = collect_contexts(nixon, "pandas")
        with pytest.raises(InvalidDepthError):
            build_tree(contexts, FOLLOWING, max_depth=0)
        with pytest.raises(ValueError):
            build_tree(contexts, "upward")
        with pytest.raises(NoMatchesError):
            build_tree([], FOLLOWING)


def collect_contexts_from_sequences(sequences):
    """Fabricate contexts with fixed following-sequences for ordering tests."""
    from scribeview.search import SearchHit
    from scribeview.wordtree import Context

    return [
        Context(hit=SearchHit(0, i, "kw", 0.9), preceding=(), following=seq)
        for i, seq in enumerate(sequences)
    ]


class TestNavigateTree:
    def test_descend(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING)
        live = navigate_tree(tree, "live")
        assert live.word == "live"
        assert navigate_tree(live, "at").word == "at"

    def test_input_is_case_folded(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING)
        assert navigate_tree(tree, "LIVE").word == "live"

    def test_grandchild_is_not_a_neighbor(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING)
        with pytest.raises(NotANeighborError):
            navigate_tree(tree, "zoo")


class TestRendering:
    def test_fixture_matches_golden(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), FOLLOWING)
        golden = (GOLDEN / "wordtree_pandas_following.txt").read_text()
        assert render_tree(tree) + "\n" == golden

    def test_tree_to_dict(self, nixon):
        tree = build_tree(collect_contexts(nixon, "pandas"), PRECEDING)
        assert tree_to_dict(tree) == {
            "word": "pandas",
            "count": 2,
            "children": [{"word": "the", "count": 2, "children": []}],
        }
