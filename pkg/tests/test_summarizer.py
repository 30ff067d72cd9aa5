import math
import random

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from qareader.summarizer import (
    EmptySentenceError,
    KeySentenceError,
    PoolingMode,
    Summary,
    VectorLengthError,
    apply_summary,
    cosine,
    pool,
    retain_curve_frame,
    retain_rate,
    select_key_sentence,
    summarize,
    truncate_around,
)
from tests.test_utils import (
    example,
    one_hot_table,
    random_table,
    sentence_example,
    sentences,
    vocabulary,
)

GREEK = "Alpha beta. Gamma delta. Epsilon zeta."
GREEK_WORDS = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]


@pytest.mark.parametrize(
    "mode, expected", [(PoolingMode.MEAN, [2.0, 2.0]), (PoolingMode.MAX, [3.0, 3.0])]
)
def test_pool(mode, expected):
    assert_array_equal(pool([[1.0, 3.0], [3.0, 1.0]], mode), expected)


@pytest.mark.parametrize("mode", ["max", "mean"])
def test_pool_single_row(mode):
    assert_array_equal(pool([[1.5, -2.0]], mode), [1.5, -2.0])


def test_pool_empty():
    with pytest.raises(EmptySentenceError):
        pool(np.zeros((0, 3)), PoolingMode.MAX)


def test_cosine():
    assert cosine([0.3, -2.0, 5.0], [0.3, -2.0, 5.0]) == pytest.approx(1.0)
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(1 / math.sqrt(2))
    assert cosine([0.0, 0.0], [1.0, 0.0]) == 0.0


def test_cosine_length_mismatch():
    with pytest.raises(VectorLengthError):
        cosine([1.0, 0.0], [1.0, 0.0, 0.0])


def test_single_sentence_is_key():
    ex = example("Just one sentence here.", "what?", [("one", 5)])
    assert select_key_sentence(ex, one_hot_table(["one"]), PoolingMode.MAX)[0] == 0


@pytest.mark.parametrize("mode", [PoolingMode.MAX, PoolingMode.MEAN])
def test_key_sentence_shares_a_word(mode):
    ex = example(GREEK, "Where is zeta?", [("beta", 6)])
    index, similarity = select_key_sentence(ex, one_hot_table(GREEK_WORDS), mode)

    assert index == 2
    assert similarity > 0.0


def test_identical_question_and_sentence():
    ex = example(GREEK, "Gamma delta.", [("beta", 6)])
    index, similarity = select_key_sentence(
        ex, one_hot_table(GREEK_WORDS), PoolingMode.MEAN
    )

    assert index == 1
    assert similarity == pytest.approx(1.0)


def test_ties_go_to_the_first_sentence():
    table = one_hot_table(GREEK_WORDS)

    ex = example("Alpha beta. Alpha beta.", "beta", [("beta", 6)])
    assert select_key_sentence(ex, table, PoolingMode.MAX)[0] == 0

    ex = example(GREEK, "unknown words only", [("beta", 6)])
    assert select_key_sentence(ex, table, PoolingMode.MAX) == (0, 0.0)


def test_key_sentence_is_the_argmax():
    rng = random.Random(3)

    for seed in range(20):
        lengths = [rng.randint(2, 6) for _ in range(rng.randint(1, 6))]
        ex = sentence_example(lengths, question="S1 w0x1 w2x1")
        table = random_table(vocabulary([ex]), 5, seed=seed)

        for mode in PoolingMode:
            key, best = select_key_sentence(ex, table, mode)
            question = pool([table[t.lower] for t in ex.question_tokens], mode)

            for index in range(len(ex.sentence_spans)):
                rows = [table[t.lower] for t in ex.sentence_tokens(index)]
                similarity = cosine(pool(rows, mode), question)
                assert similarity <= best
                if index < key:
                    assert similarity < best


def test_short_document_is_kept_whole():
    ex = sentence_example([4, 6])
    assert truncate_around(ex, 1, 600).window == (0, 10)


def test_following_sentence_first():
    ex = sentence_example([4, 4, 4])
    summary = truncate_around(ex, 1, 8)

    assert summary.window == (4, 12)
    assert summary.length == 8


def test_partial_sentence_on_the_side_grown_last():
    ex = sentence_example([4, 4, 4])

    assert truncate_around(ex, 1, 10).window == (2, 12)
    assert truncate_around(ex, 1, 6).window == (4, 10)
    assert truncate_around(ex, 2, 6).window == (6, 12)


def test_budget_smaller_than_key_sentence():
    ex = sentence_example([4, 6, 4])
    assert truncate_around(ex, 1, 3).window == (4, 7)


def test_truncate_errors():
    ex = sentence_example([4, 4])

    with pytest.raises(KeySentenceError):
        truncate_around(ex, 2, 4)

    with pytest.raises(ValueError):
        truncate_around(ex, 0, 0)


def test_windows_are_nested():
    rng = random.Random(5)

    for _ in range(50):
        lengths = [rng.randint(2, 7) for _ in range(rng.randint(1, 7))]
        ex = sentence_example(lengths)
        n = len(ex.doc_tokens)

        for key in range(len(lengths)):
            previous = None
            for budget in range(1, n + 3):
                start, end = truncate_around(ex, key, budget).window

                assert 0 <= start < end <= n
                assert end - start == min(budget, n)
                if previous is not None:
                    assert start <= previous[0] and previous[1] <= end
                previous = (start, end)

                key_start = ex.sentence_spans[key][0]
                assert start <= key_start < end


def test_summarize():
    ex = example(GREEK, "Where is zeta?", [("beta", 6)])
    summary = summarize(ex, one_hot_table(GREEK_WORDS), PoolingMode.MAX, 3)

    assert summary.key_sentence_index == 2
    assert summary.window == (6, 9)
    assert summary.budget == 3
    assert ex.text(*summary.window) == "Epsilon zeta."


def test_apply_summary():
    ex = sentence_example([4, 4, 4], gold=9)
    restricted = apply_summary(ex, Summary((4, 12), 1, 0.5, 8))

    assert len(restricted.doc_tokens) == 8
    assert restricted.sentence_spans == ((0, 4), (4, 8))
    assert restricted.gold_spans == ((5, 6),)
    assert restricted.text(5, 6) == "w2x1"

    assert apply_summary(ex, Summary((0, 8), 0, 0.5, 8)) is None


def test_summary_contains():
    summary = Summary((2, 6), 0, 0.0, 4)

    assert summary.contains((2, 6))
    assert summary.contains((3, 4))
    assert not summary.contains((1, 3))
    assert not summary.contains((5, 7))


def synthetic_examples(count, seed):
    rng = random.Random(seed)
    examples = []

    for i in range(count):
        lengths = [rng.randint(2, 9) for _ in range(rng.randint(1, 8))]
        gold = rng.randrange(sum(lengths))
        question = " ".join(rng.sample(["S0", "S1", "w0x1", "w1x2", "w2x3"], 3))
        examples.append(sentence_example(lengths, question, gold, id=f"q{i}"))

    return examples


def test_retain_rate_is_monotone():
    examples = synthetic_examples(40, seed=11)
    table = random_table(vocabulary(examples), 6, seed=2)
    budgets = [1, 2, 4, 8, 16, 32, 64, 100]
    longest = max(len(e.doc_tokens) for e in examples)

    for mode in PoolingMode:
        points = retain_rate(examples, table, mode, budgets)
        rates = [p.retain_rate for p in points]

        assert [p.budget for p in points] == budgets
        assert all(p.n_examples == 40 for p in points)
        assert all(p.mode == mode.value for p in points)
        assert rates == sorted(rates)
        assert budgets[-1] >= longest
        assert rates[-1] == 1.0


def test_retain_rate_counts_any_gold_span():
    context = sentences([4, 4, 4])
    ex = example(context, "S0", [("w2x2", context.index("w2x2")), ("S0", 0)])
    table = one_hot_table(["s0"])

    [point] = retain_rate([ex], table, "max", [4])
    assert point.retain_rate == 1.0


def test_retain_rate_of_nothing():
    table = one_hot_table(["a"])
    [point] = retain_rate([], table, PoolingMode.MAX, [100])

    assert point.retain_rate == 0.0
    assert point.n_examples == 0


def test_retain_curve_frame():
    examples = synthetic_examples(5, seed=1)
    table = random_table(vocabulary(examples), 3)
    points = retain_rate(examples, table, "mean", [5, 500])

    frame = retain_curve_frame(points)
    assert list(frame.columns) == ["budget", "mode", "retain_rate", "n_examples"]
    assert frame["budget"].tolist() == [5, 500]
    assert frame["mode"].tolist() == ["mean", "mean"]
    assert frame["retain_rate"].iloc[-1] == 1.0
