from pathlib import Path

import numpy as np

from qareader.corpus import RawAnswer, RawParagraph, RawQA, align_answers
from qareader.embeddings import EmbeddingTable
from qareader.tokenizer import tokenize

RESOURCES = Path(__file__).parent / "resources"


def resource(name):
    return RESOURCES / name


def example(context, question, answers, id="q"):
    """Aligned example for a context and (text, answer_start) answers"""

    qa = RawQA(id, question, tuple(RawAnswer(text, start) for text, start in answers))
    examples, issues = align_answers(RawParagraph(context, (qa,)), tokenize(context))

    assert len(examples) == 1, issues
    return examples[0]


def sentences(lengths):
    """Context with one sentence per entry, each exactly that many tokens long"""

    parts = []
    for k, n in enumerate(lengths):
        assert n >= 2
        words = [f"S{k}"] + [f"w{k}x{j}" for j in range(1, n - 1)]
        parts.append(" ".join(words) + ".")

    return " ".join(parts)


def sentence_example(lengths, question="S0", gold=0, id="q"):
    """Example over `sentences(lengths)` whose answer is the token at index `gold`"""

    context = sentences(lengths)
    token = tokenize(context)[gold]
    return example(context, question, [(token.text, token.char_start)], id)


def one_hot_table(words):
    dim = len(words)
    return EmbeddingTable(dim, {word: np.eye(dim)[i] for i, word in enumerate(words)})


def random_table(words, dim, seed=0):
    rng = np.random.default_rng(seed)
    return EmbeddingTable(dim, {word: rng.normal(size=dim) for word in words})


def vocabulary(examples):
    return sorted(
        {t.lower for e in examples for t in e.doc_tokens + e.question_tokens}
    )
