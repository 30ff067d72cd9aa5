import pytest

from qareader.config import PipelineConfig
from qareader.corpus import ingest, parse_dataset, write_examples
from qareader.embeddings import write_table
from tests.test_utils import random_table, resource, vocabulary


@pytest.fixture
def table1_bytes():
    return resource("squad_table1.json").read_bytes()


@pytest.fixture
def table1_dataset(table1_bytes):
    return parse_dataset(table1_bytes)


@pytest.fixture
def table1_example(table1_dataset):
    examples, _ = ingest(table1_dataset)
    return examples[0]


@pytest.fixture
def table1_table(table1_example):
    """Random 4-d vectors for every word of the imperialism example"""

    return random_table(vocabulary([table1_example]), 4, seed=7)


@pytest.fixture
def small_config():
    return PipelineConfig(embedding_dim=4, hidden_size=3, budgets=[10, 40, 200])


@pytest.fixture
def workspace(tmp_path, table1_example, table1_table):
    """Examples and vectors files of the imperialism example in a temp dir"""

    examples = tmp_path / "examples.jsonl"
    vectors = tmp_path / "vectors.txt"
    write_examples([table1_example], examples)
    write_table(table1_table, vectors)

    return tmp_path
