# pylint: disable-all
# flake8: noqa
from qareader.config import PipelineConfig, load_config, open_config
from qareader.corpus import (
    QAExample,
    RawDataset,
    align_answers,
    ingest,
    open_dataset,
    parse_dataset,
    read_examples,
    write_examples,
)
from qareader.embeddings import (
    EmbeddingTable,
    LookupReport,
    build_vocab,
    embed,
    load_table,
    oov_join,
)
from qareader.metrics import ScoreReport, normalize, score_example, score_set
from qareader.summarizer import (
    PoolingMode,
    Summary,
    cosine,
    pool,
    retain_rate,
    select_key_sentence,
    summarize,
    truncate_around,
)
from qareader.tokenizer import Token, sentence_spans, tokenize

name = "qareader"
