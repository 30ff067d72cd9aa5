"""
Pydantic models for the JSON documents the pipeline reads and writes:
SQuAD v1.1 records on the way in, example records (one per line) between
commands.
"""
from pydantic import BaseModel, Field, field_validator


class SquadAnswer(BaseModel):
    text: str
    answer_start: int


class SquadQA(BaseModel):
    id: str
    question: str
    answers: list[SquadAnswer]

    @field_validator("id")
    @classmethod
    def id_not_empty(cls, value):
        if not value:
            raise ValueError("question id is empty")
        return value


class SquadParagraph(BaseModel):
    context: str
    qas: list[dict] = Field(default_factory=list)

    @field_validator("context")
    @classmethod
    def context_not_empty(cls, value):
        if not value.strip():
            raise ValueError("context is empty")
        return value


class ExampleRecord(BaseModel):
    """
    Line format of the examples file. Tokens are [text, char_start, char_end]
    triples; spans are [start, end_exclusive] token index pairs. Question
    token offsets index into `question`.
    """

    id: str
    context: str
    question: str
    doc_tokens: list[tuple[str, int, int]]
    question_tokens: list[tuple[str, int, int]]
    sentence_spans: list[tuple[int, int]]
    gold_spans: list[tuple[int, int]]
    gold_texts: list[str]


class SummaryRecord(BaseModel):
    id: str
    window: tuple[int, int]
    key_sentence_index: int
    similarity: float
    budget: int
    text: str
