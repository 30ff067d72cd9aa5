"""
SQuAD v1.1 ingestion: parse the JSON layout into typed records, align the
character-offset answers to token spans and hand examples over to the rest
of the pipeline as one JSON record per line.
"""
import bisect
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from pydantic import ValidationError

from qareader.models import ExampleRecord, SquadParagraph, SquadQA
from qareader.tokenizer import Token, sentence_spans, span_text, tokenize

logger = logging.getLogger(__name__)


class DatasetParseError(Exception):
    def __init__(self, message, byte_offset=None):
        super().__init__(message)
        self.message = message
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class RecordIssue:
    level: str
    location: str
    message: str

    def __str__(self):
        return f"{self.level}: {self.location}: {self.message}"


@dataclass(frozen=True)
class RawAnswer:
    text: str
    answer_start: int


@dataclass(frozen=True)
class RawQA:
    id: str
    question: str
    answers: tuple


@dataclass(frozen=True)
class RawParagraph:
    context: str
    qas: tuple
    location: str = ""


@dataclass(frozen=True)
class RawArticle:
    title: str
    paragraphs: tuple


@dataclass(frozen=True)
class RawDataset:
    articles: tuple
    issues: tuple = ()
    version: str = ""

    @property
    def paragraphs(self):
        return [p for article in self.articles for p in article.paragraphs]

    def counts(self):
        paragraphs = self.paragraphs
        return (
            len(self.articles),
            len(paragraphs),
            sum(len(p.qas) for p in paragraphs),
        )


@dataclass(frozen=True)
class QAExample:
    id: str
    context: str
    question: str
    doc_tokens: tuple
    question_tokens: tuple
    sentence_spans: tuple
    gold_spans: tuple
    gold_texts: tuple

    def __post_init__(self):
        count = len(self.doc_tokens)

        if not self.gold_spans or len(self.gold_spans) != len(self.gold_texts):
            raise ValueError(f"Example [{self.id}] needs one gold text per gold span")

        for start, end in self.gold_spans:
            if not 0 <= start < end <= count:
                raise ValueError(
                    f"Example [{self.id}] has gold span ({start}, {end}) "
                    f"outside of {count} tokens"
                )

        expected = 0
        for start, end in self.sentence_spans:
            if start != expected or end <= start:
                raise ValueError(
                    f"Example [{self.id}] sentence spans do not partition the document"
                )
            expected = end

        if expected != count:
            raise ValueError(
                f"Example [{self.id}] sentence spans cover {expected} of {count} tokens"
            )

    def text(self, start, end):
        """Verbatim context text covered by doc_tokens[start:end]"""
        return span_text(self.doc_tokens, start, end, self.context)

    def sentence_tokens(self, index):
        start, end = self.sentence_spans[index]
        return self.doc_tokens[start:end]

    def to_record(self):
        def triples(tokens):
            return [(t.text, t.char_start, t.char_end) for t in tokens]

        return ExampleRecord(
            id=self.id,
            context=self.context,
            question=self.question,
            doc_tokens=triples(self.doc_tokens),
            question_tokens=triples(self.question_tokens),
            sentence_spans=list(self.sentence_spans),
            gold_spans=list(self.gold_spans),
            gold_texts=list(self.gold_texts),
        )

    @staticmethod
    def from_record(record):
        record = ExampleRecord.model_validate(record)

        def tokens(triples):
            return tuple(Token(text, start, end) for text, start, end in triples)

        return QAExample(
            id=record.id,
            context=record.context,
            question=record.question,
            doc_tokens=tokens(record.doc_tokens),
            question_tokens=tokens(record.question_tokens),
            sentence_spans=tuple(tuple(s) for s in record.sentence_spans),
            gold_spans=tuple(tuple(s) for s in record.gold_spans),
            gold_texts=tuple(record.gold_texts),
        )


@dataclass
class IngestReport:
    """Diagnostics of one ingestion run; excluded examples are never silent"""

    parsed: int = 0
    aligned: int = 0
    excluded: int = 0
    truncated: int = 0
    issues: list = field(default_factory=list)

    def as_dict(self):
        return {
            "parsed": self.parsed,
            "aligned": self.aligned,
            "excluded": self.excluded,
            "truncated": self.truncated,
            "errors": sum(1 for i in self.issues if i.level == "error"),
            "warnings": sum(1 for i in self.issues if i.level == "warning"),
        }


def _validation_message(error):
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or 'record'}: {err['msg']}"
        for err in error.errors()
    )


def _decode(raw):
    if isinstance(raw, str):
        return raw

    try:
        return raw.decode("utf8")
    except UnicodeDecodeError as e:
        raise DatasetParseError(
            f"Dataset is not valid UTF-8 at byte {e.start}", byte_offset=e.start
        )


def parse_dataset(raw):
    """
    Parses SQuAD v1.1 JSON (bytes or text). Malformed JSON raises
    DatasetParseError with the byte offset of the problem; malformed records
    are reported as issues next to everything that could be parsed.
    """

    text = _decode(raw)

    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[: e.pos].encode("utf8"))
        raise DatasetParseError(
            f"Malformed JSON at byte {offset}: {e.msg}", byte_offset=offset
        )

    if not isinstance(document, dict) or not isinstance(document.get("data"), list):
        raise DatasetParseError("Top-level object must carry a 'data' list", 0)

    issues = []
    articles = []
    seen_ids = set()

    for i, article in enumerate(document["data"]):
        location = f"data[{i}]"
        if not isinstance(article, dict) or not isinstance(
            article.get("paragraphs", []), list
        ):
            issues.append(RecordIssue("error", location, "article is malformed"))
            continue

        paragraphs = []
        for j, paragraph in enumerate(article.get("paragraphs", [])):
            parsed = _parse_paragraph(
                paragraph, f"{location}.paragraphs[{j}]", seen_ids, issues
            )
            if parsed is not None:
                paragraphs.append(parsed)

        articles.append(RawArticle(str(article.get("title", "")), tuple(paragraphs)))

    return RawDataset(
        articles=tuple(articles),
        issues=tuple(issues),
        version=str(document.get("version", "")),
    )


def _parse_paragraph(paragraph, location, seen_ids, issues):
    try:
        model = SquadParagraph.model_validate(paragraph)
    except ValidationError as e:
        issues.append(RecordIssue("error", location, _validation_message(e)))
        return None

    qas = []
    for k, qa in enumerate(model.qas):
        qa_location = f"{location}.qas[{k}]"
        try:
            qa_model = SquadQA.model_validate(qa)
        except ValidationError as e:
            issues.append(RecordIssue("error", qa_location, _validation_message(e)))
            continue

        if qa_model.id in seen_ids:
            issues.append(
                RecordIssue("error", qa_location, f"duplicate id [{qa_model.id}]")
            )
            continue

        seen_ids.add(qa_model.id)
        qas.append(
            RawQA(
                id=qa_model.id,
                question=qa_model.question,
                answers=tuple(
                    RawAnswer(a.text, a.answer_start) for a in qa_model.answers
                ),
            )
        )

    return RawParagraph(context=model.context, qas=tuple(qas), location=location)


def covering_span(tokens, char_start, char_end):
    """Smallest token range [start, end) overlapping [char_start, char_end)"""

    ends = [t.char_end for t in tokens]
    starts = [t.char_start for t in tokens]

    first = bisect.bisect_right(ends, char_start)
    last = bisect.bisect_left(starts, char_end) - 1

    if first > last:
        return None

    return first, last + 1


def align_answers(paragraph, tokens):
    """
    Builds one QAExample per question of the paragraph. Returns the examples
    together with the issues found; a question none of whose answers can be
    aligned is excluded.
    """

    context = paragraph.context
    spans = tuple(sentence_spans(tokens, context))
    examples = []
    issues = []

    for qa in paragraph.qas:
        location = f"{paragraph.location}[{qa.id}]"
        gold_spans = []
        gold_texts = []

        for answer in qa.answers:
            start = answer.answer_start
            end = start + len(answer.text)

            if start < 0 or start >= len(context) or end > len(context):
                issues.append(
                    RecordIssue(
                        "error",
                        location,
                        f"answer offset {start} out of context bounds "
                        f"(length {len(context)})",
                    )
                )
                continue

            if context[start:end] != answer.text:
                issues.append(
                    RecordIssue(
                        "warning",
                        location,
                        f"answer text [{answer.text}] differs from context "
                        f"[{context[start:end]}] at offset {start}",
                    )
                )

            span = covering_span(tokens, start, end)
            if span is None:
                issues.append(
                    RecordIssue("error", location, "answer covers no token")
                )
                continue

            gold_spans.append(span)
            gold_texts.append(answer.text)

        if not gold_spans:
            if not qa.answers:
                issues.append(RecordIssue("error", location, "question has no answers"))
            continue

        examples.append(
            QAExample(
                id=qa.id,
                context=context,
                question=qa.question,
                doc_tokens=tuple(tokens),
                question_tokens=tuple(tokenize(qa.question)),
                sentence_spans=spans,
                gold_spans=tuple(gold_spans),
                gold_texts=tuple(gold_texts),
            )
        )

    return examples, issues


def truncate_example(example, doc_cap=None, question_cap=None):
    """
    Caps document and question length. Gold spans reaching beyond the
    document cap are dropped; returns None when no gold span survives.
    """

    if doc_cap is not None and len(example.doc_tokens) > doc_cap:
        kept = [
            (span, text)
            for span, text in zip(example.gold_spans, example.gold_texts)
            if span[1] <= doc_cap
        ]
        if not kept:
            return None

        example = replace(
            example,
            doc_tokens=example.doc_tokens[:doc_cap],
            sentence_spans=tuple(
                (start, min(end, doc_cap))
                for start, end in example.sentence_spans
                if start < doc_cap
            ),
            gold_spans=tuple(span for span, _ in kept),
            gold_texts=tuple(text for _, text in kept),
        )

    if question_cap is not None and len(example.question_tokens) > question_cap:
        example = replace(
            example, question_tokens=example.question_tokens[:question_cap]
        )

    return example


def ingest(dataset, doc_cap=None, question_cap=None):
    """
    Tokenizes, sentence-splits and aligns every paragraph of a RawDataset.
    Returns (examples, IngestReport).
    """

    report = IngestReport(issues=list(dataset.issues))
    examples = []

    for paragraph in dataset.paragraphs:
        report.parsed += len(paragraph.qas)
        tokens = tokenize(paragraph.context)
        aligned, issues = align_answers(paragraph, tokens)
        report.issues.extend(issues)
        report.aligned += len(aligned)

        for example in aligned:
            capped = truncate_example(example, doc_cap, question_cap)
            if capped is None:
                report.truncated += 1
                continue
            examples.append(capped)

    report.excluded = report.parsed - len(examples)

    for issue in report.issues:
        logger.debug(str(issue))

    logger.info(
        f"Ingested {len(examples)} of {report.parsed} questions "
        f"({report.excluded} excluded, {len(report.issues)} issues)"
    )

    return examples, report


def open_dataset(path):
    """Reads and parses a SQuAD JSON file"""

    logger.info(f"Loading dataset from {path}")
    return parse_dataset(Path(path).read_bytes())


def write_examples(examples, path):
    count = 0
    with open(path, "w", encoding="utf8") as out:
        for example in examples:
            out.write(example.to_record().model_dump_json() + "\n")
            count += 1

    return count


def read_examples(path):
    with open(path, "r", encoding="utf8") as records:
        for line in records:
            if line.strip():
                yield QAExample.from_record(json.loads(line))
