"""Annotated story corpus: tokens, trigger annotations, lexicons, embeddings.

Corpus files are line-delimited JSON, one sentence per line:

    {"story_id": ..., "index": ..., "tokens": [{"surface", "pos", "head", "deprel"}],
     "triggers": [{"i", "j", "category", "confidence", "label"}]}

Token indices are 0-based; ``head`` is -1 for the dependency root.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DataError

# Dependency-head sentinel for the root token.
SELF = -1

# Universal 17-tag POS inventory; other tagsets must be mapped at ingestion.
POS_TAGS = (
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
)
POS_INDEX = {tag: i for i, tag in enumerate(POS_TAGS)}

LEXICON_CATEGORIES = (
    "subjunctive", "action", "weather", "negative", "past", "now", "future",
)


class TriggerCategory(Enum):
    ACTION = "Action"
    SCENE = "Scene"
    CHARACTER = "Character"
    ONOMATOPOEIA = "Onomatopoeia"


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    head: int  # 0-based index of dependency head, SELF for root
    deprel: str


@dataclass(frozen=True)
class AnnotatedTrigger:
    start: int  # token index, inclusive
    end: int    # token index, inclusive
    category: TriggerCategory
    confidence: int  # 0..2
    label: bool | None = None  # play / no-play, when labeled


@dataclass(frozen=True)
class Sentence:
    story_id: str
    index: int
    tokens: tuple[Token, ...]
    triggers: tuple[AnnotatedTrigger, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def surfaces(self, fold: bool = False) -> list[str]:
        if fold:
            return [t.surface.casefold() for t in self.tokens]
        return [t.surface for t in self.tokens]

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass
class StoryCollection:
    sentences: list[Sentence] = field(default_factory=list)

    def by_story(self) -> dict[str, list[Sentence]]:
        out: dict[str, list[Sentence]] = {}
        for s in self.sentences:
            out.setdefault(s.story_id, []).append(s)
        return out

    @property
    def n_stories(self) -> int:
        return len({s.story_id for s in self.sentences})

    def labeled_triggers(self) -> list[tuple[Sentence, AnnotatedTrigger]]:
        return [
            (s, t) for s in self.sentences for t in s.triggers
            if t.label is not None
        ]


@dataclass(frozen=True)
class AnnotationStats:
    n_stories: int
    n_triggers: int
    n_confident: int
    mean_triggers: float
    mean_confident: float
    std_triggers: float
    std_confident: float


def _validate_sentence(sent: Sentence, lineno: int | None = None) -> None:
    where = f" (line {lineno})" if lineno is not None else ""
    n = len(sent.tokens)
    if n < 1:
        raise DataError(f"sentence has no tokens{where}")
    for k, tok in enumerate(sent.tokens):
        if tok.pos not in POS_INDEX:
            raise DataError(f"unknown POS tag {tok.pos!r} at token {k}{where}")
        if tok.head != SELF and not (0 <= tok.head < n):
            raise DataError(f"invalid head {tok.head} at token {k}{where}")
    for trig in sent.triggers:
        if not (0 <= trig.start <= trig.end < n):
            raise DataError(
                f"trigger span [{trig.start}, {trig.end}] outside sentence{where}")
        if trig.confidence not in (0, 1, 2):
            raise DataError(f"confidence {trig.confidence} not in 0..2{where}")


def sentence_from_record(rec: dict, lineno: int | None = None) -> Sentence:
    where = f" (line {lineno})" if lineno is not None else ""
    try:
        tokens = tuple(
            Token(surface=t["surface"], pos=t["pos"], head=int(t["head"]),
                  deprel=t["deprel"])
            for t in rec["tokens"]
        )
        triggers = tuple(
            AnnotatedTrigger(
                start=int(t["i"]), end=int(t["j"]),
                category=TriggerCategory(t["category"]),
                confidence=int(t["confidence"]),
                label=None if t.get("label") is None else bool(t["label"]),
            )
            for t in rec.get("triggers", [])
        )
        sent = Sentence(story_id=str(rec["story_id"]), index=int(rec["index"]),
                        tokens=tokens, triggers=triggers)
    except (KeyError, TypeError, ValueError) as e:
        raise DataError(f"malformed sentence record{where}: {e}") from e
    _validate_sentence(sent, lineno)
    return sent


def sentence_to_record(sent: Sentence) -> dict:
    rec: dict = {
        "story_id": sent.story_id,
        "index": sent.index,
        "tokens": [
            {"surface": t.surface, "pos": t.pos, "head": t.head,
             "deprel": t.deprel}
            for t in sent.tokens
        ],
    }
    rec["triggers"] = [
        {"i": t.start, "j": t.end, "category": t.category.value,
         "confidence": t.confidence, "label": t.label}
        for t in sent.triggers
    ]
    return rec


def load_stories(path: str | Path) -> StoryCollection:
    """Read a line-delimited corpus file, preserving annotation order."""
    sentences = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataError(f"bad JSON at line {lineno}: {e}") from e
            sentences.append(sentence_from_record(rec, lineno))
    return StoryCollection(sentences)


def save_stories(collection: StoryCollection, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for sent in collection.sentences:
            f.write(json.dumps(sentence_to_record(sent), ensure_ascii=False))
            f.write("\n")


def _mean_std(counts: list[int]) -> tuple[float, float]:
    mean = sum(counts) / len(counts)
    if len(counts) < 2:
        return mean, 0.0
    # sample standard deviation (n-1 denominator)
    var = sum((c - mean) ** 2 for c in counts) / (len(counts) - 1)
    return mean, math.sqrt(var)


def annotation_stats(collection: StoryCollection) -> AnnotationStats:
    """Per-story trigger counts; confident = confidence > 0."""
    stories = collection.by_story()
    if not stories:
        raise DataError("no stories")
    trig_counts = []
    conf_counts = []
    for sents in stories.values():
        trigs = [t for s in sents for t in s.triggers]
        trig_counts.append(len(trigs))
        conf_counts.append(sum(1 for t in trigs if t.confidence > 0))
    mean_t, std_t = _mean_std(trig_counts)
    mean_c, std_c = _mean_std(conf_counts)
    return AnnotationStats(
        n_stories=len(stories),
        n_triggers=sum(trig_counts),
        n_confident=sum(conf_counts),
        mean_triggers=mean_t,
        mean_confident=mean_c,
        std_triggers=std_t,
        std_confident=std_c,
    )


@dataclass
class LexiconSet:
    """Seven word/phrase lists; entries are lowercased token tuples."""
    entries: dict[str, list[tuple[str, ...]]]

    def __post_init__(self):
        for cat in LEXICON_CATEGORIES:
            self.entries.setdefault(cat, [])
        extra = set(self.entries) - set(LEXICON_CATEGORIES)
        if extra:
            raise DataError(f"unknown lexicon categories: {sorted(extra)}")

    @classmethod
    def from_words(cls, **kwargs: list[str]) -> "LexiconSet":
        entries = {
            cat: [tuple(w.casefold().split()) for w in words]
            for cat, words in kwargs.items()
        }
        return cls(entries)


def load_lexicons(directory: str | Path) -> LexiconSet:
    """Read one file per category (``<category>.txt``); `#` starts a comment."""
    directory = Path(directory)
    entries: dict[str, list[tuple[str, ...]]] = {}
    for cat in LEXICON_CATEGORIES:
        path = directory / f"{cat}.txt"
        words: list[tuple[str, ...]] = []
        seen = set()
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                entry = tuple(line.casefold().split())
                if entry not in seen:
                    seen.add(entry)
                    words.append(entry)
        entries[cat] = words
    return LexiconSet(entries)


@dataclass
class EmbeddingTable:
    vectors: dict[str, np.ndarray]
    dim: int

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __getitem__(self, word: str) -> np.ndarray:
        return self.vectors[word]


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Text format: one line per word, ``word c1 c2 ... cd``."""
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise DataError(f"embedding line {lineno} has no components")
            word = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError as e:
                raise DataError(f"bad embedding component at line {lineno}: {e}") from e
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                raise DataError(
                    f"embedding dimension mismatch at line {lineno}: "
                    f"{vec.size} != {dim}")
            vectors[word] = vec
    return EmbeddingTable(vectors=vectors, dim=dim or 0)
