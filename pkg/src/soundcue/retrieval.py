"""Candidate trigger detection by exact tag matching, plus BM25 ranking of
sound effects per trigger.

Each sound effect's expanded tag set is one BM25 document whose terms are
its tags. Trigger detection itself is exact (normalized) matching; the tag
expansion step is the sole source of lexical variation.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import Sentence
from .errors import DataError
from .soundbank import ExpandedTagSet, SoundEffect


@dataclass(frozen=True)
class RetrievalConfig:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 < 0:
            raise DataError("k1 must be >= 0")
        if not 0.0 <= self.b <= 1.0:
            raise DataError("b must be in [0, 1]")


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[str, int]]]  # term -> [(sound_id, tf)]
    doc_len: dict[str, int]
    avg_doc_len: float
    n_docs: int


def build_index(tagsets: list[ExpandedTagSet]) -> InvertedIndex:
    if not tagsets:
        raise DataError("empty sound bank")
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_len: dict[str, int] = {}
    for ts in tagsets:
        terms = ts.tag_strings()
        doc_len[ts.sound_id] = len(terms)
        for term, tf in Counter(terms).items():
            postings.setdefault(term, []).append((ts.sound_id, tf))
    avg = sum(doc_len.values()) / len(doc_len)
    return InvertedIndex(postings=postings, doc_len=doc_len,
                         avg_doc_len=avg, n_docs=len(doc_len))


def bm25_idf(index: InvertedIndex, term: str) -> float:
    n_t = len(index.postings.get(term, ()))
    return math.log((index.n_docs - n_t + 0.5) / (n_t + 0.5) + 1.0)


def bm25_score(query_terms, sound_id: str, index: InvertedIndex,
               cfg: RetrievalConfig = RetrievalConfig()) -> float:
    if sound_id not in index.doc_len:
        raise DataError(f"unknown sound id {sound_id!r}")
    length = index.doc_len[sound_id]
    score = 0.0
    for term in query_terms:
        tf = 0
        for sid, f in index.postings.get(term, ()):
            if sid == sound_id:
                tf = f
                break
        if tf == 0:
            continue
        idf = bm25_idf(index, term)
        denom = tf + cfg.k1 * (1.0 - cfg.b + cfg.b * length / index.avg_doc_len)
        score += idf * tf * (cfg.k1 + 1.0) / denom
    return score


@dataclass(frozen=True)
class CandidateTrigger:
    sentence: Sentence
    start: int  # token index, inclusive
    end: int    # token index, inclusive
    matched_tag: str
    scene: str | None
    top_sound_id: str
    retrieval_score: float

    def to_record(self) -> dict:
        return {
            "story_id": self.sentence.story_id,
            "sentence_index": self.sentence.index,
            "i": self.start,
            "j": self.end,
            "matched_tag": self.matched_tag,
            "scene": self.scene,
            "top_sound_id": self.top_sound_id,
            "retrieval_score": self.retrieval_score,
        }


class SoundBankIndex:
    """Searchable view over an expanded sound bank: tag -> owning sounds,
    plus the BM25 index for ranking them."""

    def __init__(self, sounds: list[SoundEffect],
                 tagsets: list[ExpandedTagSet],
                 cfg: RetrievalConfig = RetrievalConfig()):
        self.cfg = cfg
        self.sounds = {s.id: s for s in sounds}
        self.index = build_index(tagsets)
        self.tag_owners: dict[tuple[str, ...], list[str]] = {}
        for ts in tagsets:
            if ts.sound_id not in self.sounds:
                raise DataError(f"tag set for unknown sound {ts.sound_id!r}")
            for tag in ts.tag_strings():
                key = tuple(tag.split())
                owners = self.tag_owners.setdefault(key, [])
                if ts.sound_id not in owners:
                    owners.append(ts.sound_id)

    def rank_tag(self, tag_tokens: tuple[str, ...]) -> tuple[str, float]:
        """Best sound owning the tag (BM25, ties -> smallest id)."""
        owners = self.tag_owners[tag_tokens]
        tag = " ".join(tag_tokens)
        best_id, best_score = None, -1.0
        for sid in sorted(owners):
            score = bm25_score([tag], sid, self.index, self.cfg)
            if score > best_score:
                best_id, best_score = sid, score
        return best_id, best_score


def detect_triggers(sentence: Sentence,
                    bank: SoundBankIndex) -> list[CandidateTrigger]:
    """Exact tag matches over the sentence, longest-match-first then
    leftmost; overlaps are dropped."""
    surfaces = sentence.surfaces(fold=True)
    n = len(surfaces)
    matches = []
    for i in range(n):
        for j in range(i, n):
            key = tuple(surfaces[i:j + 1])
            if key in bank.tag_owners:
                matches.append((i, j))
    matches.sort(key=lambda ij: (-(ij[1] - ij[0]), ij[0]))

    taken: list[tuple[int, int]] = []
    for i, j in matches:
        if any(not (j < a or i > b) for a, b in taken):
            continue
        taken.append((i, j))

    out = []
    for i, j in sorted(taken):
        key = tuple(surfaces[i:j + 1])
        sound_id, score = bank.rank_tag(key)
        sound = bank.sounds[sound_id]
        out.append(CandidateTrigger(
            sentence=sentence, start=i, end=j, matched_tag=" ".join(key),
            scene=sound.scene, top_sound_id=sound_id,
            retrieval_score=score))
    return out


def save_triggers(triggers: list[CandidateTrigger], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for trig in triggers:
            f.write(json.dumps(trig.to_record(), ensure_ascii=False))
            f.write("\n")
