"""64-dimensional feature vectors for (sentence, trigger) pairs.

Layout:
    0-6    special-word counts [subjunctive, action, weather, negative,
           past, now, future]
    7-23   POS one-hot of the token before the trigger
    24-40  POS one-hot of the trigger head token
    41-57  POS one-hot of the token after the trigger
    58-63  dependency-class one-hot of the trigger head token
           [Subject, Object, AttributeOfVerb, AttributeOfNoun,
            Adverbial, Other]
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .corpus import (LEXICON_CATEGORIES, POS_INDEX, POS_TAGS, SELF,
                     LexiconSet, Sentence)
from .errors import DataError

N_FEATURES = 64
N_POS = len(POS_TAGS)  # 17

DEP_CLASSES = ("Subject", "Object", "AttributeOfVerb", "AttributeOfNoun",
               "Adverbial", "Other")
DEP_INDEX = {c: i for i, c in enumerate(DEP_CLASSES)}

SPECIAL_OFFSET = 0
POS_BEFORE_OFFSET = 7
POS_HEAD_OFFSET = 24
POS_AFTER_OFFSET = 41
DEP_OFFSET = 58

# Named dimension groups used by the ablation driver.
FEATURE_MASKS: dict[str, frozenset[int]] = {
    "None": frozenset(),
    "SpecialWords": frozenset(range(0, 7)),
    "ActionWords": frozenset({1}),
    "NowWords": frozenset({5}),
    "POS": frozenset(range(7, 58)),
    "Syntactic": frozenset(range(58, 64)),
}

VERB_LIKE = {"VERB", "AUX"}
NOUN_LIKE = {"NOUN", "PROPN", "PRON"}


def count_special_words(sentence: Sentence, lexicons: LexiconSet) -> np.ndarray:
    """Counts of lexicon hits per category; multi-token entries match
    contiguously, at most one hit per category per starting position."""
    surfaces = sentence.surfaces(fold=True)
    n = len(surfaces)
    counts = np.zeros(len(LEXICON_CATEGORIES))
    for ci, cat in enumerate(LEXICON_CATEGORIES):
        for start in range(n):
            for entry in lexicons.entries[cat]:
                if tuple(surfaces[start:start + len(entry)]) == entry:
                    counts[ci] += 1
                    break
    return counts


def trigger_head_index(sentence: Sentence, start: int, end: int) -> int:
    """Trigger token whose dependency head lies outside the span (first on
    tie); falls back to the last span token."""
    for k in range(start, end + 1):
        head = sentence.tokens[k].head
        if head == SELF or head < start or head > end:
            return k
    return end


def pos_one_hot(sentence: Sentence, start: int, end: int) -> np.ndarray:
    """Three 17-dim POS blocks: token before, trigger head token, token
    after. Out-of-bounds neighbors stay all-zero."""
    if not (0 <= start <= end < len(sentence.tokens)):
        raise DataError(f"trigger span [{start}, {end}] outside sentence")
    out = np.zeros(3 * N_POS)
    if start - 1 >= 0:
        out[POS_INDEX[sentence.tokens[start - 1].pos]] = 1.0
    head = trigger_head_index(sentence, start, end)
    out[N_POS + POS_INDEX[sentence.tokens[head].pos]] = 1.0
    if end + 1 < len(sentence.tokens):
        out[2 * N_POS + POS_INDEX[sentence.tokens[end + 1].pos]] = 1.0
    return out


def load_deprel_map(path: str | Path) -> dict[str, str]:
    """deprel label -> {subject, object, attribute, adverbial, other}."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"deprel mapping file not found: {path}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    valid = {"subject", "object", "attribute", "adverbial", "other"}
    mapping = {}
    for label, cls in raw.items():
        cls = cls.lower()
        if cls not in valid:
            raise DataError(f"deprel map: bad class {cls!r} for {label!r}")
        mapping[label.lower()] = cls
    return mapping


def dep_one_hot(sentence: Sentence, start: int, end: int,
                deprel_map: dict[str, str]) -> np.ndarray:
    """Dependency class of the trigger head token. The attribute class is
    split by the POS of the head token's own dependency head."""
    k = trigger_head_index(sentence, start, end)
    tok = sentence.tokens[k]
    cls = deprel_map.get(tok.deprel.lower(), "other")
    if cls == "subject":
        name = "Subject"
    elif cls == "object":
        name = "Object"
    elif cls == "adverbial":
        name = "Adverbial"
    elif cls == "attribute":
        if tok.head == SELF:
            name = "Other"
        else:
            head_pos = sentence.tokens[tok.head].pos
            if head_pos in VERB_LIKE:
                name = "AttributeOfVerb"
            elif head_pos in NOUN_LIKE:
                name = "AttributeOfNoun"
            else:
                name = "Other"
    else:
        name = "Other"
    out = np.zeros(len(DEP_CLASSES))
    out[DEP_INDEX[name]] = 1.0
    return out


def extract_features(sentence: Sentence, start: int, end: int,
                     lexicons: LexiconSet,
                     deprel_map: dict[str, str]) -> np.ndarray:
    return np.concatenate([
        count_special_words(sentence, lexicons),
        pos_one_hot(sentence, start, end),
        dep_one_hot(sentence, start, end, deprel_map),
    ])


def apply_mask(vector: np.ndarray, mask: frozenset[int] | set[int]) -> np.ndarray:
    if any(i < 0 or i >= N_FEATURES for i in mask):
        raise DataError("mask index out of range")
    out = np.array(vector, dtype=float, copy=True)
    if mask:
        out[list(mask)] = 0.0
    return out


def mask_by_name(name: str) -> frozenset[int]:
    if name not in FEATURE_MASKS:
        raise DataError(f"unknown feature mask {name!r}; "
                        f"choose from {sorted(FEATURE_MASKS)}")
    return FEATURE_MASKS[name]
