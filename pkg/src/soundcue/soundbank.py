"""Sound-effect database: tag extraction from descriptions plus expansion
with synonyms and embedding nearest neighbors."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .corpus import EmbeddingTable, TriggerCategory
from .errors import DataError

# POS kept when turning a description into tags.
TAG_POS = {"VERB", "NOUN", "PROPN"}

SCENE_NAMES = (
    "forest", "mountain", "river", "sea", "rain", "wind", "thunder", "park",
    "party", "farm", "plaza", "prairie", "restaurant", "pool", "school",
    "campfire",
)


class TagSource(Enum):
    ORIGINAL = "Original"
    SYNONYM = "Synonym"
    EMBEDDING = "Embedding"


@dataclass(frozen=True)
class SoundEffect:
    id: str
    category: TriggerCategory
    audio_ref: str
    description_tokens: tuple[tuple[str, str], ...]  # (surface, pos)
    scene: str | None = None

    def __post_init__(self):
        if self.category is TriggerCategory.SCENE:
            if self.scene is None:
                raise DataError(f"sound {self.id}: Scene sound without scene")
            if self.scene not in SCENE_NAMES:
                raise DataError(f"sound {self.id}: unknown scene {self.scene!r}")
        elif self.scene is not None:
            raise DataError(f"sound {self.id}: scene set on non-Scene sound")


@dataclass(frozen=True)
class ExpandedTag:
    tag: str
    source: TagSource
    weight: float  # cosine similarity for Embedding, 1.0 otherwise


@dataclass
class ExpandedTagSet:
    sound_id: str
    tags: list[ExpandedTag]

    def tag_strings(self) -> list[str]:
        return [t.tag for t in self.tags]


def build_tags(description_tokens) -> list[str]:
    """Keep verb/noun surfaces (case-folded), order preserved, deduped."""
    out = []
    seen = set()
    for surface, pos in description_tokens:
        if pos not in TAG_POS:
            continue
        tag = surface.casefold()
        if tag not in seen:
            seen.add(tag)
            out.append(tag)
    return out


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise DataError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DataError("cosine similarity undefined for zero vector")
    return float(np.dot(u, v) / (nu * nv))


def embedding_neighbors(word: str, table: EmbeddingTable, k: int,
                        min_sim: float) -> list[tuple[str, float]]:
    """Top-k vocabulary words by cosine, excluding the word itself,
    ties broken lexicographically."""
    if word not in table or k <= 0:
        return []
    ref = table[word]
    scored = []
    for other, vec in table.vectors.items():
        if other == word:
            continue
        sim = cosine_similarity(ref, vec)
        if sim >= min_sim:
            scored.append((other, sim))
    scored.sort(key=lambda ws: (-ws[1], ws[0]))
    return scored[:k]


def expand_tags(tags, embeddings: EmbeddingTable | None,
                synonyms: dict[str, list[str]] | None,
                k: int = 5, min_sim: float = 0.6) -> list[ExpandedTag]:
    """Original tags, then synonym-list entries, then embedding neighbors.

    Deduped first-source-wins in priority Original > Synonym > Embedding.
    Tags missing from the embedding table simply get no embedding expansion.
    """
    if k < 0:
        raise DataError("k must be >= 0")
    if not 0.0 <= min_sim <= 1.0:
        raise DataError("min_sim must be in [0, 1]")
    synonyms = synonyms or {}
    out: list[ExpandedTag] = []
    seen: set[str] = set()

    for tag in tags:
        norm = tag.casefold()
        if norm not in seen:
            seen.add(norm)
            out.append(ExpandedTag(norm, TagSource.ORIGINAL, 1.0))
    for tag in tags:
        for syn in synonyms.get(tag.casefold(), []):
            norm = syn.casefold()
            if norm not in seen:
                seen.add(norm)
                out.append(ExpandedTag(norm, TagSource.SYNONYM, 1.0))
    if embeddings is not None:
        for tag in tags:
            for word, sim in embedding_neighbors(tag.casefold(), embeddings,
                                                 k, min_sim):
                norm = word.casefold()
                if norm not in seen:
                    seen.add(norm)
                    out.append(ExpandedTag(norm, TagSource.EMBEDDING, sim))
    return out


def load_soundbank(path: str | Path) -> list[SoundEffect]:
    sounds = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                sound = SoundEffect(
                    id=str(rec["id"]),
                    category=TriggerCategory(rec["category"]),
                    scene=rec.get("scene"),
                    audio_ref=str(rec["audio_ref"]),
                    description_tokens=tuple(
                        (t[0], t[1]) for t in rec["description_tokens"]),
                )
            except DataError:
                raise
            except (KeyError, TypeError, ValueError, IndexError) as e:
                raise DataError(f"bad sound record at line {lineno}: {e}") from e
            sounds.append(sound)
    return sounds


def save_tagsets(tagsets: list[ExpandedTagSet], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ts in tagsets:
            rec = {
                "id": ts.sound_id,
                "tags": [
                    {"tag": t.tag, "source": t.source.value, "weight": t.weight}
                    for t in ts.tags
                ],
            }
            f.write(json.dumps(rec, ensure_ascii=False))
            f.write("\n")


def load_tagsets(path: str | Path) -> list[ExpandedTagSet]:
    tagsets = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                tags = [
                    ExpandedTag(t["tag"], TagSource(t["source"]),
                                float(t["weight"]))
                    for t in rec["tags"]
                ]
                tagsets.append(ExpandedTagSet(str(rec["id"]), tags))
            except (KeyError, TypeError, ValueError) as e:
                raise DataError(f"bad tag set at line {lineno}: {e}") from e
    return tagsets


def build_database(sounds: list[SoundEffect],
                   embeddings: EmbeddingTable | None = None,
                   synonyms: dict[str, list[str]] | None = None,
                   k: int = 5, min_sim: float = 0.6) -> list[ExpandedTagSet]:
    """Per sound effect: description -> base tags -> expanded tag set."""
    out = []
    for sound in sounds:
        base = build_tags(sound.description_tokens)
        out.append(ExpandedTagSet(sound.id,
                                  expand_tags(base, embeddings, synonyms,
                                              k=k, min_sim=min_sim)))
    return out
