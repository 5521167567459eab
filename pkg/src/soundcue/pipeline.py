"""End-to-end run: detect triggers, extract features, classify, apply
rules, and emit a cue sheet."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .classifier import LinearModel, predict
from .corpus import LexiconSet, Sentence, StoryCollection
from .features import extract_features
from .retrieval import SoundBankIndex, detect_triggers
from .rules import RuleConfig, rule_fires


@dataclass(frozen=True)
class CueEntry:
    story_id: str
    sentence_index: int
    char_start: int  # byte offset into the sentence's reconstructed text
    char_end: int    # byte offset, exclusive
    surface: str
    scene: str | None
    sound_id: str
    audio_ref: str
    retrieval_score: float
    margin: float

    def to_record(self) -> dict:
        return {
            "story_id": self.story_id,
            "sentence_index": self.sentence_index,
            "char_start": self.char_start,
            "char_end": self.char_end,
            "surface": self.surface,
            "scene": self.scene,
            "sound_id": self.sound_id,
            "audio_ref": self.audio_ref,
            "retrieval_score": self.retrieval_score,
            "margin": self.margin,
        }


def byte_span(sentence: Sentence, start: int, end: int) -> tuple[int, int]:
    """Byte offsets of tokens [start, end] in the space-joined text."""
    surfaces = sentence.surfaces()
    prefix = " ".join(surfaces[:start])
    span = " ".join(surfaces[start:end + 1])
    off = len(prefix.encode("utf-8")) + (1 if start > 0 else 0)
    return off, off + len(span.encode("utf-8"))


def run_pipeline(stories: StoryCollection, bank: SoundBankIndex,
                 model: LinearModel, lexicons: LexiconSet,
                 deprel_map: dict[str, str],
                 rule_cfg: RuleConfig | None = None) -> list[CueEntry]:
    """Detect -> extract -> predict -> (rules) -> cue sheet, deterministic.

    ``rule_cfg=None`` (or a disabled config) skips the heuristic filter.
    """
    entries = []
    for sentence in stories.sentences:
        for trig in detect_triggers(sentence, bank):
            x = extract_features(sentence, trig.start, trig.end,
                                 lexicons, deprel_map)
            pred = predict(model, x)
            if not pred.label:
                continue
            if (rule_cfg is not None and rule_cfg.enabled
                    and rule_fires(sentence, trig.start, rule_cfg)):
                continue
            lo, hi = byte_span(sentence, trig.start, trig.end)
            sound = bank.sounds[trig.top_sound_id]
            entries.append(CueEntry(
                story_id=sentence.story_id,
                sentence_index=sentence.index,
                char_start=lo, char_end=hi,
                surface=" ".join(sentence.surfaces()[trig.start:trig.end + 1]),
                scene=trig.scene,
                sound_id=trig.top_sound_id,
                audio_ref=sound.audio_ref,
                retrieval_score=trig.retrieval_score,
                margin=pred.margin,
            ))
    entries.sort(key=lambda e: (e.story_id, e.sentence_index, e.char_start))
    return entries


def save_cue_sheet(entries: list[CueEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for entry in entries:
            f.write(json.dumps(entry.to_record(), ensure_ascii=False))
            f.write("\n")
