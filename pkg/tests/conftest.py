import json

import pytest

from soundcue.corpus import (SELF, AnnotatedTrigger, LexiconSet, Sentence,
                             Token, TriggerCategory)
from soundcue.soundbank import ExpandedTag, ExpandedTagSet, SoundEffect, \
    TagSource


def make_sentence(words, pos=None, heads=None, deprels=None,
                  story_id="s1", index=0, triggers=()):
    n = len(words)
    pos = pos or ["NOUN"] * n
    heads = heads if heads is not None else [SELF] + [0] * (n - 1)
    deprels = deprels or ["dep"] * n
    tokens = tuple(Token(w, p, h, d)
                   for w, p, h, d in zip(words, pos, heads, deprels))
    return Sentence(story_id=story_id, index=index, tokens=tokens,
                    triggers=tuple(triggers))


def trig(i, j=None, category=TriggerCategory.SCENE, confidence=2, label=None):
    return AnnotatedTrigger(start=i, end=j if j is not None else i,
                            category=category, confidence=confidence,
                            label=label)


@pytest.fixture
def lexicons():
    return LexiconSet.from_words(
        subjunctive=["plan", "plans", "like", "wants"],
        action=["run", "runs", "booms", "knock"],
        weather=["rain", "wind", "thunder"],
        negative=["not", "doesn't", "never"],
        past=["had", "was"],
        now=["now", "suddenly"],
        future=["will", "soon", "since then"],
    )


@pytest.fixture
def deprel_map():
    return {
        "nsubj": "subject",
        "obj": "object",
        "amod": "attribute",
        "nmod": "attribute",
        "compound": "attribute",
        "advmod": "adverbial",
    }


def simple_tagset(sound_id, tags):
    return ExpandedTagSet(sound_id, [
        ExpandedTag(t, TagSource.ORIGINAL, 1.0) for t in tags])


def scene_sound(sound_id, scene, tags=()):
    return SoundEffect(
        id=sound_id, category=TriggerCategory.SCENE, scene=scene,
        audio_ref=f"{sound_id}.wav",
        description_tokens=tuple((t, "NOUN") for t in tags))


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def sentence_record(words, pos=None, heads=None, deprels=None,
                    story_id="s1", index=0, triggers=()):
    n = len(words)
    pos = pos or ["NOUN"] * n
    heads = heads if heads is not None else [-1] + [0] * (n - 1)
    deprels = deprels or ["dep"] * n
    return {
        "story_id": story_id,
        "index": index,
        "tokens": [
            {"surface": w, "pos": p, "head": h, "deprel": d}
            for w, p, h, d in zip(words, pos, heads, deprels)
        ],
        "triggers": list(triggers),
    }
