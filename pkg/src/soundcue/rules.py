"""Heuristic post-classifier filters: suppress triggers inside quotations
or after colons, and triggers in simile constructions. Rules only flip
positives to negatives, trading recall for precision."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import Sentence
from .errors import DataError

DEFAULT_QUOTE_PAIRS = (('"', '"'), ("“", "”"),
                       ("「", "」"), ("‘", "’"))
DEFAULT_COLONS = (":", "：")
DEFAULT_SIMILE_MARKERS = ("as if", "as though", "like")


@dataclass
class RuleConfig:
    quote_pairs: tuple[tuple[str, str], ...] = DEFAULT_QUOTE_PAIRS
    colon_chars: tuple[str, ...] = DEFAULT_COLONS
    simile_markers: tuple[str, ...] = DEFAULT_SIMILE_MARKERS
    simile_window: int = 5
    enabled: bool = True

    def __post_init__(self):
        if self.simile_window < 1:
            raise DataError("simile_window must be >= 1")
        if self.enabled and not self.simile_markers:
            raise DataError("simile_markers empty while rules enabled")


def load_rule_config(path: str | Path) -> RuleConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return RuleConfig(
            quote_pairs=tuple((p[0], p[1])
                              for p in doc.get("quote_pairs",
                                               DEFAULT_QUOTE_PAIRS)),
            colon_chars=tuple(doc.get("colon_chars", DEFAULT_COLONS)),
            simile_markers=tuple(doc.get("simile_markers",
                                         DEFAULT_SIMILE_MARKERS)),
            simile_window=int(doc.get("simile_window", 5)),
            enabled=bool(doc.get("enabled", True)),
        )
    except DataError:
        raise
    except (TypeError, ValueError, IndexError, json.JSONDecodeError) as e:
        raise DataError(f"bad rule config {path}: {e}") from e


def in_quotation_or_after_colon(sentence: Sentence, start: int,
                                cfg: RuleConfig = RuleConfig()) -> bool:
    """True iff the trigger start sits inside an open quote pair (an
    unmatched open quote extends to sentence end) or any colon token
    precedes it."""
    surfaces = sentence.surfaces()
    for k in range(start):
        if surfaces[k] in cfg.colon_chars:
            return True
    for opener, closer in cfg.quote_pairs:
        open_now = False
        for k in range(start):
            tok = surfaces[k]
            if opener == closer:
                if tok == opener:
                    open_now = not open_now
            elif tok == opener:
                open_now = True
            elif tok == closer:
                open_now = False
        if open_now:
            return True
    return False


def near_simile_marker(sentence: Sentence, start: int,
                       cfg: RuleConfig = RuleConfig()) -> bool:
    """True iff a marker phrase ends within ``simile_window`` tokens
    immediately preceding the trigger start."""
    surfaces = sentence.surfaces(fold=True)
    markers = [tuple(m.casefold().split()) for m in cfg.simile_markers]
    lo = max(0, start - cfg.simile_window)
    for end in range(lo, start):
        for marker in markers:
            s = end - len(marker) + 1
            if s >= 0 and tuple(surfaces[s:end + 1]) == marker:
                return True
    return False


def rule_fires(sentence: Sentence, start: int,
               cfg: RuleConfig = RuleConfig()) -> bool:
    return (in_quotation_or_after_colon(sentence, start, cfg)
            or near_simile_marker(sentence, start, cfg))


def apply_rules(labels, instances, cfg: RuleConfig = RuleConfig()) -> list[bool]:
    """Flip positives whose (sentence, trigger start) fires either rule.

    ``instances`` is a sequence of (Sentence, start) pairs aligned with
    ``labels``. Disabled config is the identity.
    """
    labels = list(labels)
    instances = list(instances)
    if len(labels) != len(instances):
        raise DataError("labels and instances length mismatch")
    if not cfg.enabled:
        return labels
    out = []
    for label, (sentence, start) in zip(labels, instances):
        out.append(bool(label) and not rule_fires(sentence, start, cfg))
    return out
