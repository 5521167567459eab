import math

import numpy as np
import pytest

from conftest import make_sentence, scene_sound, simple_tagset
from soundcue.errors import DataError
from soundcue.retrieval import (RetrievalConfig, SoundBankIndex, bm25_score,
                                build_index, detect_triggers)


def brute_force_bm25(query, doc_terms, all_docs, k1, b):
    """Independent BM25 evaluation straight from the formula."""
    n_docs = len(all_docs)
    avg = sum(len(d) for d in all_docs.values()) / n_docs
    score = 0.0
    for term in query:
        tf = doc_terms.count(term)
        if tf == 0:
            continue
        n_t = sum(1 for d in all_docs.values() if term in d)
        idf = math.log((n_docs - n_t + 0.5) / (n_t + 0.5) + 1.0)
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(doc_terms) / avg))
    return score


def test_build_index_single_doc():
    idx = build_index([simple_tagset("s1", ["a", "b"])])
    assert idx.n_docs == 1
    assert idx.doc_len["s1"] == 2
    assert idx.avg_doc_len == 2.0


def test_build_index_postings():
    idx = build_index([simple_tagset("s1", ["a"]),
                       simple_tagset("s2", ["a", "b"])])
    assert len(idx.postings["a"]) == 2
    assert idx.postings["b"] == [("s2", 1)]


def test_build_index_empty():
    with pytest.raises(DataError, match="empty sound bank"):
        build_index([])


def test_bm25_no_overlap_is_zero():
    idx = build_index([simple_tagset("s1", ["a", "b"])])
    assert bm25_score(["z"], "s1", idx) == 0.0


def test_bm25_unknown_doc():
    idx = build_index([simple_tagset("s1", ["a"])])
    with pytest.raises(DataError, match="unknown sound"):
        bm25_score(["a"], "nope", idx)


def test_bm25_identical_docs_score_equal():
    idx = build_index([simple_tagset("s1", ["rain", "storm"]),
                       simple_tagset("s2", ["rain", "storm"])])
    for q in (["rain"], ["storm", "rain"], ["x"]):
        assert bm25_score(q, "s1", idx) == bm25_score(q, "s2", idx)


def test_bm25_matches_brute_force_randomized():
    rng = np.random.default_rng(7)
    vocab = ["t%d" % i for i in range(8)]
    cfg = RetrievalConfig()
    for _ in range(100):
        n_docs = rng.integers(1, 11)
        docs = {}
        tagsets = []
        for d in range(n_docs):
            terms = sorted(set(rng.choice(vocab,
                                          size=rng.integers(1, 9)).tolist()))
            docs[f"d{d}"] = terms
            tagsets.append(simple_tagset(f"d{d}", terms))
        idx = build_index(tagsets)
        query = rng.choice(vocab, size=rng.integers(1, 4)).tolist()
        for sid, terms in docs.items():
            got = bm25_score(query, sid, idx, cfg)
            want = brute_force_bm25(query, terms, docs, cfg.k1, cfg.b)
            assert abs(got - want) < 1e-9


def _bank(tag_lists):
    sounds = []
    tagsets = []
    for sid, (scene, tags) in tag_lists.items():
        sounds.append(scene_sound(sid, scene))
        tagsets.append(simple_tagset(sid, tags))
    return SoundBankIndex(sounds, tagsets)


def test_detect_single_trigger():
    bank = _bank({"sfx_thunder": ("thunder", ["thunder", "boom"])})
    sent = make_sentence(["A", "thunder", "suddenly", "booms", "over",
                          "the", "heads", "."])
    trigs = detect_triggers(sent, bank)
    assert len(trigs) == 1
    assert (trigs[0].start, trigs[0].end) == (1, 1)
    assert trigs[0].scene == "thunder"
    assert trigs[0].top_sound_id == "sfx_thunder"
    assert trigs[0].retrieval_score > 0


def test_detect_no_match():
    bank = _bank({"sfx_rain": ("rain", ["rain"])})
    sent = make_sentence(["Nothing", "to", "hear", "here"])
    assert detect_triggers(sent, bank) == []


def test_detect_longest_match_wins():
    bank = _bank({
        "sfx_party": ("party", ["party", "new year party"]),
    })
    sent = make_sentence(["they", "hold", "a", "new", "year", "party"])
    trigs = detect_triggers(sent, bank)
    assert len(trigs) == 1
    assert (trigs[0].start, trigs[0].end) == (3, 5)
    assert trigs[0].matched_tag == "new year party"


def test_detect_spans_never_overlap():
    bank = _bank({
        "a": ("sea", ["sea", "deep sea"]),
        "b": ("wind", ["wind", "sea wind"]),
    })
    sent = make_sentence(["the", "deep", "sea", "wind", "blows", "sea",
                          "wind", "again"])
    trigs = detect_triggers(sent, bank)
    spans = [(t.start, t.end) for t in trigs]
    for x in range(len(spans)):
        for y in range(x + 1, len(spans)):
            (a1, b1), (a2, b2) = spans[x], spans[y]
            assert b1 < a2 or b2 < a1


def test_detect_tie_breaks_to_smallest_id():
    # both sounds own the tag with identical documents -> equal BM25 scores
    bank = _bank({
        "sfx_b": ("rain", ["rain"]),
        "sfx_a": ("rain", ["rain"]),
    })
    sent = make_sentence(["rain"])
    trigs = detect_triggers(sent, bank)
    assert trigs[0].top_sound_id == "sfx_a"


def test_argmax_stable_under_irrelevant_addition():
    base = {
        "d1": ("rain", ["rain", "storm"]),
        "d2": ("rain", ["rain"]),
        "d3": ("wind", ["wind", "rain", "cloud"]),
    }
    bank = _bank(base)
    sent = make_sentence(["rain"])
    before = detect_triggers(sent, bank)[0].top_sound_id

    extra = dict(base)
    extra["zz_unrelated"] = ("school", ["school", "bell"])
    bank2 = _bank(extra)
    after = detect_triggers(sent, bank2)[0].top_sound_id
    assert before == after
