import numpy as np
import pytest

from conftest import make_sentence
from soundcue.corpus import SELF, LexiconSet
from soundcue.errors import DataError
from soundcue.features import (DEP_OFFSET, FEATURE_MASKS, N_FEATURES, N_POS,
                               apply_mask,
                               count_special_words, dep_one_hot,
                               extract_features, load_deprel_map,
                               mask_by_name, pos_one_hot, trigger_head_index)


def test_count_subjunctive(lexicons):
    sent = make_sentence(["Little", "Piggy", "plans", "to", "go", "on", "a",
                          "picnic", "in", "the", "forest"])
    counts = count_special_words(sent, lexicons)
    assert counts[0] == 1  # subjunctive: "plans"


def test_count_no_hits(lexicons):
    sent = make_sentence(["an", "empty", "afternoon"])
    assert count_special_words(sent, lexicons).tolist() == [0] * 7


def test_count_negative_and_action(lexicons):
    sent = make_sentence(["The", "rabbit", "doesn't", "run", "but", "looks",
                          "around"])
    counts = count_special_words(sent, lexicons)
    assert counts[3] == 1  # negative: "doesn't"
    assert counts[1] == 1  # action: "run"


def test_count_multi_token_entry(lexicons):
    sent = make_sentence(["since", "then", "it", "rained"])
    counts = count_special_words(sent, lexicons)
    assert counts[6] == 1  # future: "since then"


def test_count_once_per_start_position():
    lex = LexiconSet.from_words(
        subjunctive=[], action=["knock", "knock on"], weather=[],
        negative=[], past=[], now=[], future=[])
    sent = make_sentence(["knock", "on", "the", "door"])
    counts = count_special_words(sent, lex)
    assert counts[1] == 1  # both entries start at 0, counted once


def test_pos_one_hot_sentence_start():
    sent = make_sentence(["forest", "life"], pos=["NOUN", "NOUN"])
    block = pos_one_hot(sent, 0, 0)
    assert block[:N_POS].sum() == 0  # no token before
    assert block[N_POS:2 * N_POS].sum() == 1
    assert block[2 * N_POS:].sum() == 1


def test_pos_one_hot_single_noun_trigger():
    sent = make_sentence(["the", "rain", "falls"],
                         pos=["DET", "NOUN", "VERB"],
                         heads=[1, SELF, 1])
    block = pos_one_hot(sent, 1, 1)
    middle = block[N_POS:2 * N_POS]
    assert middle.sum() == 1
    from soundcue.corpus import POS_INDEX
    assert middle[POS_INDEX["NOUN"]] == 1


def test_head_token_outside_span():
    # "dancing party": head of "party" is the verb outside the span
    sent = make_sentence(["shows", "at", "the", "dancing", "party"],
                         pos=["VERB", "ADP", "DET", "VERB", "NOUN"],
                         heads=[SELF, 4, 4, 4, 0])
    assert trigger_head_index(sent, 3, 4) == 4
    block = pos_one_hot(sent, 3, 4)
    from soundcue.corpus import POS_INDEX
    assert block[N_POS + POS_INDEX["NOUN"]] == 1


def test_head_token_fallback_last():
    # every head inside the span -> last span token
    sent = make_sentence(["a", "b"], heads=[1, 0])
    assert trigger_head_index(sent, 0, 1) == 1


def test_dep_one_hot_subject(deprel_map):
    sent = make_sentence(["rain", "falls"], pos=["NOUN", "VERB"],
                         heads=[1, SELF], deprels=["nsubj", "root"])
    block = dep_one_hot(sent, 0, 0, deprel_map)
    assert block[0] == 1  # Subject


def test_dep_one_hot_attribute_of_noun(deprel_map):
    # "the forest doctor": forest modifies the noun doctor
    sent = make_sentence(["the", "forest", "doctor"],
                         pos=["DET", "NOUN", "NOUN"],
                         heads=[2, 2, SELF],
                         deprels=["det", "compound", "root"])
    block = dep_one_hot(sent, 1, 1, deprel_map)
    assert block[3] == 1  # AttributeOfNoun


def test_dep_one_hot_attribute_of_verb(deprel_map):
    sent = make_sentence(["storm", "roaring"], pos=["NOUN", "VERB"],
                         heads=[1, SELF], deprels=["nmod", "root"])
    block = dep_one_hot(sent, 0, 0, deprel_map)
    assert block[2] == 1  # AttributeOfVerb


def test_dep_one_hot_unmapped_is_other(deprel_map):
    sent = make_sentence(["thunder"], heads=[SELF], deprels=["root"])
    block = dep_one_hot(sent, 0, 0, deprel_map)
    assert block[5] == 1  # Other


def test_load_deprel_map_missing_file(tmp_path):
    with pytest.raises(DataError, match="not found"):
        load_deprel_map(tmp_path / "nope.json")


def test_load_deprel_map_default_packaged():
    from soundcue.cli import DEFAULT_DEPREL_MAP
    mapping = load_deprel_map(DEFAULT_DEPREL_MAP)
    assert mapping["nsubj"] == "subject"
    assert mapping["amod"] == "attribute"


def test_extract_features_shape_and_determinism(lexicons, deprel_map):
    sent = make_sentence(["A", "thunder", "suddenly", "booms"],
                         pos=["DET", "NOUN", "ADV", "VERB"],
                         heads=[1, 3, 3, SELF],
                         deprels=["det", "nsubj", "advmod", "root"])
    v1 = extract_features(sent, 1, 1, lexicons, deprel_map)
    v2 = extract_features(sent, 1, 1, lexicons, deprel_map)
    assert v1.shape == (N_FEATURES,)
    assert np.array_equal(v1, v2)
    assert v1[1] == 1  # action: "booms"
    assert v1[5] == 1  # now: "suddenly"
    assert v1[DEP_OFFSET] == 1  # Subject


def test_one_hot_blocks_sum_zero_or_one(lexicons, deprel_map):
    rng = np.random.default_rng(3)
    pos_tags = ["NOUN", "VERB", "ADJ", "ADV", "DET", "ADP"]
    for _ in range(50):
        n = int(rng.integers(1, 8))
        words = [f"w{i}" for i in range(n)]
        pos = [pos_tags[i] for i in rng.integers(0, len(pos_tags), n)]
        heads = [SELF] + [int(rng.integers(0, n)) for _ in range(n - 1)]
        sent = make_sentence(words, pos=pos, heads=heads)
        i = int(rng.integers(0, n))
        j = int(rng.integers(i, n))
        v = extract_features(sent, i, j, lexicons, deprel_map)
        for off in (7, 24, 41):
            assert v[off:off + N_POS].sum() in (0.0, 1.0)
        assert v[DEP_OFFSET:DEP_OFFSET + 6].sum() == 1.0


def test_apply_mask():
    v = np.arange(N_FEATURES, dtype=float) + 1
    assert np.array_equal(apply_mask(v, frozenset()), v)

    masked = apply_mask(v, FEATURE_MASKS["SpecialWords"])
    assert masked[:7].tolist() == [0.0] * 7
    assert np.array_equal(masked[7:], v[7:])

    once = apply_mask(v, FEATURE_MASKS["NowWords"])
    twice = apply_mask(once, FEATURE_MASKS["NowWords"])
    assert np.array_equal(once, twice)

    with pytest.raises(DataError):
        apply_mask(v, {99})


def test_mask_names():
    assert mask_by_name("None") == frozenset()
    assert mask_by_name("POS") == frozenset(range(7, 58))
    with pytest.raises(DataError):
        mask_by_name("Bogus")
