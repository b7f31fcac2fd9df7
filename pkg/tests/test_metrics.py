import pytest

from phonofeat.errors import MetricsError
from phonofeat.ipa import tokenize
from phonofeat import metrics
from phonofeat.metrics import (
    TestSetStats, count_words, format_inventory_table, format_testset_table, inventory_stats,
    stats_json, upr,
)
from phonofeat.zeroshot import PhonemeInventory

INV = PhonemeInventory.from_segments("x", tokenize("p t k a i u s"))


def test_one_in_twenty():
    # 4 + 4 + 6 + 6 phonemes, the last one [ç]
    utt = tokenize("p a t a # k a p i # s u t u k a # p i t a p ç .")
    st = upr(utt, INV)
    assert (st.phoneme_count, st.oos_count, st.word_count) == (20, 1, 4)
    assert st.upr_percent == 5.0


def test_no_oos_and_all_oos():
    assert upr(tokenize("p a"), INV).upr_percent == 0.0
    assert upr(tokenize("ç ʏ # ç"), INV).upr_percent == 100.0


def test_boundaries_excluded():
    a = upr(tokenize("p ç"), INV)
    b = upr(tokenize("_ p # ç . _"), INV)
    assert (a.phoneme_count, a.oos_count) == (b.phoneme_count, b.oos_count)


def test_type_counting():
    st = upr(tokenize("ç ç ç p"), INV, types=True)
    assert (st.phoneme_count, st.oos_count) == (2, 1)
    assert upr(tokenize("ç ç ç p"), INV).upr_percent == 75.0


def test_stress_and_length_are_not_new_phonemes():
    assert upr(tokenize("ˈaː"), INV).oos_count == 0


def test_zero_phonemes():
    with pytest.raises(MetricsError):
        upr(tokenize("# ."), INV)


def test_count_words():
    assert count_words(tokenize("p a # t a . _ k")) == 3
    assert count_words(tokenize("")) == 0


def test_inventory_stats():
    a = PhonemeInventory.from_segments("a", tokenize("p t k s m"))
    b = PhonemeInventory.from_segments("b", tokenize("a i u"))
    assert inventory_stats(a, b) == (5, 3)
    assert inventory_stats(a, PhonemeInventory.from_segments("c", tokenize("p t"))) == (5, 0)


def test_inventory_stats_stress_variants():
    corpus = PhonemeInventory.from_segments("c", tokenize("a ˈa p"), count_stress_variants=True)
    target = PhonemeInventory.from_segments("t", tokenize("ˈi i"), count_stress_variants=True)
    assert inventory_stats(corpus, target) == (3, 2)
    plain = PhonemeInventory.from_segments("c", tokenize("a ˈa p"))
    assert inventory_stats(plain, PhonemeInventory.from_segments("t", tokenize("ˈi i"))) == (2, 1)


def test_testset_stats():
    single = metrics.testset_stats([tokenize("p ç")], INV)
    assert single.upr_min == single.upr_max == single.upr_mean == 50.0
    # 0/4, 1/5, 2/8 -> 0, 20, 25; mean 15
    s = metrics.testset_stats([tokenize("p a # t a"), tokenize("p a t ʏ i"),
                               tokenize("ç a # p a # t ç # k a")], INV)
    assert (s.upr_min, s.upr_max) == (0.0, 25.0)
    assert s.upr_mean == pytest.approx(15.0, rel=1e-12)
    assert (s.length_min, s.length_max) == (1, 4)


def test_two_sets_mean():
    # 0% and 4%: 25 phonemes, one OOS
    zero = tokenize("p a")
    four = tokenize("p a t a k a p i s u t u k a p i t a p u k i s a ç")
    s = metrics.testset_stats([zero, four], INV)
    assert s.upr_mean == pytest.approx(2.0, rel=1e-12)
    assert (s.length_min, s.length_max, s.sentence_count) == (1, 1, 2)


def test_empty_testset():
    with pytest.raises(MetricsError):
        metrics.testset_stats([], INV)


def test_tables_and_json():
    text = format_inventory_table([("VCTK", 73, 14), ("MIX", 89, 9)])
    lines = text.splitlines()
    assert lines[0].split() == ["Corpus", "Phonemes", "OOS"]
    assert lines[2].split() == ["VCTK", "73", "14"]
    stats = TestSetStats(30, 7, 7, 0.0, 5.6, 2.9)
    row = format_testset_table([("1", stats)]).splitlines()[2].split()
    assert row == ["1", "30", "7", "0.0-5.6", "2.9"]
    assert '"upr_mean": 2.9' in stats_json(stats)
