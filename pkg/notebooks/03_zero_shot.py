"""
German phonemes through an English inventory
=============================================

"""

from phonofeat.frontend import bundled_lexicon, bundled_mapping, text_to_utterance
from phonofeat.ipa import tokenize
from phonofeat.zeroshot import (
    PhonemeInventory, build_plan, detect_oos, encode_with_plan, suggest_nearest,
)

rp = PhonemeInventory.from_segments("rp", tokenize(
    "p b t d k ɡ t͡ʃ d͡ʒ f v θ ð s z ʃ ʒ h m n ŋ l ɹ j w i ɪ e æ ɑ ɒ ɔ ʊ u ʌ ə ɜ"))
utt = text_to_utterance("Ich träume, zwei Bücher.", bundled_lexicon("de"), bundled_mapping("de"))

oos = detect_oos(utt.segments, rp)
print("OOS:", " ".join(s.render() for s in oos))

# nearest English phonemes by feature distance
for seg in oos:
    print(seg.render(), [(t.render(), d) for t, d in suggest_nearest(seg, rp, 3)])

# auto keeps the German feature vectors as they are
auto = build_plan("auto", oos, rp)
assert (encode_with_plan(utt.segments, auto, rp) == utt.pf_matrix).all()

# manual substitutes, with one expert choice
manual = build_plan("manual", oos, rp, manual_overrides={"ʏ": "ɪ"})
print(manual.dumps())

# random gives each OOS phoneme a fresh embedding-table row
rnd = build_plan("random", oos, rp, seed=42, embedding_dim=8)
print(rnd.vectors.round(3))
