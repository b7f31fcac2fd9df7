"""
Unseen phoneme rate of a test set
=================================

"""

from phonofeat.frontend import bundled_lexicon, bundled_mapping, iter_utterances
from phonofeat.ipa import tokenize
from phonofeat.metrics import format_inventory_table, format_testset_table, inventory_stats, testset_stats, upr
from phonofeat.zeroshot import PhonemeInventory

rp = PhonemeInventory.from_segments("rp", tokenize(
    "p b t d k ɡ t͡ʃ d͡ʒ f v θ ð s z ʃ ʒ h m n ŋ l ɹ j w i ɪ e æ ɑ ɒ ɔ ʊ u ʌ ə ɜ"))
lex, table = bundled_lexicon("de"), bundled_mapping("de")
# every phoneme of the sample German lexicon
german = PhonemeInventory.from_segments(
    "de", [s for u in iter_utterances(lex.entries, lex, table) for s in u.segments])

print(format_inventory_table([("rp", *inventory_stats(rp, german))]))

sentences = ["Ich träume.", "Zwei Bücher, drei Bäume.", "Haus Himmel."]
utts = list(iter_utterances(sentences, lex, table))
for u in utts:
    print(u.text, upr(u, rp))
print(format_testset_table([("de", testset_stats(utts, rp))]))
