"""
From text to a PF matrix
========================

"""

from phonofeat.frontend import bundled_lexicon, bundled_mapping, text_to_utterance, to_ipa

lex = bundled_lexicon("de")
table = bundled_mapping("de")
print(len(lex), "entries")

# diphthongs become two vowels and only the first carries the stress
print(lex["zeit"])
print([s.render() for s in to_ipa(lex["zeit"], table)])

# length marks are dropped
print(lex["straße"], [s.render() for s in to_ipa(lex["straße"], table)])

utt = text_to_utterance("Ich träume, zwei Bücher.", lex, table)
print(" ".join(s.render() for s in utt.segments))
print(utt.pf_matrix.shape)
print(utt.to_csv().splitlines()[0][:80], "...")
