"""
Phonological features of IPA segments
=====================================

"""

# the default schema: ten categorical features, one-hot coded
from phonofeat import DEFAULT_SCHEMA
print(DEFAULT_SCHEMA.total_bits, "bits")
for f in DEFAULT_SCHEMA.features:
    print(f"{f.name:14s} {f.bit_offset:3d}  {', '.join(f.values)}")

# a segment is a base symbol plus diacritics, stress and length
from phonofeat.ipa import analyze, encode, tokenize
segs = tokenize("ˈpʰɑː.t͡sə # ã")
for s in segs:
    print(s.render(), s.kind)

# categorical record of the aspirated plosive
print(analyze(segs[0]).categorical)

# the utterance as a bit matrix; every feature block has at most one bit set
m = encode(segs)
print(m.shape)
print(m[:, :10])
