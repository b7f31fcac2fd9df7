"""
Projecting PF vectors into an embedding space
=============================================

"""

import numpy as np

from phonofeat.ipa import chart_segments, tokenize
from phonofeat.projection import (
    chart_bit_matrix, embeddings_csv, init_projection, nearest_in_embedding,
    pf_param_count, project, table_param_count,
)
from phonofeat.zeroshot import PhonemeInventory

layer = init_projection(512, 60, seed=42, probe=chart_bit_matrix())
print(layer.weights.shape, layer.sub_seed)

# the layer is linear: an embedding is the bias plus the columns of set bits
bits = chart_bit_matrix()[0]
print(np.allclose(project(layer, bits), layer.bias + layer.weights[:, bits == 1].sum(axis=1)))

# fewer parameters than a phoneme table of 73 or 89 symbols
print(pf_param_count(512, 60), table_param_count(512, 73), table_param_count(512, 89))

inv = PhonemeInventory.from_segments("rp", tokenize("ʃ s x h k ɪ i"))
for seg, d in nearest_in_embedding(layer, tokenize("ç")[0], inv, 3):
    print(seg.render(), round(d, 3))

# CSV for t-SNE or PCA elsewhere
print(embeddings_csv(init_projection(4, 60, seed=1), chart_segments()[:3]))
