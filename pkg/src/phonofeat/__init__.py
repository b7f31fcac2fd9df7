"""Phonological-feature input pipeline for zero-shot TTS.

IPA strings are parsed into segments, analyzed into 10 categorical
phonological features and one-hot encoded into 60 bits.  Around that sit a
lexicon frontend, out-of-sample phoneme strategies, a linear projection
layer and unseen-phoneme-rate statistics.
"""

from .chart import DEFAULT_CHART, IPAChart, export_chart_json
from .errors import PhonofeatError
from .frontend import (
    Lexicon, MappingTable, Utterance, load_lexicon, load_mapping, text_to_utterance, to_ipa,
)
from .ipa import Segment, analyze, encode, load_overrides, parse_segment, render, tokenize
from .metrics import inventory_stats, testset_stats, upr
from .projection import (
    ProjectionLayer, export_embeddings, init_projection, nearest_in_embedding, project,
)
from .schema import DEFAULT_SCHEMA, FeatureDef, FeatureSchema, PFVector, binarize, debinarize, load_schema
from .zeroshot import (
    PhonemeInventory, ZeroShotPlan, build_plan, detect_oos, pf_distance, suggest_nearest,
)

__version__ = "0.1.0"
