"""Quality classification of medical wiki articles.

The pipeline runs wikitext parsing, tokenisation and dictionary entity
matching into eight per-article features, then class rebalancing
(undersampling and SMOTE) and a random forest evaluated by stratified
cross-validation.
"""

from .corpus import QUALITY_CLASSES, CorpusError, RawArticle, read_corpus, write_corpus
from .dataset import Dataset
from .dictionary import Dictionary, EntityMention, MatchKind, SemanticGroup, load_dictionary, match_entities
from .features import FEATURE_NAMES, VARIANTS, FeatureVector, extract_all, extract_features, read_feature_csv
from .learn import ForestConfig, ForestModel, cross_validate, info_gain, rank_features, train_forest
from .sampling import SmoteConfig, rebalance, smote, undersample
from .text import NLPResources, default_resources, lemmatize, load_resources, tokenize
from .wikitext import StructuralElements, TitleIndex, build_title_index, parse_wikitext

__version__ = "0.1.0"

__all__ = [
    "FEATURE_NAMES",
    "QUALITY_CLASSES",
    "VARIANTS",
    "CorpusError",
    "Dataset",
    "Dictionary",
    "EntityMention",
    "FeatureVector",
    "ForestConfig",
    "ForestModel",
    "MatchKind",
    "NLPResources",
    "RawArticle",
    "SemanticGroup",
    "SmoteConfig",
    "StructuralElements",
    "TitleIndex",
    "build_title_index",
    "cross_validate",
    "default_resources",
    "extract_all",
    "extract_features",
    "info_gain",
    "lemmatize",
    "load_dictionary",
    "load_resources",
    "match_entities",
    "parse_wikitext",
    "rank_features",
    "read_corpus",
    "read_feature_csv",
    "rebalance",
    "smote",
    "tokenize",
    "train_forest",
    "undersample",
    "write_corpus",
]
