"""Topic signatures for word senses."""

from ._topsig import (
    ConfigError,
    Error,
    Lexicon,
    TopicSignature,
    WordSense,
    WsdReport,
    build,
    build_signatures,
    eval,
    evaluate_tagged,
    filter,
    format_weight,
    lemmatize,
    query,
    random_baseline,
    tokenize,
)

__all__ = [
    "ConfigError",
    "Error",
    "Lexicon",
    "TopicSignature",
    "WordSense",
    "WsdReport",
    "build",
    "build_signatures",
    "eval",
    "evaluate_tagged",
    "filter",
    "format_weight",
    "lemmatize",
    "query",
    "random_baseline",
    "tokenize",
]
