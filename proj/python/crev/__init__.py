"""Code review mining, abstraction, dataset and evaluation primitives."""

from ._crev import (
    DEFAULT_MAX_LEN,
    END_OF_SEQUENCE,
    ConfigError,
    CrevError,
    FormatError,
    UnmappableTokenError,
    abstract_comment,
    abstract_method,
    beam_search,
    bleu4,
    code_tokens,
    concretize,
    evaluate,
    extract_methods,
    format_predictions,
    heuristic_relevance,
    normalized_levenshtein,
    parse_predictions,
    porter_stem,
    read_pairs,
    run_subcommand,
)

__all__ = [
    "DEFAULT_MAX_LEN",
    "END_OF_SEQUENCE",
    "ConfigError",
    "CrevError",
    "FormatError",
    "UnmappableTokenError",
    "abstract_comment",
    "abstract_method",
    "beam_search",
    "bleu4",
    "code_tokens",
    "concretize",
    "evaluate",
    "extract_methods",
    "format_predictions",
    "heuristic_relevance",
    "normalized_levenshtein",
    "parse_predictions",
    "porter_stem",
    "read_pairs",
    "run_subcommand",
]
