"""Learned clause selection for a small saturation prover."""

from ._enigma import (
    Clause,
    Corpus,
    EnigmaError,
    Model,
    Problem,
    ProofSearchRecord,
    Signature,
    Strategy,
    baseline_strategy,
    clause_len,
    extract_examples,
    feature_dimension,
    feature_index,
    greedy_cover,
    literal_features,
    load_corpus,
    load_model,
    load_problem,
    loop,
    parse_clause,
    parse_problem,
    parse_strategy,
    preweight,
    prove,
    train,
    weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
