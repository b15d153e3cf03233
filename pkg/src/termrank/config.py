"""Pipeline configuration: a tree of plain-value settings.

The whole tree serializes to human-editable JSON.  The canonical form
(sorted keys, compact separators) is byte-stable, so two configurations
are equal exactly when their canonical strings are equal; stage cache
keys hash that string.  Unknown fields are rejected by name so that a
typo in a hand-edited file cannot silently fall back to a default.
"""

import json
from pathlib import Path

from .candidates import DEFAULT_NOISE_PATTERN, DEFAULT_POS_PATTERN
from .errors import ConfigError

__all__ = [
    "SCORER_DEFAULTS",
    "RANKER_DEFAULTS",
    "DEFAULT_PU_FEATURES",
    "default_config",
    "config_from_dict",
    "config_to_dict",
    "canonical_json",
    "load_config",
    "save_config",
    "config_roundtrip",
]

# The six weakly-correlated features (one per information source) that the
# PU ranker and Voting aggregate by default.
DEFAULT_PU_FEATURES = [
    "cvalue",
    "domain_coherence",
    "relevance",
    "novel_topic_model",
    "link_probability",
    "key_concept_relatedness",
]

PREPROCESSING_DEFAULTS = {"input_format": "annotated"}

CANDIDATE_DEFAULTS = {
    "ngram_min": 1,
    "ngram_max": 4,
    "min_lemma_length": 3,
    "noise_pattern": DEFAULT_NOISE_PATTERN,
    "stop_words_path": None,
    "pos_pattern": DEFAULT_POS_PATTERN,
    "min_term_frequency": 2,
}

SCORER_DEFAULTS = {
    "tf": {},
    "atf": {},
    "tfidf": {},
    "ridf": {},
    "cvalue": {},
    "basic": {"alpha": 0.75, "multiword_only": False},
    "combobasic": {"alpha": 0.75, "beta": 0.1, "multiword_only": False},
    "domain_coherence": {
        "window": 5,
        "top_terms": 200,
        "context_words": 50,
        "basic_alpha": 0.75,
        "min_doc_fraction": 0.25,
    },
    "domain_pertinence": {"smoothing": 1.0},
    "weirdness": {"smoothing": 1.0},
    "relevance": {"smoothing": 1.0},
    "novel_topic_model": {
        "n_topics": 20,
        "alpha": None,
        "beta": 0.01,
        "lambda_background": 0.1,
        "lambda_docspec": 0.1,
        "lambda_general": 0.8,
        "iterations": 500,
        "top_words": 200,
        "seed": 13,
    },
    "wiki_presence": {},
    "link_probability": {"threshold": 0.018},
    "key_concept_relatedness": {
        "per_doc": 15,
        "total": 500,
        "k": 2,
        "first_words_limit": 800,
    },
}

RANKER_DEFAULTS = {
    "single": {"feature": "cvalue"},
    "linear": {"features": list(DEFAULT_PU_FEATURES), "weights": None},
    "voting": {"features": list(DEFAULT_PU_FEATURES)},
    "pu_atr": {
        "features": list(DEFAULT_PU_FEATURES),
        "seed_count": 100,
        "spy_fraction": 0.15,
        "neg_threshold": 0.05,
        "seed_alpha": 0.75,
        "seed_beta": 0.1,
        "rng_seed": 42,
        "learning_rate": 0.1,
        "l2": 1e-4,
        "epochs": 500,
    },
}

EVALUATION_DEFAULTS = {"lemmatize_gold": False}

# Optional grid-search block: which method to sweep and the axis values.
GRID_DEFAULTS = {"target": None, "method": None, "axes": {}}


def _merge_section(defaults, data, context):
    unknown = set(data) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown field {sorted(unknown)[0]!r} in {context}")
    merged = dict(defaults)
    merged.update(data)
    return merged


def _method_section(registry, data, context):
    if "method" not in data:
        raise ConfigError(f"missing 'method' in {context}")
    method = data["method"]
    if method not in registry:
        raise ConfigError(f"unknown method {method!r} in {context}")
    params = {k: v for k, v in data.items() if k != "method"}
    merged = _merge_section(registry[method], params, f"{context} ({method})")
    return {"method": method, **merged}


def default_config():
    return config_from_dict({})


def config_from_dict(data):
    """Validate and fill defaults; raises ConfigError naming any unknown field."""
    top_known = {"preprocessing", "candidates", "scorers", "ranker",
                 "evaluation", "grid"}
    unknown = set(data) - top_known
    if unknown:
        raise ConfigError(f"unknown field {sorted(unknown)[0]!r} in config")

    cfg = {
        "preprocessing": _merge_section(
            PREPROCESSING_DEFAULTS, data.get("preprocessing", {}), "preprocessing"),
        "candidates": _merge_section(
            CANDIDATE_DEFAULTS, data.get("candidates", {}), "candidates"),
        "scorers": [
            _method_section(SCORER_DEFAULTS, s, "scorers")
            for s in data.get("scorers", [{"method": "cvalue"}])
        ],
        "ranker": _method_section(
            RANKER_DEFAULTS, data.get("ranker", {"method": "single"}), "ranker"),
        "evaluation": _merge_section(
            EVALUATION_DEFAULTS, data.get("evaluation", {}), "evaluation"),
    }
    if "grid" in data:
        cfg["grid"] = _merge_section(GRID_DEFAULTS, data["grid"], "grid")

    if cfg["preprocessing"]["input_format"] not in ("annotated", "plain"):
        raise ConfigError("preprocessing.input_format must be 'annotated' or 'plain'")
    cand = cfg["candidates"]
    if cand["ngram_min"] < 1 or cand["ngram_max"] < cand["ngram_min"]:
        raise ConfigError("candidates.ngram_min/ngram_max out of order")
    if cand["min_term_frequency"] < 1:
        raise ConfigError("candidates.min_term_frequency must be >= 1")

    methods = [s["method"] for s in cfg["scorers"]]
    if len(set(methods)) != len(methods):
        raise ConfigError("duplicate scorer method in config")
    ranker = cfg["ranker"]
    if ranker["method"] == "single":
        if ranker["feature"] not in methods:
            raise ConfigError(
                f"ranker feature {ranker['feature']!r} is not a configured scorer")
    elif ranker["method"] in ("linear", "voting", "pu_atr"):
        missing = [f for f in ranker["features"] if f not in methods]
        if missing:
            raise ConfigError(
                f"ranker feature {missing[0]!r} is not a configured scorer")
        if ranker["method"] == "linear" and ranker["weights"] is not None:
            if len(ranker["weights"]) != len(ranker["features"]):
                raise ConfigError("linear ranker needs one weight per feature")
    return cfg


def config_to_dict(cfg):
    return json.loads(json.dumps(cfg))


def canonical_json(obj):
    """Byte-stable serialization: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def load_config(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config root must be a JSON object")
    return config_from_dict(data)


def save_config(cfg, path):
    Path(path).write_text(
        json.dumps(cfg, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def config_roundtrip(cfg):
    """Serialize and re-parse; the canonical form must be unchanged."""
    reparsed = config_from_dict(json.loads(canonical_json(cfg)))
    assert canonical_json(reparsed) == canonical_json(cfg)
    return reparsed
