"""Python bindings for the mtal multi-task active learning library."""

import json

from ._core import (
    ConfigError,
    CorpusError,
    LexiconError,
    ModelError,
    bce_loss,
    binary_entropy,
    clean,
    combine_dynamic,
    combine_equal,
    combine_weighted,
    default_emoji_lexicon,
    dynamic_offensive_weight,
    encode,
    is_idempotent,
    loss_weights_dynamic,
    loss_weights_equal,
    loss_weights_static,
    macro_f1,
    normalize,
    preprocess_line,
    render_config,
    select_top_k,
    sigmoid,
    write_synthetic,
)
from ._core import train as _train


def train(config_text, train, dev, test=None, base_dir="."):
    """Run one experiment; returns the report as a dict."""
    return json.loads(_train(config_text, train, dev, test, base_dir))


def train_json(config_text, train, dev, test=None, base_dir="."):
    """Same as train() but returns the serialized report text."""
    return _train(config_text, train, dev, test, base_dir)


__all__ = [
    "ConfigError",
    "CorpusError",
    "LexiconError",
    "ModelError",
    "bce_loss",
    "binary_entropy",
    "clean",
    "combine_dynamic",
    "combine_equal",
    "combine_weighted",
    "default_emoji_lexicon",
    "dynamic_offensive_weight",
    "encode",
    "is_idempotent",
    "loss_weights_dynamic",
    "loss_weights_equal",
    "loss_weights_static",
    "macro_f1",
    "normalize",
    "preprocess_line",
    "render_config",
    "select_top_k",
    "sigmoid",
    "train",
    "train_json",
    "write_synthetic",
]
