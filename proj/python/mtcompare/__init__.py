"""Merge-tree comparison of time-varying scalar fields."""

from ._mtcompare import (
    InputError,
    Labeling,
    MergeTree,
    MetricError,
    TreeError,
    analyze_series,
    bottleneck_distance,
    build_merge_tree,
    cophenetic_distance,
    induced_matrix,
    interleaving_distance,
    label_pair,
    leaf_labeling,
    morse_labels,
    persistence_pairs,
    simplify,
    synthetic_series,
    wasserstein_distance,
)

__all__ = [
    "InputError",
    "Labeling",
    "MergeTree",
    "MetricError",
    "TreeError",
    "analyze_series",
    "bottleneck_distance",
    "build_merge_tree",
    "cophenetic_distance",
    "induced_matrix",
    "interleaving_distance",
    "label_pair",
    "leaf_labeling",
    "morse_labels",
    "persistence_pairs",
    "simplify",
    "synthetic_series",
    "wasserstein_distance",
]
