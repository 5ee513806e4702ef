from ._fomlab import (
    Calibration,
    Circuit,
    FomlabError,
    ForestModel,
    NoiseConfig,
    esp,
    expected_fidelity,
    extract_features,
    feature_schema,
    hellinger,
    pearson,
    sample_noisy,
    score_all,
    simulate_ideal,
    train_forest,
)

__all__ = [
    "Calibration",
    "Circuit",
    "FomlabError",
    "ForestModel",
    "NoiseConfig",
    "esp",
    "expected_fidelity",
    "extract_features",
    "feature_schema",
    "hellinger",
    "pearson",
    "sample_noisy",
    "score_all",
    "simulate_ideal",
    "train_forest",
]
