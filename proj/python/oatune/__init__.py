"""Taguchi L27 hyperparameter tuning for stiffness surrogate networks."""

from ._core import (
    OatuneError,
    TrainingError,
    activation,
    activation_grad,
    aspect_ratio,
    build_l27,
    build_orthogonal_array,
    cli,
    compute_metrics,
    decode_run,
    describe,
    engineering_constants,
    generate_synthetic,
    isotropic_stiffness,
    main_effects,
    select_optimum,
    sn_larger_better,
    split_dataset,
    train,
    verify_strength2,
)

__all__ = [
    "OatuneError",
    "TrainingError",
    "activation",
    "activation_grad",
    "aspect_ratio",
    "build_l27",
    "build_orthogonal_array",
    "cli",
    "compute_metrics",
    "decode_run",
    "describe",
    "engineering_constants",
    "generate_synthetic",
    "isotropic_stiffness",
    "main_effects",
    "select_optimum",
    "sn_larger_better",
    "split_dataset",
    "train",
    "verify_strength2",
]
