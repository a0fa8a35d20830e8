"""Python bindings for the taexplore C++ core."""

from taexplore._core import (
    BetaSchedule,
    ConfigError,
    ContractViolation,
    FourTankEnv,
    RandomWalkEnv,
    TempControlEnv,
    beta_at,
    blend,
    moving_average,
    ppo_train,
    resolve_config,
    rms_error,
    run_config,
    run_config_file,
    run_td_experiment,
    rw_true_values,
)

__all__ = [
    "BetaSchedule",
    "ConfigError",
    "ContractViolation",
    "FourTankEnv",
    "RandomWalkEnv",
    "TempControlEnv",
    "beta_at",
    "blend",
    "moving_average",
    "ppo_train",
    "resolve_config",
    "rms_error",
    "run_config",
    "run_config_file",
    "run_td_experiment",
    "rw_true_values",
]
