"""Wave equation with an aging memory kernel: solver and diagnostics."""

from .kernels import (BASE_SHAPES, TIME_PROFILES, ConfigError, KernelReport,
                      MemoryKernel, RescaledKernel, RheologicalKernel,
                      ZeroKernel, kv_mass, validate_assumptions)
from .grids import AgeGrid
from .history import (HistorySnapshot, MemoryNormSpec, eta_eval, memory_norm,
                      slice_norm_series)
from .spectral import Nonlinearity, Spectrum, make_nonlinearity
from .solver import RunRecord, SolveDiverged, WaveModel, solve
from .oracles import (KVConfig, exp_kernel_oracle, kv_limit_experiment,
                      continuous_dependence_experiment, kv_solve)
from .rheology import (DeltaLimitRow, StrainHistory, delta_limit_diagnostics,
                       stress_response)

__all__ = [
    "AgeGrid", "BASE_SHAPES", "ConfigError", "DeltaLimitRow",
    "HistorySnapshot", "KVConfig", "KernelReport", "MemoryKernel",
    "MemoryNormSpec", "Nonlinearity", "RescaledKernel", "RheologicalKernel",
    "RunRecord", "SolveDiverged", "Spectrum", "StrainHistory",
    "TIME_PROFILES", "WaveModel", "ZeroKernel",
    "continuous_dependence_experiment", "delta_limit_diagnostics",
    "eta_eval", "exp_kernel_oracle", "kv_limit_experiment", "kv_mass",
    "kv_solve", "make_nonlinearity", "memory_norm", "slice_norm_series",
    "solve", "stress_response", "validate_assumptions",
]
