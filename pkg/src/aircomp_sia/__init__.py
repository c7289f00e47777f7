"""Two-cell multi-antenna AirComp with simultaneous signal-and-interference
alignment: matrix construction, Monte Carlo engine and closed-form baselines."""

from .__about__ import __version__
from .baselines import (
    ConventionalPartition,
    EfficiencyReport,
    build_no_ia_precoders,
    communication_efficiency,
    conventional_ia_array_size,
    conventional_partition_dimensions,
    efficiency_report,
    genie_channels,
    no_ia_precoder,
    optimal_partition_search,
    sia_array_size,
)
from .engine import (
    SweepPoint,
    SweepResult,
    TrialResult,
    analytic_noise_mse,
    fit_nmse_slope,
    run_functional_trial,
    run_sweep,
    run_trial,
    worker_count,
)
from .errors import (
    AirCompError,
    ConfigError,
    DegenerateChannels,
    DomainError,
    NearSingular,
    RankDeficient,
    SizeMismatch,
)
from .functions import FunctionSpec, postprocess, preprocess
from .linalg import (
    gaussian_matrix,
    inverse,
    left_null_space_basis,
    numerical_rank,
    right_inverse,
)
from .sia import (
    SiaMatrices,
    aligned_interference_dimension,
    build_aggregation_beamformers,
    build_precoder,
    build_reference_matrices,
    build_sia_matrices,
    recover,
)
from .system import (
    ChannelSet,
    Partition,
    SystemConfig,
    draw_channels,
    draw_symbols,
    parse_config_file,
    partition,
    receive,
    superpose,
)

__all__ = [
    "__version__",
    "AirCompError", "ConfigError", "DegenerateChannels", "DomainError",
    "NearSingular", "RankDeficient", "SizeMismatch",
    "gaussian_matrix", "inverse", "right_inverse", "left_null_space_basis",
    "numerical_rank",
    "SystemConfig", "Partition", "partition", "ChannelSet", "draw_channels",
    "draw_symbols", "superpose", "receive", "parse_config_file",
    "SiaMatrices", "build_reference_matrices", "build_aggregation_beamformers",
    "build_precoder", "build_sia_matrices", "aligned_interference_dimension",
    "recover",
    "conventional_ia_array_size", "sia_array_size", "communication_efficiency",
    "optimal_partition_search", "conventional_partition_dimensions",
    "ConventionalPartition", "EfficiencyReport", "efficiency_report",
    "no_ia_precoder", "build_no_ia_precoders", "genie_channels",
    "FunctionSpec", "preprocess", "postprocess",
    "TrialResult", "SweepPoint", "SweepResult", "run_trial", "run_sweep",
    "run_functional_trial", "analytic_noise_mse", "fit_nmse_slope",
    "worker_count",
]
