"""Simulated complex Fourier-transform acquisition with chaotic light."""

__version__ = "0.1.0"

from .analysis import ComparisonReport, compare, fit_complex_scale, nrmse, pearson  # noqa: E402
from .elements import (  # noqa: E402
    PhasePlateSetting,
    Transmittance,
    apply_object,
    arm_phases,
    beam_splitter_mix,
)
from .experiment import (  # noqa: E402
    AcquisitionResult,
    ExperimentConfig,
    assemble_complex_ft,
    coherent_mode_oracle,
    default_config,
    invert_to_object,
    run_acquisition,
)
from .grid import ComplexField, Grid, SystemGeometry, apply_phase, flip, grid_positions, intensity  # noqa: E402
from .objects import (  # noqa: E402
    ConceivedObjectParams,
    analytic_ft_imag,
    analytic_ft_real,
    conceived_object,
    rect,
    sample_transmittance,
    sinc,
)
from .propagation import TransferMatrix, build_transfer_matrix, fresnel_kernel, propagate, validate_sampling  # noqa: E402
from .source import SourceConfig, realization_seed, sample_thermal  # noqa: E402
