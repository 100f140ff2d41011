"""Far-field sensing model: prior, kernel and signal covariance."""
from .sensing_model import (
    CandidateGrid,
    PriorSpec,
    SensingModel,
    build_model,
    build_prior,
    kernel_matrix,
    kernel_row,
    noise_variance,
    sinc,
)

__all__ = [
    'CandidateGrid',
    'PriorSpec',
    'SensingModel',
    'build_model',
    'build_prior',
    'kernel_matrix',
    'kernel_row',
    'noise_variance',
    'sinc',
]
