"""Scene simulation, posterior inference and Monte-Carlo evaluation."""
from .inference import (
    PosteriorOperator,
    PosteriorResult,
    SceneSample,
    circular_normal,
    posterior,
    posterior_operator,
    posterior_trace,
    sample_scene,
    scene_mse,
    simulate_measurements,
    synthesize_scene,
    trial_stream,
)
from .monte_carlo import MSE_COLUMNS, MonteCarloEngine, MonteCarloMetrics, MSECell, design_label, mc_mse

__all__ = [
    'MSECell',
    'MSE_COLUMNS',
    'MonteCarloEngine',
    'MonteCarloMetrics',
    'PosteriorOperator',
    'PosteriorResult',
    'SceneSample',
    'circular_normal',
    'design_label',
    'mc_mse',
    'posterior',
    'posterior_operator',
    'posterior_trace',
    'sample_scene',
    'scene_mse',
    'simulate_measurements',
    'synthesize_scene',
    'trial_stream',
]
