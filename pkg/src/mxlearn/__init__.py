"""Matrix exponential learning for sum-rate maximization in Gaussian
vector multiple-access channels.

The main entry points are re-exported here; submodules hold the details:
:mod:`~mxlearn.hermitian` (spectral helpers), :mod:`~mxlearn.model`
(channel model, rates, gradients), :mod:`~mxlearn.fading`,
:mod:`~mxlearn.estimation` (noisy feedback), :mod:`~mxlearn.learners`,
:mod:`~mxlearn.waterfilling`, :mod:`~mxlearn.oracle` and
:mod:`~mxlearn.harness` (scenarios, traces, CLI).
"""

from .estimation import EstimatorConfig, pipeline_feedback, synthetic_noise
from .fading import jakes_advance, jakes_init
from .hermitian import exp_map, fenchel_coupling, herm_eig, hermitian
from .learners import (
    AsyncScheduler,
    StepSchedule,
    amxl_step,
    exl_step,
    init_amxl,
    init_exl,
    init_mxl,
    mxl_step,
)
from .model import NetworkModel, gradient, random_model, sum_rate, uniform_profile
from .oracle import fw_gap, solve_capacity, solve_ergodic_capacity
from .waterfilling import iwf_step, swf_step, waterfill_single

__version__ = "0.1.0"

__all__ = [
    "AsyncScheduler",
    "EstimatorConfig",
    "NetworkModel",
    "StepSchedule",
    "amxl_step",
    "exl_step",
    "exp_map",
    "fenchel_coupling",
    "fw_gap",
    "gradient",
    "herm_eig",
    "hermitian",
    "init_amxl",
    "init_exl",
    "init_mxl",
    "iwf_step",
    "jakes_advance",
    "jakes_init",
    "mxl_step",
    "pipeline_feedback",
    "random_model",
    "solve_capacity",
    "solve_ergodic_capacity",
    "sum_rate",
    "swf_step",
    "synthetic_noise",
    "uniform_profile",
    "waterfill_single",
]
