"""Learning algorithms: synchronous, asynchronous and eigen-based MXL."""

from .async_mxl import AmxlState, AsyncScheduler, amxl_step, exact_feedback, init_amxl, scheduler_next
from .eigen import EigenState, StepRejected, exl_step, exl_step_backoff, init_exl, random_unitary
from .mxl import MxlState, init_mxl, mxl_step
from .schedules import StepSchedule, optimal_constant_guarantee, optimal_constant_step, step_size

__all__ = [
    "AmxlState",
    "AsyncScheduler",
    "amxl_step",
    "exact_feedback",
    "init_amxl",
    "scheduler_next",
    "EigenState",
    "StepRejected",
    "exl_step",
    "exl_step_backoff",
    "init_exl",
    "random_unitary",
    "MxlState",
    "init_mxl",
    "mxl_step",
    "StepSchedule",
    "optimal_constant_guarantee",
    "optimal_constant_step",
    "step_size",
]
