"""Playable cop strategies, simulation and capture-time measurement."""

from .capture import (
    CaptureTimeBoundReport,
    capture_time_bound,
    capture_time_formula,
    measure_g_tr,
)
from .controllers import (
    CliqueTreeController,
    LeapController,
    RelayController,
    TableController,
    bottleneck_assignment,
)
from .engine import Round, SimulationTrace, StopGame, reentry_violations, render_board, simulate

__all__ = [
    "CaptureTimeBoundReport",
    "CliqueTreeController",
    "LeapController",
    "RelayController",
    "Round",
    "SimulationTrace",
    "StopGame",
    "TableController",
    "bottleneck_assignment",
    "capture_time_bound",
    "capture_time_formula",
    "measure_g_tr",
    "reentry_violations",
    "render_board",
    "simulate",
]
