"""Discrete-time oversampled Zak-OTFS waveform laboratory.

The heavy lifting lives in the C++ extension module; this package re-exports
the main operations: pulse-set construction (rect / rrc / pswf / iota-pswf),
the delay-Doppler channel, the effective-channel constructions, and the
Monte-Carlo sweep driver.
"""

from ._core import (
    LatticeParams,
    PswfSolution,
    PulseSet,
    apply_channel,
    build_H_from_heff,
    build_pulse_set,
    correlate_receive,
    draw_eva_channel,
    effective_channel,
    modulate,
    psd_bandwidth,
    run_sweep,
    solve_pswf,
    twisted_convolution,
)

__all__ = [
    "LatticeParams",
    "PswfSolution",
    "PulseSet",
    "apply_channel",
    "build_H_from_heff",
    "build_pulse_set",
    "correlate_receive",
    "draw_eva_channel",
    "effective_channel",
    "modulate",
    "psd_bandwidth",
    "run_sweep",
    "solve_pswf",
    "twisted_convolution",
]
