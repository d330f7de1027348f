from ._pingpong import (
    bell_state_amplitudes,
    decode_message,
    estimate_mutual_information,
    expected_correlation,
    infer_operation,
    run_experiment,
    run_session,
    survival_curve,
    transform,
)

__all__ = [
    "bell_state_amplitudes",
    "decode_message",
    "estimate_mutual_information",
    "expected_correlation",
    "infer_operation",
    "run_experiment",
    "run_session",
    "survival_curve",
    "transform",
]
