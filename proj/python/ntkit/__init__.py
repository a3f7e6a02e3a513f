from ._ntkit import (
    depolarizing_2q,
    gen_noise,
    inverse_walsh_hadamard,
    matched_epsilon,
    observables,
    plan,
    pnt_fit,
    run_trial,
    tailor,
    walsh_hadamard,
)

__all__ = [
    "depolarizing_2q",
    "gen_noise",
    "inverse_walsh_hadamard",
    "matched_epsilon",
    "observables",
    "plan",
    "pnt_fit",
    "run_trial",
    "tailor",
    "walsh_hadamard",
]
