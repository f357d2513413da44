"""Bayesian-network structure learning from complete discrete data."""

from ._cbnet import (
    ArgumentError,
    BayesNet,
    CaseDatabase,
    CBResult,
    Dag,
    FormatError,
    IndependenceVerdict,
    InvariantError,
    Iteration,
    SchemaError,
    StructuralDiff,
    alarm_network,
    cb_learn,
    chi_square_pvalue,
    ci_test,
    d_separated,
    forward_sample,
    k2,
    led_network,
    load_cases,
    load_network,
    log_g,
    log_network_score,
    run_cli,
    save_network,
    structural_diff,
    to_dot,
)

__all__ = [name for name in dir() if not name.startswith("_")]
