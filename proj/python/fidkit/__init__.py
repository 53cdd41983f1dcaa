"""Logistic disturbance-response toolkit.

Fit the four-parameter logistic model of animal hiding behavior, extract
flight initiation distances, test control vs. transect distributions, run
the synthetic field protocol and plan vehicle standoff transects.
"""

from ._core import (
    AbscissaKind,
    DisturbanceModel,
    FidkitError,
    FitResult,
    KsResult,
    ObservationSample,
    ProtocolConfig,
    SampleLabel,
    SimFrame,
    StandoffPlan,
    Waypoint,
    compare_groups,
    evaluate,
    fid,
    fit_model,
    invert,
    ks_two_sample,
    parse_annotations_csv,
    plan_standoff,
    plan_transect,
    simulate,
    to_observations,
)

__all__ = [
    "AbscissaKind",
    "DisturbanceModel",
    "FidkitError",
    "FitResult",
    "KsResult",
    "ObservationSample",
    "ProtocolConfig",
    "SampleLabel",
    "SimFrame",
    "StandoffPlan",
    "Waypoint",
    "compare_groups",
    "evaluate",
    "fid",
    "fit_model",
    "invert",
    "ks_two_sample",
    "parse_annotations_csv",
    "plan_standoff",
    "plan_transect",
    "simulate",
    "to_observations",
]
