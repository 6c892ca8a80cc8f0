"""Exact toolkit for rank-order signaling schemes in endogenous team formation."""

from .core import (
    Awareness,
    Cluster,
    Convexity,
    Instance,
    MatchCounts,
    PairUtility,
    TeamUtility,
    as_fraction,
    classify_convexity,
    counts,
    enumerate_canonical,
    enumerate_profiles,
    fb,
    fb_c,
    instance_from_dict,
    instance_to_dict,
    is_discrete_regular,
    match_counts,
    prior_prob,
    team_objective,
    welfare,
)

__all__ = [
    "Awareness",
    "Cluster",
    "Convexity",
    "Instance",
    "MatchCounts",
    "PairUtility",
    "TeamUtility",
    "as_fraction",
    "classify_convexity",
    "counts",
    "enumerate_canonical",
    "enumerate_profiles",
    "fb",
    "fb_c",
    "instance_from_dict",
    "instance_to_dict",
    "is_discrete_regular",
    "match_counts",
    "prior_prob",
    "team_objective",
    "welfare",
]

__version__ = "0.1.0"
