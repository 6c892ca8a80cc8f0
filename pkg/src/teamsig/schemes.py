"""Constructive signaling schemes.

All builders return class schemes (relabeling-symmetric by construction) and
share one randomization idea: conditional on the announced signal, slots
inside each cluster block are exchangeable.  Exchangeability makes each
slot's posterior equal its cluster prior, so announcements rank clusters but
leak nothing about individual slots; the value of the scheme lives entirely
in which team compositions get realized, not in what agents learn.

* no-information -- every profile announces the prior ranking, with types
  placed uniformly; the induced matching is the baseline.
* full information -- realizes the most concentrated team compositions
  (type-1 agents packed together), the welfare-optimal split for convex
  payoffs, announced with teams in random order and random internal layout.
* (cluster) first best -- within each cluster realizes the most balanced
  compositions, the welfare-optimal split for strictly concave payoffs,
  achieving the per-profile floor of all-zero teams cluster by cluster.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .beliefs import ClassScheme
from .core import (
    ClassKey,
    Convexity,
    Gamma,
    Instance,
    TypeSeq,
    classify_convexity,
    distinct_permutations,
    enumerate_canonical,
)
from .errors import ConfigurationError

F = Fraction


class SchemeKind(Enum):
    NO_INFO = "noinfo"
    FULL_INFO = "fullinfo"
    FIRST_BEST = "fb"
    CLUSTER_FIRST_BEST = "fbc"


def balanced_compositions(ones: int, teams: int, team_size: int) -> tuple[int, ...]:
    """Type-1 counts spread as evenly as possible over the teams."""
    q, r = divmod(ones, teams)
    return tuple(sorted([q + 1] * r + [q] * (teams - r), reverse=True))


def concentrated_compositions(ones: int, teams: int, team_size: int) -> tuple[int, ...]:
    """Type-1 counts packed into as few teams as possible."""
    full, rest = divmod(ones, team_size)
    comp = [team_size] * full
    if rest:
        comp.append(rest)
    comp.extend([0] * (teams - len(comp)))
    return tuple(comp)


def _strings_for_compositions(comps: tuple[int, ...], team_size: int) -> list[TypeSeq]:
    """Distinct type strings whose consecutive teams realize ``comps`` in some order."""
    out = []
    for order in distinct_permutations(comps):
        layouts = []
        for c in order:
            layouts.append(
                [
                    tuple(block)
                    for block in distinct_permutations([1] * c + [0] * (team_size - c))
                ]
            )
        for pick in itertools.product(*layouts):
            out.append(tuple(itertools.chain.from_iterable(pick)))
    return sorted(set(out))


def build_no_info(instance: Instance) -> ClassScheme:
    """Constant prior-order announcement; types placed uniformly within clusters."""
    gamma = instance.identity_gamma()
    order = instance.clusters_by_prior()
    mapping: dict[ClassKey, list] = {}
    for cls_info in enumerate_canonical(instance):
        cls = cls_info.ones
        per_cluster = []
        for k in order:
            nk = instance.clusters[k].size
            slots_strings = [
                tuple(s)
                for s in distinct_permutations([1] * cls[k] + [0] * (nk - cls[k]))
            ]
            per_cluster.append(slots_strings)
        entries = []
        for pick in itertools.product(*per_cluster):
            t = tuple(itertools.chain.from_iterable(pick))
            prob = F(1)
            for strings in per_cluster:
                prob /= len(strings)
            entries.append((gamma, t, prob))
        mapping[cls] = entries
    return ClassScheme.from_map(mapping)


def build_cluster_first_best(instance: Instance) -> ClassScheme:
    """Balanced team compositions within each cluster, clusters ranked by prior.

    Every announcement realizes the fewest possible all-zero teams in each
    cluster.  Teams are announced in uniformly random order with uniformly
    random internal layout inside each cluster block, which keeps every slot
    of a block exchangeable: the announcement carries no slot-level
    information, so it is persuasive and, for strictly concave payoffs,
    conditional-on-signal Pareto improving (balanced splits maximize a
    cluster's realized welfare state by state, and a statewise maximum
    dominates the random-matching baseline).
    """
    gamma = instance.identity_gamma()
    order = instance.clusters_by_prior()
    a = instance.team_size
    mapping: dict[ClassKey, list] = {}
    for cls_info in enumerate_canonical(instance):
        cls = cls_info.ones
        per_cluster = []
        for k in order:
            nk = instance.clusters[k].size
            comps = balanced_compositions(cls[k], nk // a, a)
            per_cluster.append(_strings_for_compositions(comps, a))
        entries = []
        for pick in itertools.product(*per_cluster):
            t = tuple(itertools.chain.from_iterable(pick))
            prob = F(1)
            for strings in per_cluster:
                prob /= len(strings)
            entries.append((gamma, t, prob))
        mapping[cls] = entries
    return ClassScheme.from_map(mapping)


def build_first_best(instance: Instance) -> ClassScheme:
    """Single-cluster specialization of the balanced-composition scheme."""
    if instance.num_clusters != 1:
        raise ConfigurationError(
            "first best without cluster qualification needs a single cluster; "
            "use the cluster-wise builder for K > 1"
        )
    return build_cluster_first_best(instance)


def _sorted_team_contents(
    instance: Instance, cls: ClassKey
) -> list[tuple[tuple[int, int], ...]]:
    """Teams of (cluster, type) members after the full-information sort.

    Agents are sorted by type (high first) and by cluster prior inside each
    type block, then cut into consecutive teams.  This realizes the most
    concentrated composition multiset and pins which clusters share teams.
    """
    order = instance.clusters_by_prior()
    members: list[tuple[int, int]] = []
    for k in order:
        members.extend([(k, 1)] * cls[k])
    for k in order:
        members.extend([(k, 0)] * (instance.clusters[k].size - cls[k]))
    a = instance.team_size
    return [tuple(members[b : b + a]) for b in range(0, len(members), a)]


def build_full_info(instance: Instance) -> ClassScheme:
    """True-ranking announcement with uniform tie-breaking.

    For each profile the type-1 agents are packed into as few teams as
    possible (the welfare-optimal split for convex payoffs).  The announced
    ordering lists the resulting teams in uniformly random order and each
    team's members in uniformly random internal order, so slots stay
    exchangeable and the announcement reveals no slot-level ranking.
    """
    a = instance.team_size
    mapping: dict[ClassKey, list] = {}
    for cls_info in enumerate_canonical(instance):
        cls = cls_info.ones
        teams = _sorted_team_contents(instance, cls)
        patterns: set[tuple[Gamma, TypeSeq]] = set()
        for team_order in distinct_permutations(teams):
            layouts = [list(distinct_permutations(team)) for team in team_order]
            for pick in itertools.product(*layouts):
                flat = tuple(itertools.chain.from_iterable(pick))
                gamma = tuple(k for k, _ in flat)
                types = tuple(t for _, t in flat)
                patterns.add((gamma, types))
        share = F(1, len(patterns))
        mapping[cls] = [(g, t, share) for g, t in sorted(patterns)]
    return ClassScheme.from_map(mapping)


def build_scheme(kind: SchemeKind, instance: Instance) -> ClassScheme:
    if kind is SchemeKind.NO_INFO:
        return build_no_info(instance)
    if kind is SchemeKind.FULL_INFO:
        return build_full_info(instance)
    if kind is SchemeKind.FIRST_BEST:
        return build_first_best(instance)
    if kind is SchemeKind.CLUSTER_FIRST_BEST:
        return build_cluster_first_best(instance)
    raise ConfigurationError(f"unknown scheme kind {kind!r}")
