"""Posterior computation and the solution-concept checks.

A scheme maps realized type profiles to distributions over announced
orderings.  Two representations coexist:

* ``ExplicitScheme`` -- keyed by profile, listing actual orderings.  May be
  partial (listed probabilities per profile sum to at most 1); unlisted
  profiles are taken never to announce any listed signal.
* ``ClassScheme`` -- keyed by exchangeability class, listing slot patterns
  ``(gamma, types)``.  This is the native output of the scheme builders and
  the LP extractor; it stands for the fully relabeling-symmetric scheme.

All checks run on "signal views": the conditional joint law of slot types
given one announced signal.  For a class scheme every ordering with the same
slot-cluster sequence induces the same view, so one view per gamma suffices
and the checks stay polynomial in ``n``.

Checked concepts, all exact:

* persuasive -- announced slot posteriors are nonincreasing (self-agnostic),
  or every slot's conditional match posterior dominates lower-ranked slots
  under both own-type conditionings (self-aware);
* stable -- the announced assignment is reproduced when slots are re-sorted
  by posterior with ties broken in favor of the announcement; by
  construction this agrees with the persuasiveness check signal by signal;
* group stable -- no team swap that strictly benefits the mover and every
  retained member (coalition notion used for teams of size above two);
* Pareto improving -- conditional on every supported signal, each slot's
  expected payoff weakly exceeds the no-information baseline of its
  cluster (per own type in the self-aware mode).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    Awareness,
    ClassKey,
    Gamma,
    Instance,
    Ordering,
    TypeProfile,
    TypeSeq,
    as_fraction,
    class_multiplicity,
    class_of_pattern,
    class_profile_prior,
    enumerate_canonical,
    orderings_for_profile_pattern,
    pattern_weight_denominator,
    prior_prob,
    slot_types,
    validate_ordering,
    validate_profile,
)
from .errors import (
    ConfigurationError,
    InvalidPartitionError,
    InvalidProfileError,
    PreconditionError,
    UndefinedPosteriorError,
)

F = Fraction


# ---------------------------------------------------------------------------
# scheme representations


@dataclass(frozen=True)
class ExplicitScheme:
    """Profile-keyed scheme; probabilities per profile sum to at most 1."""

    support: tuple[tuple[TypeProfile, tuple[tuple[Ordering, Fraction], ...]], ...]

    @staticmethod
    def from_map(mapping: dict) -> "ExplicitScheme":
        items = []
        for theta, entries in mapping.items():
            rows = tuple(
                (tuple(sig), as_fraction(pr)) for sig, pr in entries if as_fraction(pr) != 0
            )
            items.append((tuple(theta), rows))
        return ExplicitScheme(tuple(items))

    def as_map(self) -> dict[TypeProfile, tuple[tuple[Ordering, Fraction], ...]]:
        return {theta: entries for theta, entries in self.support}

    def validate(self, instance: Instance) -> None:
        for theta, entries in self.support:
            validate_profile(instance, theta)
            total = F(0)
            for sigma, prob in entries:
                validate_ordering(instance, sigma)
                if prob < 0:
                    raise ConfigurationError(f"negative signal probability {prob}")
                total += prob
            if total > 1:
                raise ConfigurationError(
                    f"profile {theta} announces with total probability {total} > 1"
                )

    def is_complete(self, instance: Instance) -> bool:
        seen = {theta: sum(p for _, p in entries) for theta, entries in self.support}
        if any(v != 1 for v in seen.values()):
            return False
        return len(seen) == 2**instance.n


@dataclass(frozen=True)
class ClassScheme:
    """Class-keyed scheme: per class a distribution over slot patterns."""

    assignments: tuple[tuple[ClassKey, tuple[tuple[Gamma, TypeSeq, Fraction], ...]], ...]

    @staticmethod
    def from_map(mapping: dict) -> "ClassScheme":
        items = []
        for cls, entries in sorted(mapping.items()):
            rows = tuple(
                (tuple(g), tuple(t), as_fraction(pr))
                for g, t, pr in entries
                if as_fraction(pr) != 0
            )
            items.append((tuple(cls), rows))
        return ClassScheme(tuple(items))

    def as_map(self) -> dict[ClassKey, tuple[tuple[Gamma, TypeSeq, Fraction], ...]]:
        return {cls: entries for cls, entries in self.assignments}

    def validate(self, instance: Instance) -> None:
        classes = {c.ones for c in enumerate_canonical(instance)}
        labels = instance.cluster_slots()
        for cls, entries in self.assignments:
            if cls not in classes:
                raise ConfigurationError(f"unknown class {cls}")
            total = F(0)
            for gamma, types, prob in entries:
                if sorted(gamma) != sorted(labels):
                    raise ConfigurationError(f"gamma {gamma} has wrong cluster counts")
                if class_of_pattern(instance, gamma, types) != cls:
                    raise ConfigurationError(
                        f"pattern {(gamma, types)} does not realize class {cls}"
                    )
                if prob < 0:
                    raise ConfigurationError(f"negative pattern probability {prob}")
                total += prob
            if total != 1:
                raise ConfigurationError(f"class {cls} pattern mass {total} != 1")

    def is_complete(self, instance: Instance) -> bool:
        have = {cls for cls, _ in self.assignments}
        return all(c.ones in have for c in enumerate_canonical(instance))


Scheme = ExplicitScheme | ClassScheme


def to_explicit(instance: Instance, scheme: ClassScheme) -> ExplicitScheme:
    """Expand a class scheme into the full relabeling-symmetric explicit scheme.

    Every ordering consistent with a supported pattern receives an equal
    share of that pattern's probability.  Exponential in cluster sizes; meant
    for cross-validation at small ``n``.
    """
    support: dict[TypeProfile, list[tuple[Ordering, Fraction]]] = {}
    by_class = scheme.as_map()
    for cls_info in enumerate_canonical(instance):
        entries = by_class.get(cls_info.ones)
        if entries is None:
            continue
        denom = pattern_weight_denominator(instance, cls_info.ones)
        ranges = [
            itertools.combinations(range(c.size), h)
            for c, h in zip(instance.clusters, cls_info.ones)
        ]
        offsets = [min(instance.agents_of_cluster(k)) for k in range(instance.num_clusters)]
        for pick in itertools.product(*ranges):
            theta = [0] * instance.n
            for k, ones in enumerate(pick):
                for i in ones:
                    theta[offsets[k] + i] = 1
            theta = tuple(theta)
            rows = support.setdefault(theta, [])
            for gamma, types, prob in entries:
                share = prob / denom
                for sigma in orderings_for_profile_pattern(instance, theta, gamma, types):
                    rows.append((sigma, share))
    merged = {}
    for theta, rows in support.items():
        acc: dict[Ordering, Fraction] = {}
        for sigma, pr in rows:
            acc[sigma] = acc.get(sigma, F(0)) + pr
        merged[theta] = tuple(sorted(acc.items()))
    return ExplicitScheme.from_map(merged)


# ---------------------------------------------------------------------------
# signal views


@dataclass(frozen=True)
class SignalView:
    """Joint law of slot types conditional on one announced signal.

    ``mass`` entries are true joint probabilities P(signal class, slot types),
    so view masses over a complete scheme sum to 1.  ``label`` is the actual
    ordering for explicit schemes and the slot-cluster sequence for class
    schemes (all orderings sharing it are posterior-equivalent).
    """

    label: tuple
    gamma: Gamma
    outcomes: tuple[tuple[TypeSeq, Fraction], ...]

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.outcomes), F(0))


def signal_views(instance: Instance, scheme: Scheme) -> list[SignalView]:
    if isinstance(scheme, ExplicitScheme):
        labels = instance.cluster_slots()
        by_sigma: dict[Ordering, dict[TypeSeq, Fraction]] = {}
        for theta, entries in scheme.support:
            lam = prior_prob(instance, theta)
            if lam == 0:
                continue
            for sigma, prob in entries:
                if prob == 0:
                    continue
                t = slot_types(sigma, theta)
                acc = by_sigma.setdefault(sigma, {})
                acc[t] = acc.get(t, F(0)) + lam * prob
        views = []
        for sigma in sorted(by_sigma):
            gamma = tuple(labels[a] for a in sigma)
            outcomes = tuple(sorted(by_sigma[sigma].items()))
            views.append(SignalView(("ordering", sigma), gamma, outcomes))
        return views
    if isinstance(scheme, ClassScheme):
        by_gamma: dict[Gamma, dict[TypeSeq, Fraction]] = {}
        for cls, entries in scheme.assignments:
            mult = class_multiplicity(instance, cls)
            lam = class_profile_prior(instance, cls)
            for gamma, types, prob in entries:
                if prob == 0 or lam == 0:
                    continue
                acc = by_gamma.setdefault(gamma, {})
                acc[types] = acc.get(types, F(0)) + mult * lam * prob
        views = []
        for gamma in sorted(by_gamma):
            outcomes = tuple(sorted(by_gamma[gamma].items()))
            views.append(SignalView(("gamma", gamma), gamma, outcomes))
        return views
    raise ConfigurationError(f"unsupported scheme type {type(scheme)!r}")


def view_for_ordering(instance: Instance, scheme: Scheme, sigma: Sequence[int]) -> SignalView:
    """The signal view an actual announced ordering induces."""
    sigma = validate_ordering(instance, sigma)
    labels = instance.cluster_slots()
    gamma = tuple(labels[a] for a in sigma)
    if isinstance(scheme, ExplicitScheme):
        for view in signal_views(instance, scheme):
            if view.label == ("ordering", sigma):
                return view
        raise UndefinedPosteriorError(f"ordering {sigma} has zero probability under the scheme")
    for view in signal_views(instance, scheme):
        if view.gamma == gamma:
            return view
    raise UndefinedPosteriorError(
        f"no supported announcement has slot clusters {gamma}"
    )


def slot_posterior(view: SignalView) -> tuple[Fraction, ...]:
    """Expected type of each announced slot given the signal."""
    total = view.total_mass
    if total == 0:
        raise UndefinedPosteriorError("signal has zero probability")
    n = len(view.gamma)
    sums = [F(0)] * n
    for t, m in view.outcomes:
        for i, ti in enumerate(t):
            if ti:
                sums[i] += m
    return tuple(s / total for s in sums)


def conditional_slot_posterior(
    view: SignalView, slot: int, own_type: int
) -> tuple[Fraction, ...] | None:
    """Slot posteriors additionally conditioned on ``slot`` having ``own_type``.

    Returns None when the conditioning event has zero mass (constraints on it
    are vacuous).
    """
    n = len(view.gamma)
    total = F(0)
    sums = [F(0)] * n
    for t, m in view.outcomes:
        if t[slot] != own_type:
            continue
        total += m
        for i, ti in enumerate(t):
            if ti:
                sums[i] += m
    if total == 0:
        return None
    return tuple(s / total for s in sums)


# ---------------------------------------------------------------------------
# posteriors keyed by agent


@dataclass(frozen=True)
class Posterior:
    """Per-agent expected types given a signal (and own type when self-aware)."""

    mode: Awareness
    by_agent: tuple[Fraction, ...] | None = None
    by_perspective: tuple[tuple[tuple[int, int], tuple[Fraction, ...]], ...] = ()

    def perspective(self, agent: int, own_type: int) -> tuple[Fraction, ...] | None:
        for key, vec in self.by_perspective:
            if key == (agent, own_type):
                return vec
        return None


def posterior_expected_types(
    instance: Instance, scheme: Scheme, sigma: Sequence[int]
) -> Posterior:
    """Exact Bayes posterior of every agent's type given the announced ordering.

    In the self-aware mode the posterior additionally carries, for every
    agent and own type of positive conditional mass, the expected types of
    all agents under that agent's information.
    """
    sigma = validate_ordering(instance, sigma)
    view = view_for_ordering(instance, scheme, sigma)
    by_slot = slot_posterior(view)
    n = instance.n
    by_agent = [F(0)] * n
    for i, agent in enumerate(sigma):
        by_agent[agent] = by_slot[i]
    if instance.awareness is Awareness.SELF_AGNOSTIC:
        return Posterior(Awareness.SELF_AGNOSTIC, tuple(by_agent))
    perspectives = []
    for i, agent in enumerate(sigma):
        for b in (0, 1):
            cond = conditional_slot_posterior(view, i, b)
            if cond is None:
                continue
            vec = [F(0)] * n
            for j, other in enumerate(sigma):
                vec[other] = cond[j]
            perspectives.append(((agent, b), tuple(vec)))
    return Posterior(Awareness.SELF_AWARE, tuple(by_agent), tuple(perspectives))


# ---------------------------------------------------------------------------
# persuasiveness


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def partner_slot(slot: int) -> int:
    return slot + 1 if slot % 2 == 0 else slot - 1


def _view_persuasive_agnostic(view: SignalView) -> CheckResult:
    post = slot_posterior(view)
    for i in range(len(post) - 1):
        if post[i] < post[i + 1]:
            return CheckResult(False, (view.label, i, i + 1))
    return CheckResult(True)


def _view_persuasive_aware(view: SignalView) -> CheckResult:
    n = len(view.gamma)
    for i in range(n):
        m = partner_slot(i)
        lower = [j for j in range(m + 1, n) if j != i]
        if not lower:
            continue
        for b in (0, 1):
            cond = conditional_slot_posterior(view, i, b)
            if cond is None:
                continue
            for j in lower:
                if cond[m] < cond[j]:
                    return CheckResult(False, (view.label, i, j, b))
    return CheckResult(True)


def is_persuasive(instance: Instance, scheme: Scheme) -> CheckResult:
    """Whether every supported announcement is self-consistent.

    Self-agnostic: posterior expected types are nonincreasing along the
    announced order.  Self-aware: conditional on the announcement and on
    either own type, every slot weakly prefers its assigned match to all
    slots ranked below that match.  The witness names the first violated
    comparison.
    """
    if instance.awareness is Awareness.SELF_AWARE and instance.team_size != 2:
        raise ConfigurationError("self-aware persuasiveness is defined for pairs")
    for view in signal_views(instance, scheme):
        if view.total_mass == 0:
            continue
        if instance.awareness is Awareness.SELF_AGNOSTIC:
            res = _view_persuasive_agnostic(view)
        else:
            res = _view_persuasive_aware(view)
        if not res.ok:
            return res
    return CheckResult(True)


# ---------------------------------------------------------------------------
# stability


def is_stable(instance: Instance, sigma: Sequence[int], posterior: Posterior) -> CheckResult:
    """Whether the announced assignment survives re-sorting by posterior.

    Slots are stably re-sorted by decreasing expected type, ties keeping the
    announced order (agents break ties in favor of the principal).  The
    announcement is stable when the re-sort is the identity; otherwise the
    first re-sorted team that differs from the announced one is returned as
    the blocking coalition (for pairs: the blocking pair).  This predicate is
    signal-wise equivalent to the persuasiveness check.

    In the self-aware mode the check instead requires, for every agent and
    own type of positive mass, that her conditional ranking never strictly
    prefers a slot below her announced match.
    """
    sigma = validate_ordering(instance, sigma)
    a = instance.team_size
    if posterior.mode is Awareness.SELF_AGNOSTIC:
        q = posterior.by_agent
        slots = list(range(instance.n))
        resorted = sorted(slots, key=lambda i: (-q[sigma[i]], i))
        if resorted == slots:
            return CheckResult(True)
        for b in range(0, instance.n, a):
            induced = tuple(sigma[i] for i in resorted[b : b + a])
            announced = tuple(sigma[b : b + a])
            if induced != announced:
                return CheckResult(False, induced)
        return CheckResult(True)
    if a != 2:
        raise ConfigurationError("self-aware stability is defined for pairs")
    n = instance.n
    for i in range(n):
        agent = sigma[i]
        m = partner_slot(i)
        for b in (0, 1):
            vec = posterior.perspective(agent, b)
            if vec is None:
                continue
            for j in range(m + 1, n):
                if j == i:
                    continue
                if vec[sigma[m]] < vec[sigma[j]]:
                    return CheckResult(False, (sigma[m], sigma[j], agent, b))
    return CheckResult(True)


# ---------------------------------------------------------------------------
# coalition (group) stability


def expected_team_utility(
    member_expectations: Sequence[Fraction], utility_by_ones: Sequence[Fraction]
) -> Fraction:
    """Expected payoff of a team whose member types are independent Bernoullis."""
    dist = [F(1)]
    for q in member_expectations:
        nxt = [F(0)] * (len(dist) + 1)
        for c, w in enumerate(dist):
            nxt[c] += w * (1 - q)
            nxt[c + 1] += w * q
        dist = nxt
    return sum((w * utility_by_ones[c] for c, w in enumerate(dist)), F(0))


def find_blocking_pair(
    posteriors: Sequence[Fraction], teams: Sequence[Sequence[int]]
) -> tuple[int, int] | None:
    """Mutually strictly improving unmatched pair, or None.  Pairs only."""
    partner = {}
    for t in teams:
        x, y = t
        partner[x] = y
        partner[y] = x
    agents = sorted(partner)
    for x in agents:
        for y in agents:
            if y <= x or partner[x] == y:
                continue
            if posteriors[y] > posteriors[partner[x]] and posteriors[x] > posteriors[partner[y]]:
                return (x, y)
    return None


def is_group_stable(
    instance: Instance, teams: Sequence[Sequence[int]], posteriors: Sequence[Fraction]
) -> CheckResult:
    """Coalition stability for teams: no swap helps the mover and all kept members.

    A witness ``(t, t', i, j)`` means agent ``j`` of team ``t'`` strictly
    prefers joining ``t`` in place of member ``i``, and every other member of
    ``t`` strictly prefers the new lineup.  Expected payoffs treat posterior
    types as independent; ties never block (agents side with the principal).
    """
    a = instance.team_size
    flat = sorted(x for t in teams for x in t)
    if flat != list(range(instance.n)) or any(len(t) != a for t in teams):
        raise InvalidPartitionError(
            f"teams must partition 0..{instance.n - 1} into blocks of {a}"
        )
    u = instance.utility_by_ones
    q = [as_fraction(x) for x in posteriors]
    team_value = {}
    for idx, t in enumerate(teams):
        team_value[idx] = expected_team_utility([q[x] for x in t], u)
    for ti, t in enumerate(teams):
        for tj, t2 in enumerate(teams):
            if ti == tj:
                continue
            for i in t:
                for j in t2:
                    newbie = [x for x in t if x != i] + [j]
                    val = expected_team_utility([q[x] for x in newbie], u)
                    if val <= team_value[tj]:
                        continue  # the mover does not strictly gain
                    # retained members share the team payoff, so one
                    # comparison covers every k in t \ {i}
                    if val > team_value[ti]:
                        return CheckResult(False, (tuple(t), tuple(t2), i, j))
    return CheckResult(True)


# ---------------------------------------------------------------------------
# baseline (no-information) outcome


@dataclass(frozen=True)
class Baseline:
    """No-information outcome: rank by prior, team up within clusters."""

    ordering: Ordering
    teams: tuple[tuple[int, ...], ...]
    by_cluster: tuple[Fraction, ...]
    by_cluster_aware: tuple[tuple[Fraction, Fraction], ...]  # (type 0, type 1)


def baseline_utility(instance: Instance, cluster: int) -> Fraction:
    """Expected payoff of a random within-cluster team, own type unknown."""
    p = instance.clusters[cluster].p
    a = instance.team_size
    u = instance.utility_by_ones
    return sum(
        (math.comb(a, j) * p**j * (1 - p) ** (a - j) * u[j] for j in range(a + 1)),
        F(0),
    )


def baseline_utility_aware(instance: Instance, cluster: int, own_type: int) -> Fraction:
    """Expected payoff of a random within-cluster team given one's own type."""
    p = instance.clusters[cluster].p
    a = instance.team_size
    u = instance.utility_by_ones
    return sum(
        (
            math.comb(a - 1, j) * p**j * (1 - p) ** (a - 1 - j) * u[own_type + j]
            for j in range(a)
        ),
        F(0),
    )


def baseline_matching(instance: Instance) -> Baseline:
    order: list[int] = []
    for k in instance.clusters_by_prior():
        order.extend(instance.agents_of_cluster(k))
    a = instance.team_size
    teams = tuple(tuple(order[b : b + a]) for b in range(0, instance.n, a))
    return Baseline(
        ordering=tuple(order),
        teams=teams,
        by_cluster=tuple(baseline_utility(instance, k) for k in range(instance.num_clusters)),
        by_cluster_aware=tuple(
            (baseline_utility_aware(instance, k, 0), baseline_utility_aware(instance, k, 1))
            for k in range(instance.num_clusters)
        ),
    )


# ---------------------------------------------------------------------------
# Pareto improvement


def _block_ones(t: TypeSeq, a: int, slot: int) -> int:
    b = (slot // a) * a
    return sum(t[b : b + a])


def is_pareto_improving(instance: Instance, scheme: Scheme) -> CheckResult:
    """Every slot of every supported signal weakly beats its cluster baseline.

    The comparison is conditional on the announced signal (and on own type in
    the self-aware mode); a violation by exactly zero is not a violation.
    Requires a persuasive scheme, otherwise the induced matching is undefined.
    """
    pers = is_persuasive(instance, scheme)
    if not pers.ok:
        raise PreconditionError(
            f"scheme is not persuasive (witness {pers.witness}); matching undefined"
        )
    a = instance.team_size
    u = instance.utility_by_ones
    base = baseline_matching(instance)
    for view in signal_views(instance, scheme):
        n = len(view.gamma)
        if instance.awareness is Awareness.SELF_AGNOSTIC:
            total = view.total_mass
            if total == 0:
                continue
            for slot in range(n):
                val = sum(
                    (m * u[_block_ones(t, a, slot)] for t, m in view.outcomes), F(0)
                )
                bound = base.by_cluster[view.gamma[slot]] * total
                if val < bound:
                    return CheckResult(
                        False, (view.label, slot, None, val / total, bound / total)
                    )
        else:
            for slot in range(n):
                for b in (0, 1):
                    cond = [(t, m) for t, m in view.outcomes if t[slot] == b]
                    mass = sum((m for _, m in cond), F(0))
                    if mass == 0:
                        continue
                    val = sum((m * u[_block_ones(t, a, slot)] for t, m in cond), F(0))
                    bound = base.by_cluster_aware[view.gamma[slot]][b] * mass
                    if val < bound:
                        return CheckResult(
                            False, (view.label, slot, b, val / mass, bound / mass)
                        )
    return CheckResult(True)


# ---------------------------------------------------------------------------
# ex-ante summaries


def expected_welfare(instance: Instance, scheme: Scheme) -> Fraction:
    """Ex-ante total welfare of a complete scheme."""
    from .core import welfare_of_types

    total = F(0)
    for view in signal_views(instance, scheme):
        for t, m in view.outcomes:
            total += m * welfare_of_types(t, instance.team_size, instance.utility)
    return total


def expected_match_counts(instance: Instance, scheme: Scheme) -> tuple[Fraction, ...]:
    """Ex-ante expected number of teams per type-1 count."""
    from .core import match_counts_from_types

    a = instance.team_size
    sums = [F(0)] * (a + 1)
    for view in signal_views(instance, scheme):
        for t, m in view.outcomes:
            mc = match_counts_from_types(t, a)
            for j, cnt in enumerate(mc.per_ones):
                sums[j] += m * cnt
    return tuple(sums)


def per_cluster_expected_utility(instance: Instance, scheme: Scheme) -> tuple[Fraction, ...]:
    """Ex-ante per-agent expected payoff by cluster, for a complete scheme."""
    a = instance.team_size
    u = instance.utility_by_ones
    sums = [F(0)] * instance.num_clusters
    for view in signal_views(instance, scheme):
        for t, m in view.outcomes:
            for slot in range(len(t)):
                sums[view.gamma[slot]] += m * u[_block_ones(t, a, slot)]
    return tuple(s / instance.clusters[k].size for k, s in enumerate(sums))


# ---------------------------------------------------------------------------
# serialization


def scheme_to_dict(scheme: Scheme) -> dict | list:
    if isinstance(scheme, ExplicitScheme):
        return [
            {
                "profile": "".join(str(b) for b in theta),
                "orderings": [
                    {"perm": list(sig), "prob": str(pr)} for sig, pr in entries
                ],
            }
            for theta, entries in scheme.support
        ]
    return {
        "canonical": True,
        "classes": [
            {
                "ones": list(cls),
                "patterns": [
                    {
                        "clusters": list(gamma),
                        "types": "".join(str(b) for b in types),
                        "prob": str(pr),
                    }
                    for gamma, types, pr in entries
                ],
            }
            for cls, entries in scheme.assignments
        ],
    }


def scheme_from_dict(data) -> Scheme:
    if isinstance(data, dict) and data.get("canonical"):
        mapping = {}
        for row in data["classes"]:
            cls = tuple(int(x) for x in row["ones"])
            mapping[cls] = [
                (
                    tuple(int(x) for x in pat["clusters"]),
                    tuple(int(ch) for ch in pat["types"]),
                    as_fraction(pat["prob"]),
                )
                for pat in row["patterns"]
            ]
        return ClassScheme.from_map(mapping)
    if isinstance(data, list):
        mapping = {}
        for row in data:
            theta = tuple(int(ch) for ch in row["profile"])
            mapping[theta] = [
                (tuple(entry["perm"]), as_fraction(entry["prob"]))
                for entry in row["orderings"]
            ]
        return ExplicitScheme.from_map(mapping)
    raise ConfigurationError("unrecognized scheme document")


def scheme_to_json(scheme: Scheme) -> str:
    return json.dumps(scheme_to_dict(scheme), indent=2)


def scheme_from_json(text: str) -> Scheme:
    return scheme_from_dict(json.loads(text))
