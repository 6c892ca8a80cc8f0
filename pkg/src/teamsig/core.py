"""Exact domain primitives for rank-order signaling in endogenous team formation.

Agents with hidden binary abilities sit in clusters that share a Bernoulli
prior.  A principal who observes the realized ability vector announces a
rank-ordering of the agents, and teams form from consecutive blocks of the
announcement.  All probabilities, utilities and welfare values are
``fractions.Fraction``; floats appear only in reporting layers.

Two coordinate systems coexist:

* explicit -- type profiles are ``{0,1}^n`` vectors indexed by agent,
  orderings are permutations of agent indices;
* canonical -- agents within a cluster are exchangeable, so profiles reduce
  to per-cluster counts of type-1 agents and announced orderings reduce to
  slot sequences of (cluster label, type).  The canonical side is what keeps
  the LPs polynomial-sized in ``n`` for fixed ``K``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .errors import (
    ConfigurationError,
    EnumerationTooLargeError,
    InvalidProfileError,
    InvalidUtilityError,
    InvalidWeightsError,
)

TypeProfile = tuple[int, ...]
Ordering = tuple[int, ...]
ClassKey = tuple[int, ...]
Gamma = tuple[int, ...]
TypeSeq = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 22


def as_fraction(value) -> Fraction:
    """Parse ``value`` into an exact Fraction.

    Accepts Fractions, ints, and strings like ``"0.8"`` or ``"4/5"``.
    Floats are converted through their shortest decimal repr, which is exact
    for the short decimals that appear in configs; prefer strings in files.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ConfigurationError(f"cannot interpret {value!r} as a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise ConfigurationError(f"cannot interpret {value!r} as a number")


class Awareness(Enum):
    SELF_AGNOSTIC = "agnostic"
    SELF_AWARE = "aware"


class Convexity(Enum):
    CONVEX = "convex"
    STRICTLY_CONCAVE = "strictly_concave"


@dataclass(frozen=True)
class PairUtility:
    """Symmetric two-member team payoff, strictly increasing in each type."""

    u00: Fraction
    u10: Fraction
    u11: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u00", as_fraction(self.u00))
        object.__setattr__(self, "u10", as_fraction(self.u10))
        object.__setattr__(self, "u11", as_fraction(self.u11))
        if not (self.u00 < self.u10 < self.u11):
            raise InvalidUtilityError(
                f"pair utility must satisfy u00 < u10 < u11, got "
                f"({self.u00}, {self.u10}, {self.u11})"
            )

    @property
    def by_ones(self) -> tuple[Fraction, ...]:
        return (self.u00, self.u10, self.u11)


@dataclass(frozen=True)
class TeamUtility:
    """Payoff per count of type-1 members in a team of size ``len(values)-1``."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 3:
            raise InvalidUtilityError("team utility needs at least 3 entries")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InvalidUtilityError(
                f"team utility must be strictly increasing, got {vals}"
            )

    @property
    def team_size(self) -> int:
        return len(self.values) - 1

    @property
    def by_ones(self) -> tuple[Fraction, ...]:
        return self.values


Utility = Union[PairUtility, TeamUtility]


@dataclass(frozen=True)
class Cluster:
    size: int
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        if self.size <= 0:
            raise ConfigurationError(f"cluster size must be positive, got {self.size}")
        if not (0 <= self.p <= 1):
            raise ConfigurationError(f"prior must lie in [0,1], got {self.p}")


@dataclass(frozen=True)
class Instance:
    """Population description: clusters, team size, utility, awareness mode.

    Agent indices are assigned cluster by cluster in the order given, so
    cluster ``k`` occupies a contiguous index range.  Cluster order in the
    announcement baseline is by decreasing prior, independent of the order
    given here.
    """

    clusters: tuple[Cluster, ...]
    team_size: int = 2
    utility: Utility = None
    awareness: Awareness = Awareness.SELF_AGNOSTIC

    def __post_init__(self):
        object.__setattr__(self, "clusters", tuple(self.clusters))
        if self.team_size < 2:
            raise ConfigurationError(f"team size must be >= 2, got {self.team_size}")
        if not self.clusters:
            raise ConfigurationError("instance needs at least one cluster")
        for c in self.clusters:
            if c.size % self.team_size != 0:
                raise ConfigurationError(
                    f"cluster size {c.size} not divisible by team size {self.team_size}"
                )
        ps = [c.p for c in self.clusters]
        if len(set(ps)) != len(ps):
            raise ConfigurationError("cluster priors must be pairwise distinct")
        if self.utility is None:
            object.__setattr__(
                self, "utility", PairUtility(Fraction(0), Fraction(1), Fraction(2))
            )
        if isinstance(self.utility, PairUtility):
            if self.team_size != 2:
                raise ConfigurationError("pair utility requires team size 2")
        elif isinstance(self.utility, TeamUtility):
            if self.utility.team_size != self.team_size:
                raise ConfigurationError(
                    f"team utility has {self.utility.team_size + 1} entries but "
                    f"team size is {self.team_size}"
                )
        else:
            raise ConfigurationError(f"unsupported utility {self.utility!r}")

    @property
    def n(self) -> int:
        return sum(c.size for c in self.clusters)

    @property
    def num_clusters(self) -> int:
        return len(self.clusters)

    @property
    def num_teams(self) -> int:
        return self.n // self.team_size

    @property
    def utility_by_ones(self) -> tuple[Fraction, ...]:
        return self.utility.by_ones

    def cluster_of(self, agent: int) -> int:
        off = 0
        for k, c in enumerate(self.clusters):
            off += c.size
            if agent < off:
                return k
        raise InvalidProfileError(f"agent index {agent} out of range [0,{self.n})")

    def cluster_slots(self) -> tuple[int, ...]:
        """Cluster label of each agent index."""
        out = []
        for k, c in enumerate(self.clusters):
            out.extend([k] * c.size)
        return tuple(out)

    def agents_of_cluster(self, k: int) -> range:
        off = sum(c.size for c in self.clusters[:k])
        return range(off, off + self.clusters[k].size)

    def clusters_by_prior(self) -> list[int]:
        """Cluster indices sorted by decreasing prior (the baseline rank order)."""
        return sorted(range(self.num_clusters), key=lambda k: (-self.clusters[k].p, k))

    def identity_gamma(self) -> Gamma:
        """Slot clusters of the baseline announcement: blocks by decreasing prior."""
        out = []
        for k in self.clusters_by_prior():
            out.extend([k] * self.clusters[k].size)
        return tuple(out)


# ---------------------------------------------------------------------------
# profile-level operations


def validate_profile(instance: Instance, theta: Sequence[int]) -> TypeProfile:
    theta = tuple(theta)
    if len(theta) != instance.n:
        raise InvalidProfileError(
            f"profile has length {len(theta)}, instance has {instance.n} agents"
        )
    if any(t not in (0, 1) for t in theta):
        raise InvalidProfileError(f"profile entries must be 0/1, got {theta}")
    return theta


def validate_ordering(instance: Instance, sigma: Sequence[int]) -> Ordering:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(instance.n)):
        raise InvalidProfileError(f"ordering {sigma} is not a permutation of 0..{instance.n - 1}")
    return sigma


def prior_prob(instance: Instance, theta: Sequence[int]) -> Fraction:
    """Product prior mass of a realized profile."""
    theta = validate_profile(instance, theta)
    slots = instance.cluster_slots()
    prob = Fraction(1)
    for i, t in enumerate(theta):
        p = instance.clusters[slots[i]].p
        prob *= p if t == 1 else 1 - p
    return prob


@dataclass(frozen=True)
class ProfileCounts:
    ones: int
    zeros: int
    per_cluster: tuple[tuple[int, int], ...]  # (ones, zeros) by cluster


def counts(instance: Instance, theta: Sequence[int]) -> ProfileCounts:
    theta = validate_profile(instance, theta)
    per = []
    for k in range(instance.num_clusters):
        h_k = sum(theta[i] for i in instance.agents_of_cluster(k))
        per.append((h_k, instance.clusters[k].size - h_k))
    h = sum(h for h, _ in per)
    return ProfileCounts(h, instance.n - h, tuple(per))


@dataclass(frozen=True)
class MatchCounts:
    """Per-composition team counts: ``per_ones[j]`` teams hold ``j`` type-1 members."""

    team_size: int
    per_ones: tuple[int, ...]

    @property
    def m00(self) -> int:
        assert self.team_size == 2
        return self.per_ones[0]

    @property
    def m10(self) -> int:
        assert self.team_size == 2
        return self.per_ones[1]

    @property
    def m11(self) -> int:
        assert self.team_size == 2
        return self.per_ones[2]


def slot_types(sigma: Sequence[int], theta: Sequence[int]) -> TypeSeq:
    """Types read off in announced order: entry ``i`` is the type of the agent at slot ``i``."""
    return tuple(theta[a] for a in sigma)


def match_counts_from_types(types: Sequence[int], team_size: int) -> MatchCounts:
    if len(types) % team_size != 0:
        raise ConfigurationError(
            f"team size {team_size} does not divide {len(types)} agents"
        )
    per = [0] * (team_size + 1)
    for b in range(0, len(types), team_size):
        per[sum(types[b : b + team_size])] += 1
    return MatchCounts(team_size, tuple(per))


def match_counts(sigma: Sequence[int], theta: Sequence[int], team_size: int) -> MatchCounts:
    """Team composition counts when ``sigma`` is announced for realization ``theta``."""
    if sorted(sigma) != list(range(len(theta))):
        raise InvalidProfileError("ordering must be a permutation of the agent indices")
    return match_counts_from_types(slot_types(sigma, theta), team_size)


def welfare(match: MatchCounts, utility: Utility) -> Fraction:
    """Total realized welfare: every member of a team earns the team payoff."""
    vals = utility.by_ones
    if len(vals) != match.team_size + 1:
        raise InvalidUtilityError(
            f"utility with {len(vals)} entries does not fit team size {match.team_size}"
        )
    return sum(
        (Fraction(match.team_size) * vals[j] * cnt for j, cnt in enumerate(match.per_ones)),
        Fraction(0),
    )


def welfare_of_types(types: Sequence[int], team_size: int, utility: Utility) -> Fraction:
    return welfare(match_counts_from_types(types, team_size), utility)


# ---------------------------------------------------------------------------
# utility classification


def classify_convexity(utility: Utility) -> Convexity:
    """Difference test on consecutive payoff gaps.

    Convex when every gap weakly exceeds the previous one (welfare then rises
    with the count of extreme teams); strictly concave when every gap strictly
    shrinks.  Mixed-curvature team utilities are rejected.
    """
    vals = utility.by_ones
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    if all(g2 >= g1 for g1, g2 in zip(gaps, gaps[1:])):
        return Convexity.CONVEX
    if all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:])):
        return Convexity.STRICTLY_CONCAVE
    raise InvalidUtilityError(
        f"utility {vals} is neither convex nor strictly concave under the gap test"
    )


def is_discrete_regular(utility: Utility, team_size: int, kind: Convexity | None = None) -> bool:
    """Curvature-regularity test extending the impossibility result to teams.

    Concave case: ``k1*u(k1) - (k1-1)*u(k1-1) > (k2+1)*u(k2+1) - k2*u(k2)``
    for all ``k1 > k2 >= 1``.  Convex case mirrors it with seat counts
    ``a - k`` in place of ``k``.  ``kind`` overrides the classification.
    """
    if team_size < 2:
        raise ConfigurationError(f"team size must be >= 2, got {team_size}")
    vals = utility.by_ones
    if len(vals) != team_size + 1:
        raise InvalidUtilityError(
            f"utility with {len(vals)} entries does not fit team size {team_size}"
        )
    a = team_size
    if kind is None:
        kind = classify_convexity(utility)
    u = vals
    if kind is Convexity.STRICTLY_CONCAVE:
        for k1 in range(2, a + 1):
            for k2 in range(1, k1):
                if not (k1 * u[k1] - (k1 - 1) * u[k1 - 1] > (k2 + 1) * u[k2 + 1] - k2 * u[k2]):
                    return False
        return True
    for k1 in range(1, a):
        for k2 in range(1, k1 + 1):
            lhs = (a - (k1 + 1)) * u[k1 + 1] - (a - k1) * u[k1]
            rhs = (a - k2) * u[k2] - (a - (k2 - 1)) * u[k2 - 1]
            if not (lhs < rhs):
                return False
    return True


# ---------------------------------------------------------------------------
# per-profile optima (pairs)


def fb(theta: Sequence[int]) -> int:
    """Fewest all-zero pairs any ordering can leave: ``((zeros - ones)/2)^+``."""
    theta = tuple(theta)
    if len(theta) % 2 != 0:
        raise ConfigurationError("per-profile pair optimum needs an even agent count")
    h = sum(theta)
    return max(0, (len(theta) - 2 * h) // 2)


def fb_c(instance: Instance, theta: Sequence[int]) -> int:
    """Fewest all-zero pairs when matching never crosses clusters."""
    if instance.team_size != 2:
        raise ConfigurationError("per-cluster pair optimum is defined for team size 2")
    c = counts(instance, theta)
    return sum(max(0, (l_k - h_k) // 2) for h_k, l_k in c.per_cluster)


def fb_of_class(cls: ClassKey, sizes: Sequence[int]) -> int:
    h = sum(cls)
    n = sum(sizes)
    return max(0, (n - 2 * h) // 2)


def fb_c_of_class(cls: ClassKey, sizes: Sequence[int]) -> int:
    return sum(max(0, (nk - 2 * hk) // 2) for hk, nk in zip(cls, sizes))


# ---------------------------------------------------------------------------
# weighted composition objective (teams)


def objective_levels(team_size: int) -> list[tuple[int, ...]]:
    """Composition counts grouped by distance from the balanced center.

    Level 0 is the most-mixed composition(s); the last level is the pure
    teams ``{0, a}``.  Even ``a`` has a singleton center, odd ``a`` starts
    with the innermost pair.
    """
    a = team_size
    levels: list[tuple[int, ...]] = []
    if a % 2 == 0:
        levels.append((a // 2,))
        for d in range(1, a // 2 + 1):
            levels.append((a // 2 - d, a // 2 + d))
    else:
        for r in range((a + 1) // 2):
            levels.append(((a - 1) // 2 - r, (a + 1) // 2 + r))
    return levels


def team_objective(match: MatchCounts, weights: Sequence[Fraction]) -> Fraction:
    """Weighted count of teams grouped by composition level.

    ``weights[d]`` multiplies the number of teams at distance ``d`` from the
    balanced composition; the weights must be a point of the simplex.
    Trailing zero weights beyond the level count are tolerated.
    """
    levels = objective_levels(match.team_size)
    w = [as_fraction(x) for x in weights]
    if len(w) < len(levels):
        raise InvalidWeightsError(
            f"need {len(levels)} weights for team size {match.team_size}, got {len(w)}"
        )
    if any(x < 0 for x in w):
        raise InvalidWeightsError(f"weights must be nonnegative, got {w}")
    if sum(w) != 1:
        raise InvalidWeightsError(f"weights must sum to 1, got sum {sum(w)}")
    if any(x != 0 for x in w[len(levels) :]):
        raise InvalidWeightsError("trailing weights beyond the level count must be zero")
    total = Fraction(0)
    for d, level in enumerate(levels):
        total += w[d] * sum(match.per_ones[j] for j in level)
    return total


# ---------------------------------------------------------------------------
# enumeration: explicit profiles and canonical classes


def enumerate_profiles(
    instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[tuple[TypeProfile, Fraction]]:
    """All ``2^n`` profiles with their prior mass.  Masses sum to exactly 1."""
    if instance.n > cap:
        raise EnumerationTooLargeError(
            f"2^{instance.n} profiles exceed the enumeration cap (n <= {cap})"
        )
    slots = instance.cluster_slots()
    ps = [instance.clusters[k].p for k in slots]
    for bits in itertools.product((0, 1), repeat=instance.n):
        prob = Fraction(1)
        for t, p in zip(bits, ps):
            prob *= p if t else 1 - p
        yield bits, prob


@dataclass(frozen=True)
class ProfileClass:
    """Exchangeability class: all profiles sharing per-cluster type-1 counts."""

    ones: ClassKey
    multiplicity: int        # number of profiles in the class
    profile_prior: Fraction  # prior mass of each single profile in it

    @property
    def prior(self) -> Fraction:
        return self.multiplicity * self.profile_prior


def class_of_profile(instance: Instance, theta: Sequence[int]) -> ClassKey:
    return tuple(h for h, _ in counts(instance, theta).per_cluster)


def class_multiplicity(instance: Instance, cls: ClassKey) -> int:
    return math.prod(math.comb(c.size, h) for c, h in zip(instance.clusters, cls))


def class_profile_prior(instance: Instance, cls: ClassKey) -> Fraction:
    prob = Fraction(1)
    for c, h in zip(instance.clusters, cls):
        prob *= c.p**h * (1 - c.p) ** (c.size - h)
    return prob


def enumerate_canonical(instance: Instance) -> Iterator[ProfileClass]:
    """Count-vector classes covering the profile space exactly once."""
    ranges = [range(c.size + 1) for c in instance.clusters]
    for cls in itertools.product(*ranges):
        yield ProfileClass(
            ones=cls,
            multiplicity=class_multiplicity(instance, cls),
            profile_prior=class_profile_prior(instance, cls),
        )


def representative_profile(instance: Instance, cls: ClassKey) -> TypeProfile:
    """Lexicographically-first member of a class: ones packed first per cluster."""
    out = []
    for c, h in zip(instance.clusters, cls):
        out.extend([1] * h + [0] * (c.size - h))
    return tuple(out)


# ---------------------------------------------------------------------------
# canonical announcement patterns


def distinct_permutations(items: Sequence) -> Iterator[tuple]:
    """Multiset permutations: each distinct arrangement exactly once."""
    pool = sorted(items)

    def rec(remaining: list, prefix: list):
        if not remaining:
            yield tuple(prefix)
            return
        seen = set()
        for idx, x in enumerate(remaining):
            if x in seen:
                continue
            seen.add(x)
            yield from rec(remaining[:idx] + remaining[idx + 1 :], prefix + [x])

    yield from rec(pool, [])


def enumerate_gammas(instance: Instance) -> list[Gamma]:
    """All distinct slot-cluster sequences (multiset permutations of labels)."""
    labels = instance.cluster_slots()
    results: list[Gamma] = []

    def place(remaining: dict[int, int], prefix: list[int]):
        if len(prefix) == len(labels):
            results.append(tuple(prefix))
            return
        for k in sorted(remaining):
            if remaining[k] > 0:
                remaining[k] -= 1
                prefix.append(k)
                place(remaining, prefix)
                prefix.pop()
                remaining[k] += 1

    placecounts = {k: instance.clusters[k].size for k in range(instance.num_clusters)}
    place(placecounts, [])
    return results


def class_of_pattern(instance: Instance, gamma: Gamma, types: TypeSeq) -> ClassKey:
    ones = [0] * instance.num_clusters
    for k, t in zip(gamma, types):
        ones[k] += t
    return tuple(ones)


def patterns_for_gamma_class(gamma: Gamma, cls: ClassKey) -> Iterator[TypeSeq]:
    """All slot-type sequences on ``gamma`` realizing the class counts."""
    slots_by_cluster: dict[int, list[int]] = {}
    for i, k in enumerate(gamma):
        slots_by_cluster.setdefault(k, []).append(i)
    choices = []
    for k, h in enumerate(cls):
        slots_k = slots_by_cluster.get(k, [])
        choices.append(list(itertools.combinations(slots_k, h)))
    n = len(gamma)
    for pick in itertools.product(*choices):
        t = [0] * n
        for ones in pick:
            for i in ones:
                t[i] = 1
        yield tuple(t)


def pattern_weight_denominator(instance: Instance, cls: ClassKey) -> int:
    """Orderings per (profile, pattern) pair: within-cluster arrangements."""
    return math.prod(
        math.factorial(h) * math.factorial(c.size - h)
        for c, h in zip(instance.clusters, cls)
    )


def orderings_for_profile_pattern(
    instance: Instance, theta: TypeProfile, gamma: Gamma, types: TypeSeq
) -> Iterator[Ordering]:
    """All orderings that read ``theta`` as the slot sequence ``(gamma, types)``."""
    pools: dict[tuple[int, int], list[int]] = {}
    for agent in range(instance.n):
        pools.setdefault((instance.cluster_of(agent), theta[agent]), []).append(agent)
    slot_keys = list(zip(gamma, types))
    need: dict[tuple[int, int], list[int]] = {}
    for i, key in enumerate(slot_keys):
        need.setdefault(key, []).append(i)
    for key, slots_list in need.items():
        if len(pools.get(key, [])) != len(slots_list):
            return
    keys = list(need)
    perms = [itertools.permutations(pools[key]) for key in keys]
    for assignment in itertools.product(*perms):
        sigma = [0] * instance.n
        for key, agents in zip(keys, assignment):
            for slot, agent in zip(need[key], agents):
                sigma[slot] = agent
        yield tuple(sigma)


def representative_ordering(
    instance: Instance, theta: TypeProfile, gamma: Gamma, types: TypeSeq
) -> Ordering:
    """One ordering realizing the pattern: agents assigned in index order."""
    pools: dict[tuple[int, int], list[int]] = {}
    for agent in range(instance.n):
        pools.setdefault((instance.cluster_of(agent), theta[agent]), []).append(agent)
    sigma = [0] * instance.n
    cursors = {key: 0 for key in pools}
    for slot, key in enumerate(zip(gamma, types)):
        pool = pools.get(key)
        if pool is None or cursors[key] >= len(pool):
            raise InvalidProfileError(f"pattern {key} at slot {slot} does not fit profile")
        sigma[slot] = pool[cursors[key]]
        cursors[key] += 1
    return tuple(sigma)


# ---------------------------------------------------------------------------
# instance serialization


def instance_to_dict(instance: Instance) -> dict:
    if isinstance(instance.utility, PairUtility):
        util = {"pair": [str(v) for v in instance.utility.by_ones]}
    else:
        util = {"team": [str(v) for v in instance.utility.values]}
    return {
        "clusters": [{"size": c.size, "p": str(c.p)} for c in instance.clusters],
        "team_size": instance.team_size,
        "utility": util,
        "awareness": instance.awareness.value,
    }


def instance_from_dict(data: dict) -> Instance:
    try:
        clusters = tuple(
            Cluster(int(c["size"]), as_fraction(c["p"])) for c in data["clusters"]
        )
        team_size = int(data.get("team_size", 2))
        util_spec = data["utility"]
        if "pair" in util_spec:
            vals = [as_fraction(v) for v in util_spec["pair"]]
            if len(vals) != 3:
                raise ConfigurationError("pair utility needs exactly [u00, u10, u11]")
            utility: Utility = PairUtility(*vals)
        elif "team" in util_spec:
            utility = TeamUtility(tuple(as_fraction(v) for v in util_spec["team"]))
        else:
            raise ConfigurationError("utility must provide 'pair' or 'team'")
        awareness = Awareness(data.get("awareness", "agnostic"))
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigurationError(f"malformed instance document: {exc}") from exc
    return Instance(clusters, team_size, utility, awareness)
