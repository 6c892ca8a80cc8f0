"""Posteriors and the persuasiveness / stability / Pareto checks."""

import itertools
import random
from fractions import Fraction

import pytest

from teamsig.beliefs import (
    Baseline,
    ClassScheme,
    ExplicitScheme,
    Posterior,
    baseline_matching,
    baseline_utility,
    baseline_utility_aware,
    conditional_slot_posterior,
    expected_team_utility,
    expected_welfare,
    find_blocking_pair,
    is_group_stable,
    is_pareto_improving,
    is_persuasive,
    is_stable,
    posterior_expected_types,
    scheme_from_json,
    scheme_to_json,
    signal_views,
    slot_posterior,
    to_explicit,
    view_for_ordering,
)
from teamsig.core import (
    Awareness,
    Cluster,
    Instance,
    PairUtility,
    TeamUtility,
    enumerate_profiles,
    match_counts,
    prior_prob,
)
from teamsig.errors import (
    ConfigurationError,
    InvalidPartitionError,
    PreconditionError,
    UndefinedPosteriorError,
)

F = Fraction


def single_cluster(n, p, utility=None, awareness=Awareness.SELF_AGNOSTIC, a=2):
    return Instance(
        clusters=(Cluster(n, F(p)),),
        team_size=a,
        utility=utility or PairUtility(0, 1, 2),
        awareness=awareness,
    )


def two_clusters(n1, p1, n2, p2, utility=None, awareness=Awareness.SELF_AGNOSTIC):
    return Instance(
        clusters=(Cluster(n1, F(p1)), Cluster(n2, F(p2))),
        utility=utility or PairUtility(0, 1, 2),
        awareness=awareness,
    )


def paired_profiles_scheme():
    """Six agents, one cluster: two complementary profiles announce the same
    interleaved ordering with probability one; all other profiles are silent."""
    theta1 = (1, 1, 1, 1, 0, 0)
    theta2 = (1, 1, 0, 0, 1, 1)
    sigma = (0, 1, 2, 4, 3, 5)  # A, B, C, E, D, F
    return theta1, theta2, sigma, ExplicitScheme.from_map(
        {theta1: [(sigma, F(1))], theta2: [(sigma, F(1))]}
    )


# --- posteriors ----------------------------------------------------------------


def test_two_profile_scheme_posterior():
    inst = single_cluster(6, "1/2")
    theta1, theta2, sigma, scheme = paired_profiles_scheme()
    post = posterior_expected_types(inst, scheme, sigma)
    by_slot = tuple(post.by_agent[a] for a in sigma)
    assert by_slot == (1, 1, F(1, 2), F(1, 2), F(1, 2), F(1, 2))
    for theta in (theta1, theta2):
        assert match_counts(sigma, theta, 2).m00 == 0


def test_no_information_posterior_equals_prior():
    inst = single_cluster(4, "0.3")
    sigma = (0, 1, 2, 3)
    scheme = ExplicitScheme.from_map(
        {theta: [(sigma, F(1))] for theta, _ in enumerate_profiles(inst)}
    )
    post = posterior_expected_types(inst, scheme, sigma)
    assert post.by_agent == (F(3, 10),) * 4


def test_posterior_of_unsupported_signal_errors():
    inst = single_cluster(4, "1/2")
    scheme = ExplicitScheme.from_map({(1, 1, 0, 0): [((0, 1, 2, 3), F(1))]})
    with pytest.raises(UndefinedPosteriorError):
        posterior_expected_types(inst, scheme, (3, 2, 1, 0))


def test_full_information_posterior_enumerates_preimage():
    # deterministic sorted announcement per profile: posterior of a slot is the
    # Bayes mixture over the consistent preimage profiles
    inst = single_cluster(4, "1/2")
    mapping = {}
    for theta, _ in enumerate_profiles(inst):
        order = tuple(sorted(range(4), key=lambda i: (-theta[i], i)))
        mapping[theta] = [(order, F(1))]
    scheme = ExplicitScheme.from_map(mapping)
    sigma = (0, 1, 2, 3)
    # profiles announcing the identity: exactly those sorted already
    view = view_for_ordering(inst, scheme, sigma)
    post = slot_posterior(view)
    weights = {
        theta: prior_prob(inst, theta)
        for theta, _ in enumerate_profiles(inst)
        if tuple(sorted(range(4), key=lambda i: (-theta[i], i))) == sigma
    }
    total = sum(weights.values())
    for i in range(4):
        expected = sum(w * theta[i] for theta, w in weights.items()) / total
        assert post[i] == expected


def test_law_of_total_expectation_random_scheme():
    inst = two_clusters(2, "0.7", 2, "0.2")
    rng = random.Random(11)
    mapping = {}
    for theta, _ in enumerate_profiles(inst):
        sig1 = tuple(rng.sample(range(4), 4))
        sig2 = tuple(rng.sample(range(4), 4))
        w = F(rng.randint(0, 4), 4)
        entries = [(sig1, w), (sig2, 1 - w)]
        mapping[theta] = [(s, p) for s, p in entries if p > 0]
    scheme = ExplicitScheme.from_map(mapping)
    scheme.validate(inst)
    slots = inst.cluster_slots()
    sums = [F(0)] * inst.n
    for view in signal_views(inst, scheme):
        for t, m in view.outcomes:
            sigma = view.label[1]
            for i, agent in enumerate(sigma):
                sums[agent] += m * t[i]
    for agent in range(inst.n):
        assert sums[agent] == inst.clusters[slots[agent]].p


# --- persuasiveness -------------------------------------------------------------


def test_two_profile_scheme_is_persuasive():
    inst = single_cluster(6, "1/2")
    _, _, _, scheme = paired_profiles_scheme()
    assert is_persuasive(inst, scheme).ok


def test_no_info_sorted_clusters_is_persuasive():
    inst = two_clusters(2, "0.9", 2, "0.1")
    sigma = (0, 1, 2, 3)
    scheme = ExplicitScheme.from_map(
        {theta: [(sigma, F(1))] for theta, _ in enumerate_profiles(inst)}
    )
    assert is_persuasive(inst, scheme).ok


def test_fixed_signal_for_ascending_profile_is_not_persuasive():
    inst = single_cluster(4, "1/2")
    sigma = (0, 1, 2, 3)
    scheme = ExplicitScheme.from_map({(0, 1, 0, 1): [(sigma, F(1))]})
    res = is_persuasive(inst, scheme)
    assert not res.ok
    assert res.witness[1] == 0  # first slot already dominated


def test_posterior_sorted_announcements_are_persuasive():
    inst = single_cluster(4, "0.6")
    mapping = {}
    for theta, _ in enumerate_profiles(inst):
        order = tuple(sorted(range(4), key=lambda i: (-theta[i], i)))
        mapping[theta] = [(order, F(1))]
    scheme = ExplicitScheme.from_map(mapping)
    assert is_persuasive(inst, scheme).ok


# --- stability -------------------------------------------------------------------


def stable_posterior(inst, values):
    return Posterior(Awareness.SELF_AGNOSTIC, tuple(F(v) for v in values))


def test_stable_example_sequential():
    inst = single_cluster(6, "1/2")
    post = stable_posterior(inst, (1, 1, F(1, 2), F(1, 2), F(1, 2), F(1, 2)))
    assert is_stable(inst, (0, 1, 2, 3, 4, 5), post).ok


def test_blocking_pair_found():
    inst = single_cluster(4, "1/2")
    post = stable_posterior(inst, (F(3, 10), F(9, 10), F(9, 10), F(3, 10)))
    res = is_stable(inst, (0, 1, 2, 3), post)
    assert not res.ok
    assert res.witness == (1, 2)  # the two strong agents pair up instead


def test_all_equal_posteriors_stable():
    inst = single_cluster(4, "1/2")
    post = stable_posterior(inst, (F(1, 2),) * 4)
    assert is_stable(inst, (2, 0, 3, 1), post).ok


def test_stability_matches_persuasiveness_on_random_schemes():
    rng = random.Random(23)
    inst = two_clusters(2, "0.8", 2, "0.3")
    for _ in range(40):
        mapping = {}
        for theta, _ in enumerate_profiles(inst):
            sig = tuple(rng.sample(range(4), 4))
            mapping[theta] = [(sig, F(1))]
        scheme = ExplicitScheme.from_map(mapping)
        for view in signal_views(inst, scheme):
            sigma = view.label[1]
            ok_pers = is_persuasive(
                inst, ExplicitScheme.from_map(_restrict(scheme, sigma))
            ).ok
            post = posterior_expected_types(inst, scheme, sigma)
            ok_stable = is_stable(inst, sigma, post).ok
            assert ok_pers == ok_stable


def _restrict(scheme, sigma):
    out = {}
    for theta, entries in scheme.support:
        keep = [(s, p) for s, p in entries if s == sigma]
        if keep:
            out[theta] = keep
    return out


# --- group stability --------------------------------------------------------------


def test_group_stable_identical_posteriors():
    inst = single_cluster(6, "1/2", utility=TeamUtility((0, 1, F(3, 2), F(7, 4))), a=3)
    res = is_group_stable(inst, [(0, 1, 2), (3, 4, 5)], [F(1, 2)] * 6)
    assert res.ok


def test_group_instability_witness():
    inst = single_cluster(6, "1/2", utility=TeamUtility((0, 1, F(3, 2), F(7, 4))), a=3)
    teams = [(0, 1, 3), (2, 4, 5)]
    post = [F(1), F(1), F(1), F(0), F(0), F(0)]
    res = is_group_stable(inst, teams, post)
    assert not res.ok
    t, t2, i, j = res.witness
    assert j == 2 and i == 3 and set(t) == {0, 1, 3}


def test_group_stability_pair_reduction():
    # at team size 2 the coalition scan coincides with the blocking-pair scan
    inst = single_cluster(6, "1/2", utility=PairUtility(0, 1, F(3, 2)))
    rng = random.Random(5)
    for _ in range(60):
        post = [F(rng.randint(0, 8), 8) for _ in range(6)]
        agents = list(range(6))
        rng.shuffle(agents)
        teams = [tuple(agents[b : b + 2]) for b in range(0, 6, 2)]
        pair = find_blocking_pair(post, teams)
        res = is_group_stable(inst, teams, post)
        assert res.ok == (pair is None)


def test_group_stable_rejects_bad_partition():
    inst = single_cluster(6, "1/2", utility=TeamUtility((0, 1, F(3, 2), F(7, 4))), a=3)
    with pytest.raises(InvalidPartitionError):
        is_group_stable(inst, [(0, 1, 2), (3, 4, 4)], [F(1, 2)] * 6)


# --- baseline ----------------------------------------------------------------------


def test_baseline_value_single_cluster():
    inst = single_cluster(4, "1/2", utility=PairUtility(0, 1, F(3, 2)))
    base = baseline_matching(inst)
    # p*u11 + (1-p)*u00 + p(1-p)(2u10 - u11 - u00)
    assert base.by_cluster[0] == F(7, 8)
    assert base.teams == ((0, 1), (2, 3))


def test_baseline_orders_clusters_by_prior():
    inst = Instance(
        (Cluster(2, F(1, 10)), Cluster(2, F(9, 10))), utility=PairUtility(0, 1, 2)
    )
    base = baseline_matching(inst)
    assert base.ordering == (2, 3, 0, 1)
    assert base.teams == ((2, 3), (0, 1))


def test_baseline_aware_values():
    inst = single_cluster(
        4, "1/2", utility=PairUtility(0, 1, F(3, 2)), awareness=Awareness.SELF_AWARE
    )
    base = baseline_matching(inst)
    u0, u1 = base.by_cluster_aware[0]
    assert u1 == 1 + F(1, 2) * (F(3, 2) - 1)  # u10 + p (u11 - u10)
    assert u0 == 0 + F(1, 2) * (1 - 0)  # u00 + p (u10 - u00)


def test_baseline_agnostic_formula_matches_binomial():
    inst = two_clusters(2, "0.7", 4, "0.2", utility=PairUtility(0, 1, F(5, 2)))
    for k, c in enumerate(inst.clusters):
        p = c.p
        u = inst.utility
        expected = p * u.u11 + (1 - p) * u.u00 + p * (1 - p) * (2 * u.u10 - u.u11 - u.u00)
        assert baseline_utility(inst, k) == expected


# --- Pareto ------------------------------------------------------------------------


def test_pareto_requires_persuasive():
    inst = single_cluster(4, "1/2")
    scheme = ExplicitScheme.from_map({(0, 1, 0, 1): [((0, 1, 2, 3), F(1))]})
    with pytest.raises(PreconditionError):
        is_pareto_improving(inst, scheme)


def test_no_info_scheme_is_weakly_pareto():
    inst = two_clusters(2, "0.8", 2, "0.3", utility=PairUtility(0, 1, F(3, 2)))
    sigma = (0, 1, 2, 3)
    scheme = ExplicitScheme.from_map(
        {theta: [(sigma, F(1))] for theta, _ in enumerate_profiles(inst)}
    )
    assert is_pareto_improving(inst, scheme).ok


def test_sorted_full_revelation_fails_interim_pareto_for_concave():
    # deterministic sorted announcements expose the back slots: their
    # conditional payoff drops below the baseline
    inst = single_cluster(4, "1/2", utility=PairUtility(0, 1, F(3, 2)))
    mapping = {}
    for theta, _ in enumerate_profiles(inst):
        order = tuple(sorted(range(4), key=lambda i: (-theta[i], i)))
        mapping[theta] = [(order, F(1))]
    scheme = ExplicitScheme.from_map(mapping)
    res = is_pareto_improving(inst, scheme)
    assert not res.ok


# --- team utility helper -------------------------------------------------------------


def test_expected_team_utility_pair():
    u = PairUtility(0, 1, 3)
    val = expected_team_utility([F(1, 2), F(1, 3)], u.by_ones)
    direct = (
        F(1, 2) * F(1, 3) * 3 + (F(1, 2) * F(2, 3) + F(1, 2) * F(1, 3)) * 1
    )
    assert val == direct


# --- serialization -------------------------------------------------------------------


def test_scheme_json_roundtrip_explicit():
    _, _, _, scheme = paired_profiles_scheme()
    again = scheme_from_json(scheme_to_json(scheme))
    assert again == scheme


def test_scheme_json_roundtrip_canonical():
    scheme = ClassScheme.from_map(
        {
            (1, 0): [((0, 0, 1, 1), (1, 0, 0, 0), F(1, 2)), ((0, 0, 1, 1), (0, 1, 0, 0), F(1, 2))],
        }
    )
    again = scheme_from_json(scheme_to_json(scheme))
    assert again == scheme


def test_class_scheme_views_match_explicit_expansion():
    inst = two_clusters(2, "0.7", 2, "0.2")
    scheme = ClassScheme.from_map(
        {
            cls.ones: [((0, 0, 1, 1), t, F(1, c)) for t, c in _uniform_patterns(inst, cls.ones)]
            for cls in _classes(inst)
        }
    )
    scheme.validate(inst)
    explicit = to_explicit(inst, scheme)
    explicit.validate(inst)
    assert explicit.is_complete(inst)
    assert expected_welfare(inst, scheme) == expected_welfare(inst, explicit)
    assert is_persuasive(inst, scheme).ok == is_persuasive(inst, explicit).ok


def _classes(inst):
    from teamsig.core import enumerate_canonical

    return list(enumerate_canonical(inst))


def _uniform_patterns(inst, cls):
    from teamsig.core import patterns_for_gamma_class

    pats = list(patterns_for_gamma_class((0, 0, 1, 1), cls))
    return [(t, len(pats)) for t in pats]
