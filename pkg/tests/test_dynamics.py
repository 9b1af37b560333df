from fractions import Fraction as F
from itertools import product

import pytest

from contestq import (
    CapExceededError,
    PathStatus,
    PreconditionError,
    analyze_graph,
    brute_force_pne,
    build,
    build_improvement_graph,
    build_potential_cache,
    check_no_switch_lemma,
    improvement_steps,
    load_of,
    potential,
    proportional,
    run_improvement_path,
    to_dot,
)

from conftest import make_game


def test_improvement_steps_counterexample1():
    game = build("ce1").game
    steps = improvement_steps(game, (1, 1))
    assert (2, 2, F(1, 6)) in steps  # utilities 1/6 at q1 vs 1/3 at q2


def test_improvement_steps_empty_at_pne(prop_2x2):
    assert improvement_steps(prop_2x2, (1, 1)) == []


def test_improvement_steps_counterexample2_upward():
    game = build("ce2", k=2).game
    steps = improvement_steps(game, (2, 2))
    assert any(s.player == 2 and s.quality == 3 for s in steps)


def test_best_response_cycle_counterexample1():
    game = build("ce1").game
    walk = run_improvement_path(game, (1, 2), policy="best-response")
    assert walk.status is PathStatus.CYCLE
    assert walk.cycle == [(1, 2), (3, 2), (3, 1), (2, 1), (2, 3), (1, 3)]


def test_best_response_cycle_matching_pennies():
    game = build("matching_pennies").game
    walk = run_improvement_path(game, (1, 2), policy="best-response")
    assert walk.status is PathStatus.CYCLE
    assert len(walk.cycle) == 4
    assert set(walk.cycle) == {(1, 1), (1, 2), (2, 1), (2, 2)}


@pytest.mark.parametrize("policy", ["first", "best", "random"])
def test_fip_converges_under_every_policy(policy):
    game = build("fip_voluntary", n=3, Q=3).game
    pnes = set(brute_force_pne(game, find_all=True).all)
    for start in product((1, 2, 3), repeat=3):
        walk = run_improvement_path(game, start, policy=policy, seed=7)
        assert walk.status is PathStatus.CONVERGED
        assert walk.profile in pnes


def test_random_policy_is_reproducible():
    game = build("ce1").game
    a = run_improvement_path(game, (1, 1), policy="random", seed=123)
    b = run_improvement_path(game, (1, 1), policy="random", seed=123)
    assert (a.status, a.cycle, a.profile, a.steps) == \
        (b.status, b.cycle, b.profile, b.steps)


def test_truncation():
    game = build("ce1").game
    walk = run_improvement_path(game, (1, 1), policy="first", max_steps=1)
    assert walk.status is PathStatus.TRUNCATED


def test_analyze_graph_fip_voluntary_sinks():
    game = build("fip_voluntary", n=3, Q=3).game
    analysis = analyze_graph(game, mode="anonymous")
    assert analysis.acyclic
    assert analysis.sinks == [(2, 1, 0), (3, 0, 0)]


def test_analyze_graph_fip_mandatory_unique_sink():
    game = build("fip_mandatory", n=3, Q=3).game
    analysis = analyze_graph(game, mode="anonymous")
    assert analysis.acyclic
    assert analysis.sinks == [(3, 0, 0)]


def test_analyze_graph_counterexample2_cycle_witness():
    game = build("ce2", k=2).game
    analysis = analyze_graph(game, mode="profile")
    assert not analysis.acyclic
    witness = analysis.cycle_witness
    assert witness[0] == witness[-1]
    graph = build_improvement_graph(game, mode="profile")
    for a, b in zip(witness, witness[1:]):
        assert b in [e.target for e in graph.edges[a]]


def test_graph_cap():
    game = build("fip_voluntary", n=4, Q=3).game
    with pytest.raises(CapExceededError):
        build_improvement_graph(game, mode="profile", max_nodes=10)


def test_anonymous_mode_needs_interchangeable_players():
    game = build("ce2", k=2).game  # distinct skills
    with pytest.raises(PreconditionError):
        build_improvement_graph(game, mode="anonymous")


def test_no_switch_lemma_voluntary_and_mandatory():
    for iid in ("fip_voluntary", "fip_mandatory"):
        report = check_no_switch_lemma(build(iid, n=3, Q=3).game)
        assert report.holds
        assert report.violations == []
    report = check_no_switch_lemma(build("fip_voluntary", n=3, Q=3).game)
    assert report.boundary_state_clean is True


def test_no_switch_lemma_violated_by_counterexample2():
    report = check_no_switch_lemma(build("ce2", k=2).game)
    assert not report.holds
    assert any(e.to_quality > e.from_quality for e in report.violations)


def test_no_switch_requires_proportional(es_2x2):
    with pytest.raises(PreconditionError):
        check_no_switch_lemma(es_2x2)


def test_potential_game_graph_acyclic_and_potential_increases(es_2x2):
    analysis = analyze_graph(es_2x2, mode="profile")
    assert analysis.acyclic
    cache = build_potential_cache(es_2x2)
    graph = build_improvement_graph(es_2x2, mode="profile")
    for node in graph.nodes:
        for edge in graph.edges[node]:
            assert potential(es_2x2, edge.target, cache) > \
                potential(es_2x2, edge.source, cache)


def test_sinks_equal_brute_force_pne_set():
    game = build("fip_voluntary", n=3, Q=2).game
    analysis = analyze_graph(game, mode="profile")
    assert set(analysis.sinks) == set(brute_force_pne(game, find_all=True).all)


@pytest.mark.parametrize("n,Q", [(2, 2), (3, 2), (3, 3), (4, 3)])
@pytest.mark.parametrize("iid", ["fip_voluntary", "fip_mandatory"])
def test_quotient_consistency(n, Q, iid):
    game = build(iid, n=n, Q=Q).game
    full = analyze_graph(game, mode="profile")
    anon = analyze_graph(game, mode="anonymous")
    assert full.acyclic == anon.acyclic
    assert sorted({load_of(s, Q) for s in full.sinks}) == anon.sinks


def test_dot_export_marks_sinks():
    game = make_game(2, 2, (1, 1), (1, 2), proportional())
    graph = build_improvement_graph(game, mode="anonymous")
    dot = to_dot(graph)
    assert dot.startswith("digraph improvement {")
    assert '"L:2,0" [shape=doublecircle];' in dot
    assert '"L:0,2" [shape=circle];' in dot
    assert "->" in dot


def test_voluntary_sub_unit_effort_boundary():
    # With f_2 < 1 the all-at-lowest state stops being a sink: opting
    # back in pays 1 - f_2 > 0, an upward improvement.  The graph stays
    # acyclic but the sink set moves; the no-switch checker must report
    # the upward edge rather than assume it away.
    game = make_game(2, 2, (1, 1), (0, F(1, 2)), proportional())
    analysis = analyze_graph(game, mode="anonymous")
    assert analysis.acyclic
    assert analysis.sinks == [(0, 2), (1, 1)]
    report = check_no_switch_lemma(game)
    assert not report.holds
    assert [(e.source, e.from_quality, e.to_quality)
            for e in report.violations] == [((2, 0), 1, 2)]
