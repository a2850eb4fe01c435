import random

import pytest

from ptwalls.algebra import TruncationTooSmall
from ptwalls.cech_dgla import random_cochain
from ptwalls.localmodel import build_model
from ptwalls.mchull import (DeformationProblem, TruncatedIdeal, TWSeries, coordinate_ring, gauge_action,
                            hankel_rank_ideal, invariant_subring, mc_residue, monomials, primary_obstruction, run_hull,
                            stopping_check, substitute, truncate)
from ptwalls.scenarios.chain_scenario import TriplePointLifts, triple_point_candidate
from ptwalls.scenarios.single_scenario import WallPointLifts, hankel_target, wall_point_candidate
from ptwalls.thomwhitney import whitney_lift


@pytest.fixture(scope='module')
def wall_point():
    lifts = WallPointLifts(build_model('single', 3))
    return DeformationProblem(lifts.pair, lifts.lifts(), lifts.names(), lifts.aut_weights(), label='single(3)')


@pytest.fixture(scope='module')
def wall_point_hull(wall_point):
    return run_hull(wall_point, 2)


def test_monomials_are_ordered_by_degree():
    assert monomials(2, 1, 2) == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1)]


def test_truncate_and_substitute():
    R = coordinate_ring(['x', 'y'])
    x, y = R.gens
    assert truncate(x + x * y + x**3, 2) == x + x * y
    assert substitute(x * y, [x + y**2, y]) == x * y + y**3
    assert substitute(x * y, [x + y**2, y], degree=2) == x * y


def test_truncated_ideal_membership_and_dimension():
    R = coordinate_ring(['x', 'y'])
    x, y = R.gens
    ideal = TruncatedIdeal(R, [x * y], 3)
    assert ideal.contains(x**2 * y)
    assert not ideal.contains(x)
    assert ideal.dimension == 3
    assert TruncatedIdeal.maximal_power(R, 2, 3).dimension == 7
    assert ideal.times_maximal().dimension == 2
    assert ideal.normal_form(x + x * y) == x


def test_minimal_generators_drop_multiples():
    R = coordinate_ring(['x', 'y'])
    x, y = R.gens
    ideal = TruncatedIdeal(R, [x * y, x**2 * y], 3)
    assert len(ideal.minimal_generators()) == 1
    assert ideal == TruncatedIdeal(R, [x * y], 3)
    assert (ideal + TruncatedIdeal(R, [x], 3)).includes(ideal)
    assert TruncatedIdeal.maximal_power(R, 2, 2).describe() == 'm^2'


def test_hankel_rank_ideal():
    assert len(hankel_rank_ideal(2).generators) == 1
    assert len(hankel_rank_ideal(3).generators) == 3
    with pytest.raises(ValueError):
        hankel_rank_ideal(1)


def test_lifts_must_match_names(wall_point):
    with pytest.raises(ValueError):
        DeformationProblem(wall_point.pair, wall_point.lifts, wall_point.names[:-1], check=False)


def test_primary_obstruction_cuts_out_the_candidate(wall_point):
    kappa = primary_obstruction(wall_point)
    assert not kappa.is_zero()
    R = wall_point.ring
    assert TruncatedIdeal(R, kappa.quadrics, 2) == TruncatedIdeal(R, wall_point_candidate(R, 3), 2)


def test_wall_point_hull(wall_point, wall_point_hull):
    state = wall_point_hull
    assert state.order == 2
    assert len(state.history) == 2
    assert state.is_maurer_cartan()
    verdict = stopping_check(state, wall_point_candidate(wall_point.ring, 3), 3)
    assert verdict.conclusive
    assert verdict.to_dict()['verdict'] == 'hull-equals-candidate'


def test_stopping_check_needs_enough_orders(wall_point):
    with pytest.raises(TruncationTooSmall):
        stopping_check(wall_point.initial_state(), wall_point_candidate(wall_point.ring, 3), 3)


def test_invariants_of_a_torus_plane():
    R = coordinate_ring(['x', 'y'])
    presentation = invariant_subring(TruncatedIdeal(R, [], 4), [(1, ), (-1, )], 4)
    assert [str(g) for g in presentation.generators] == ['x*y']
    assert presentation.relations == []
    assert presentation.embedding_dimension == 1


@pytest.mark.parametrize('n', [2, 3, 4])
def test_wall_point_invariants_are_hankel(n):
    R = coordinate_ring([f'p{i}' for i in range(1, n + 1)] + ['q0', 'q1'])
    ideal = TruncatedIdeal(R, wall_point_candidate(R, n), 4)
    weights = [(-1, 1)] * n + [(1, -1)] * 2
    presentation = invariant_subring(ideal, weights, 4, hankel_target(R, n))
    assert presentation.matches
    assert len(presentation.generators) == 2 * n


@pytest.mark.slow
def test_wall_point_hull_for_a_minus_four_curve():
    lifts = WallPointLifts(build_model('single', 4))
    problem = DeformationProblem(lifts.pair, lifts.lifts(), lifts.names(), lifts.aut_weights())
    state = run_hull(problem, 2)
    assert stopping_check(state, wall_point_candidate(problem.ring, 4), 3).conclusive


@pytest.mark.slow
@pytest.mark.parametrize('n2', [3, 4])
def test_triple_point_hull(n2):
    lifts = TriplePointLifts(build_model('chain', 3, n2))
    problem = DeformationProblem(lifts.pair, lifts.lifts(), lifts.names(), label=f'chain(3,{n2})')
    state = run_hull(problem, 3)
    assert len(state.history) == 3
    verdict = stopping_check(state, triple_point_candidate(problem.ring, 3, n2), 4)
    assert verdict.conclusive


def test_gauge_action_keeps_the_order_two_obstruction(wall_point):
    rng = random.Random(11)
    R = wall_point.ring
    z = TWSeries(R, wall_point.pair,
                 {mon: whitney_lift(random_cochain(wall_point.pair, 0, rng)) for mon in monomials(R.ngens, 1, 1)[:2]})
    xi = wall_point.initial_state().xi
    moved = gauge_action(z, xi, 1)
    before, after = mc_residue(xi, 2), mc_residue(moved, 2)
    for mon in monomials(R.ngens, 2, 2):
        assert wall_point.h2_coordinates(before.coefficient(mon)) == wall_point.h2_coordinates(after.coefficient(mon))
