import random

import pytest
from sympy.polys.domains import QQ

from ptwalls.algebra import CompatibilityError
from ptwalls.cech_dgla import HomPair, cohomology_representatives, random_cochain, total_differential
from ptwalls.localmodel import build_model, resolve_sheaf
from ptwalls.scenarios.single_scenario import WallPointLifts
from ptwalls.thomwhitney import (SimplexForm, TWElement, integrate, is_closed, solve_primitive, tw_bracket,
                                 tw_cohomology_class, tw_differential, whitney_form, whitney_lift)


@pytest.fixture(scope='module')
def end_e():
    E = resolve_sheaf('E', build_model('single', 3))
    return HomPair(E, E)


def _random_form(dim, rng):
    form = SimplexForm(dim)
    for _ in range(4):
        a = tuple(rng.randint(0, 2) for _ in range(dim))
        s = tuple(sorted(rng.sample(range(1, dim + 1), rng.randint(0, dim))))
        form = form + SimplexForm(dim, {(a, s): rng.randint(-3, 3)})
    return form


def test_barycentric_coordinates_sum_to_one():
    for dim in (1, 2, 3):
        total = SimplexForm(dim)
        dtotal = SimplexForm(dim)
        for i in range(dim + 1):
            total = total + SimplexForm.t(dim, i)
            dtotal = dtotal + SimplexForm.dt(dim, i)
        assert total == SimplexForm.one(dim)
        assert not dtotal


def test_forms_form_a_dga():
    rng = random.Random(0)
    for dim in (1, 2, 3):
        for _ in range(5):
            f, g = _random_form(dim, rng), _random_form(dim, rng)
            assert not f.d().d()
            for k in range(dim + 1):
                assert f.d().pullback(k) == f.pullback(k).d()
                assert (f * g).pullback(k) == f.pullback(k) * g.pullback(k)


def test_wedge_is_graded_commutative():
    dt1, dt2 = SimplexForm.dt(2, 1), SimplexForm.dt(2, 2)
    assert dt1 * dt2 == -(dt2 * dt1)
    assert not dt1 * dt1


@pytest.mark.parametrize('dim', [1, 2, 3])
def test_top_whitney_form_integrates_to_one(dim):
    assert whitney_form(dim, tuple(range(dim + 1))).integrate() == QQ(1)


def test_simplex_integral():
    t1 = SimplexForm.t(2, 1)
    area = SimplexForm.dt(2, 1) * SimplexForm.dt(2, 2)
    assert area.integrate() == QQ(1, 2)
    assert (t1 * t1 * area).integrate() == QQ(2, 24)


def test_whitney_lift_is_compatible_and_integrates_back(end_e):
    rng = random.Random(1)
    for degree in (0, 1, 2):
        c = random_cochain(end_e, degree, rng)
        lift = whitney_lift(c)
        assert lift.check_compatibility()
        assert integrate(lift) == c


def test_tw_differential_squares_to_zero(end_e):
    rng = random.Random(2)
    for degree in (0, 1):
        x = whitney_lift(random_cochain(end_e, degree, rng))
        assert not tw_differential(tw_differential(x))


def test_incompatible_terms_are_rejected(end_e):
    rng = random.Random(3)
    c = random_cochain(end_e, 1, rng, level=0)
    while not c:
        c = random_cochain(end_e, 1, rng, level=0)
    with pytest.raises(CompatibilityError):
        TWElement.from_terms(end_e, [(0, SimplexForm.one(0), c)])


def test_lifted_cocycles_are_closed_and_keep_their_class(end_e):
    reps = cohomology_representatives(end_e.source, end_e.target, 1, pair=end_e)
    for i, z in enumerate(reps):
        lift = whitney_lift(z)
        assert is_closed(lift)
        assert tw_cohomology_class(lift, reps) == [1 if j == i else 0 for j in range(len(reps))]


def test_solve_primitive_on_exact_elements(end_e):
    rng = random.Random(4)
    for _ in range(3):
        b = random_cochain(end_e, 1, rng)
        target = tw_differential(whitney_lift(b))
        if not target:
            continue
        sol = solve_primitive(target)
        assert sol.exact
        assert tw_differential(sol.primitive) == target


def test_solve_primitive_reports_nonzero_classes(end_e):
    (z, *_) = cohomology_representatives(end_e.source, end_e.target, 2, pair=end_e)
    sol = solve_primitive(whitney_lift(z))
    assert not sol.exact
    assert sol.primitive is None
    assert sol.nonzero_weights


def test_solve_primitive_needs_a_closed_element(end_e):
    rng = random.Random(5)
    c = random_cochain(end_e, 1, rng, level=0)
    while not total_differential(c):
        c = random_cochain(end_e, 1, rng, level=0)
    with pytest.raises(ValueError):
        solve_primitive(whitney_lift(c))


@pytest.mark.parametrize('n', [3, 4])
def test_wall_point_bracket_identities(n):
    lifts = WallPointLifts(build_model('single', n))
    for i in range(1, n + 1):
        for j in (0, 1):
            assert tw_bracket(lifts.alpha(i), lifts.beta(j)) == lifts.gamma(i - j)
    assert tw_differential(lifts.mu()) == lifts.gamma(0)
    assert tw_differential(lifts.eta()) == lifts.gamma(n)


def test_wall_point_lifts_are_closed():
    lifts = WallPointLifts(build_model('single', 3))
    assert all(is_closed(x) for x in lifts.lifts())
    assert all(x.total_degree == 1 for x in lifts.lifts())
