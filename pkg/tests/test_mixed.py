"""Polarization and the epsilon-derivative route.

Hand oracle for the plane: the mixed volume of the unit square with the
unit diamond is 2 (half the support-weighted edge sum).  Everything
else is pinned by the polarization axioms (diagonal recovery, symmetry,
Minkowski multilinearity) and by cross-route agreement with the
illuminated-facet sums.
"""

import numpy as np
import pytest

from valuation_lab.mixed import (
    BASE_FUNCTIONALS,
    PolarizationRequest,
    directional_derivative_field,
    directional_derivative_moment,
    mixed_moment_with_ball,
    mixed_projected_moment,
    polarize,
    polarize_request,
    subset_sums,
    upsilon_mixed,
)
from valuation_lab.polytope import (
    cross_polytope,
    cube,
    minkowski_sum,
    project,
    random_hull,
    random_translated_hull,
)
from valuation_lab.quadrature import directions
from valuation_lab.valuations import q1, shadow_functional, upsilon

volume = lambda body: body.volume


def test_subset_sums_enumerates_every_nonempty_subset():
    bodies = [cube(2), cross_polytope(2), random_hull(2, seed=1)]
    sums = subset_sums(bodies)
    assert set(sums) == {frozenset(s) for s in
                         [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]}
    pair = sums[frozenset((0, 1))]
    direct = minkowski_sum(bodies[0], bodies[1])
    assert pair.volume == pytest.approx(direct.volume, rel=1e-12)


def test_polarize_diagonal_recovers_the_valuation():
    for body in (cube(3), random_translated_hull(3, seed=2)):
        got = polarize(volume, [body] * 3, degree=3)
        assert got == pytest.approx(body.volume, rel=1e-11)
        got_q1 = polarize(q1, [body] * 3, degree=3)
        assert np.allclose(got_q1, q1(body), rtol=1e-10)


def test_mixed_volume_square_diamond_hand_value():
    square = cube(2)
    diamond = cross_polytope(2)
    assert polarize(volume, [square, diamond], degree=2) == \
        pytest.approx(2.0, rel=1e-12)


def test_polarize_is_symmetric():
    a = cube(3)
    b = random_hull(3, seed=5)
    c = cross_polytope(3)
    ref = polarize(volume, [a, b, c], degree=3)
    assert polarize(volume, [c, a, b], degree=3) == pytest.approx(
        ref, rel=1e-11)
    assert polarize(volume, [b, c, a], degree=3) == pytest.approx(
        ref, rel=1e-11)


def test_polarize_is_multilinear():
    a = cube(2)
    b = cross_polytope(2)
    c = random_hull(2, seed=9)
    lhs = polarize(volume, [minkowski_sum(a, b), c], degree=2)
    rhs = (polarize(volume, [a, c], degree=2)
           + polarize(volume, [b, c], degree=2))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_polarize_arity_check():
    with pytest.raises(ValueError):
        polarize(volume, [cube(3)] * 2, degree=3)
    with pytest.raises(ValueError):
        subset_sums([])
    with pytest.raises(ValueError):
        subset_sums([cube(2), cube(3)])


def test_polarize_request_validation():
    assert BASE_FUNCTIONALS == ("q1", "upsilon1", "moment_z", "shadow_area")
    bodies = (cube(3), cube(3), cube(3))
    with pytest.raises(ValueError):
        polarize_request(PolarizationRequest(
            bodies=bodies, base_functional="volume", degree=3))
    with pytest.raises(ValueError):
        # moment_z is degree n+1, not n
        polarize_request(PolarizationRequest(
            bodies=bodies, base_functional="moment_z", degree=3))
    with pytest.raises(ValueError):
        polarize_request(PolarizationRequest(
            bodies=(cube(3), cube(3)), base_functional="shadow_area",
            degree=2))   # missing direction


def test_polarize_request_diagonals():
    body = cube(3)
    got = polarize_request(PolarizationRequest(
        bodies=(body,) * 3, base_functional="q1", degree=3))
    assert np.allclose(got, q1(body), rtol=1e-11)
    got = polarize_request(PolarizationRequest(
        bodies=(body,) * 3, base_functional="upsilon1", degree=3))
    assert np.allclose(got, upsilon(body, 1).vector(), rtol=1e-10,
                       atol=1e-12)
    got = polarize_request(PolarizationRequest(
        bodies=(body,) * 4, base_functional="moment_z", degree=4))
    assert np.allclose(got, body.moment_vector, rtol=1e-10)
    u = np.array([0.0, 0.0, 1.0])
    got = polarize_request(PolarizationRequest(
        bodies=(body,) * 2, base_functional="shadow_area", degree=2,
        direction=u))
    assert got == pytest.approx(project(body, u).shadow.volume, rel=1e-11)


def test_mixed_moment_with_ball_diagonal():
    body = cube(3)
    got = mixed_moment_with_ball([body] * 3)
    assert np.allclose(got, 0.75 * q1(body), rtol=1e-11)
    got_u = upsilon_mixed([body] * 3)
    assert np.allclose(got_u, upsilon(body, 1).vector(), rtol=1e-10,
                       atol=1e-12)


def test_mixed_projected_moment_diagonal_and_direction_check():
    body = random_translated_hull(3, seed=14)
    u = np.array([1.0, -2.0, 0.5])
    u /= np.linalg.norm(u)
    projections = [project(body, u)] * 3
    got = mixed_projected_moment(projections)
    assert np.allclose(got, project(body, u).moment_ambient, rtol=1e-10)
    other = project(body, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError):
        mixed_projected_moment([projections[0], projections[1], other])
    with pytest.raises(ValueError):
        mixed_projected_moment(projections[:2])   # needs n of them


def test_derivative_of_volume_is_shadow_area():
    body = random_translated_hull(3, seed=3)
    for u in directions(3, seed=8, count=6):
        got = directional_derivative_field(body, u, "1").scalar()
        want = shadow_functional(body, u, "1").scalar()
        assert got == pytest.approx(want, rel=1e-9), u


def test_derivative_of_moment_matches_lit_boundary():
    body = cube(3)
    e3 = np.array([0.0, 0.0, 1.0])
    got = directional_derivative_moment(body, e3)
    assert np.allclose(got, [0.5, 0.5, 1.0], atol=1e-10)
    rnd = random_translated_hull(3, seed=6)
    for u in directions(3, seed=9, count=4):
        want = shadow_functional(rnd, u, "x").vector()
        assert np.allclose(directional_derivative_moment(rnd, u), want,
                           rtol=1e-8, atol=1e-10)


def test_derivative_of_second_moment_field():
    body = random_translated_hull(3, seed=7)
    u = directions(3, seed=10, count=2)[0]
    got = directional_derivative_field(body, u, "x2").matrix()
    want = shadow_functional(body, u, "x2").matrix()
    assert np.allclose(got, want, rtol=1e-8, atol=1e-9)


def test_derivative_direction_validation():
    body = cube(3)
    with pytest.raises(ValueError):
        directional_derivative_moment(body, np.array([0.0, 0.0, 2.0]))
    with pytest.raises(ValueError):
        directional_derivative_field(body, np.array([0.0, 0.0, 1.0]), "x3")
