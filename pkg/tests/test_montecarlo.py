import math

import numpy as np
import pytest

from oracles import square_volume_average_distance
from sprawl.closed_forms import sphere_formula
from sprawl.cutline import sprawl_exact
from sprawl.errors import InvalidInput
from sprawl.exact import Q, to_mpf
from sprawl.geometry import apply_linear, cube, hexagon, knight_octagon, orthoplex
from sprawl.montecarlo import (
    CHUNK,
    FacetSampler,
    average_distance_ball,
    average_distance_volume,
    sample_cone,
    sprawl_mc,
    sprawl_mc_sphere,
)


def test_samples_lie_on_the_perimeter():
    for L in (cube(2), knight_octagon(), cube(3), orthoplex(4)):
        s = FacetSampler(L)
        pts = s.draw(np.random.default_rng(1), 20_000)
        assert np.max(np.abs(s.norm(pts) - 1)) <= 1e-12


def test_square_side_frequencies():
    s = FacetSampler(cube(2))
    n = 10**6
    _, f = s.draw(np.random.default_rng(2), n, with_facets=True)
    freq = np.bincount(f, minlength=4) / n
    sigma = math.sqrt(0.25 * 0.75 / n)
    assert np.all(np.abs(freq - 0.25) < 4 * sigma)


def test_knight_octagon_side_classes_four_to_three():
    L = knight_octagon()
    s = FacetSampler(L)
    n = 10**6
    _, f = s.draw(np.random.default_rng(3), n, with_facets=True)
    heavy = np.isin(f, [i for i, w in enumerate(L.weights) if w == Q(1, 7)]).mean()
    # heavy sides carry 4/7 of the mass, light sides 3/7
    assert abs(heavy - 4 / 7) < 4 * math.sqrt((4 / 7) * (3 / 7) / n)


def test_simplex_selection_is_uniform_on_a_facet():
    # Cube facets are split into two triangles; each should get half the facet's samples.
    s = FacetSampler(cube(3))
    assert math.isclose(s.simplex_probs.sum(), 1.0)
    for i, w in enumerate(s.facet_weights):
        assert math.isclose(s.simplex_probs[s.facet_of_simplex == i].sum(), w)


def test_seed_determinism_and_thread_independence():
    L = knight_octagon()
    n = 3 * CHUNK + 17
    a = sprawl_mc(L, n, 42, threads=1)
    b = sprawl_mc(L, n, 42, threads=4)
    c = sprawl_mc(L, n, 43, threads=1)
    assert (a.mean, a.stderr) == (b.mean, b.stderr)
    assert a.mean != c.mean
    assert a.samples == n and a.seed == 42


def test_stderr_definition_single_chunk():
    L = cube(2)
    est = sprawl_mc(L, 1000, 5)
    # Redraw the same chunk by hand and recompute.
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(5, spawn_key=(0,))))
    s = FacetSampler(L)
    x, y = s.draw(rng, 1000), s.draw(rng, 1000)
    d = s.norm(x - y)
    assert math.isclose(est.mean, d.mean(), rel_tol=1e-14)
    assert math.isclose(est.stderr, d.std(ddof=1) / math.sqrt(1000), rel_tol=1e-12)


@pytest.mark.parametrize("L, target", [
    (cube(2), 4 / 3), (cube(3), 64 / 45), (orthoplex(4), 10 / 7),
], ids=["square", "cube3", "orthoplex4"])
def test_polytope_estimates(L, target):
    est = sprawl_mc(L, 10**6, 2024)
    assert abs(est.mean - target) <= 3 * est.stderr


@pytest.mark.parametrize("d, samples", [(2, 10**6), (3, 10**6), (100, 10**5)])
def test_sphere_estimates(d, samples):
    target = float(to_mpf(sphere_formula(d)))
    est = sprawl_mc_sphere(d, samples, 99)
    assert abs(est.mean - target) <= 3 * est.stderr


def test_linear_invariance_statistically():
    L = knight_octagon()
    a = sprawl_mc(L, 200_000, 8)
    b = sprawl_mc(apply_linear(L, [[2, 1], [1, 1]]), 200_000, 9)
    assert abs(a.mean - b.mean) <= 4 * math.hypot(a.stderr, b.stderr)


def test_volume_average_distance():
    oracle = square_volume_average_distance()
    assert abs(oracle - 14 / 15) < 1e-4
    sq = average_distance_volume(cube(2), 10**6, 17)
    assert abs(sq.mean - oracle) <= 3 * sq.stderr
    disk = average_distance_ball(2, 10**6, 17)
    assert disk.mean + 3 * disk.stderr < sq.mean - 3 * sq.stderr
    # Interior pairs are closer than boundary pairs.
    for L in (cube(2), hexagon(Q(3, 2), Q(1, 4))):
        ad = average_distance_volume(L, 200_000, 4)
        assert ad.mean + 4 * ad.stderr < float(sprawl_exact(L).value)


def test_sample_cone_helper_and_errors():
    pts = sample_cone(cube(2), np.random.default_rng(0), 5)
    assert pts.shape == (5, 2)
    with pytest.raises(InvalidInput):
        sprawl_mc(cube(2), 1, 0)
    with pytest.raises(InvalidInput):
        sprawl_mc(cube(2), 10, -1)
    with pytest.raises(InvalidInput):
        sprawl_mc_sphere(1, 10, 0)
