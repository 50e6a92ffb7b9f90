"""Cone-measure Monte Carlo estimates of sprawl and of the solid average distance.

Work is cut into fixed-size chunks.  Chunk ``k`` draws from its own generator
seeded by ``SeedSequence(seed, spawn_key=(k,))`` and reports
``(count, mean, M2)``; the chunk summaries are merged by a fixed pairwise tree
in chunk order.  The result therefore depends only on ``(shape, samples,
seed)``, never on how many threads ran the chunks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .exact import det
from .geometry import Perimeter, as_perimeter

CHUNK = 1 << 16


@dataclass(frozen=True)
class SprawlEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    shape: str = ""

    def within(self, value, k: float = 3.0) -> bool:
        return abs(self.mean - float(value)) <= k * self.stderr


def default_threads() -> int:
    env = os.environ.get("SPRAWL_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InvalidInput(f"SPRAWL_THREADS must be an integer, got {env!r}") from None
        if n >= 1:
            return n
    return os.cpu_count() or 1


class FacetSampler:
    """Float tables for drawing points of a perimeter by cone measure.

    A point is drawn by picking a facet with probability equal to its cone
    weight, a simplex of that facet with probability proportional to its
    volume, and a uniform point of the simplex from sorted-uniform
    barycentric coordinates.
    """

    def __init__(self, L: Perimeter):
        L = as_perimeter(L)
        self.dimension = L.dimension
        self.vertices = np.array([[float(c) for c in v] for v in L.vertices])
        self.functionals = np.array([[float(c) for c in a] for a in L.functionals])
        self.facet_weights = np.array([float(w) for w in L.weights])

        simplex_index, facet_of, probs = [], [], []
        d = L.dimension
        for i, simps in enumerate(L.simplices):
            # Every simplex of a facet has the same height over the origin, so
            # its share of the facet's (d-1)-volume equals its share of the cone volume.
            cones = [abs(det([L.vertices[k] for k in s])) for s in simps]
            facet_total = sum(cones)
            for s, c in zip(simps, cones):
                simplex_index.append(s)
                facet_of.append(i)
                probs.append(L.weights[i] * c / facet_total)
        self.simplex_vertices = self.vertices[np.array(simplex_index)]  # (k, d, d)
        self.facet_of_simplex = np.array(facet_of)
        p = np.array([float(x) for x in probs])
        self.simplex_probs = p / p.sum()
        self._cdf = np.cumsum(self.simplex_probs)
        self._cdf[-1] = 1.0
        self._d = d

    def draw(self, rng: np.random.Generator, count: int, with_facets: bool = False):
        """``count`` points on the perimeter as a ``(count, d)`` array."""
        d = self._d
        s = np.searchsorted(self._cdf, rng.random(count), side="right")
        s = np.minimum(s, len(self._cdf) - 1)
        if d == 1:
            lam = np.ones((count, 1))
        else:
            u = np.sort(rng.random((count, d - 1)), axis=1)
            lam = np.diff(u, axis=1, prepend=0.0, append=1.0)
        pts = np.einsum("nk,nkd->nd", lam, self.simplex_vertices[s])
        if with_facets:
            return pts, self.facet_of_simplex[s]
        return pts

    def norm(self, x: np.ndarray) -> np.ndarray:
        return np.max(x @ self.functionals.T, axis=-1)


def sample_cone(L, rng: np.random.Generator, count: int = 1) -> np.ndarray:
    """Points of ``L`` distributed by cone measure."""
    sampler = L if isinstance(L, FacetSampler) else FacetSampler(L)
    return sampler.draw(rng, count)


# -- chunked, order-independent reduction ------------------------------------

def _chunk_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))


def _summary(values: np.ndarray):
    n = values.size
    mean = float(values.mean())
    m2 = float(((values - mean) ** 2).sum())
    return n, mean, m2


def _merge(a, b):
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, qa + qb + delta * delta * na * nb / n


def _tree_merge(parts):
    while len(parts) > 1:
        nxt = [_merge(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def _check(samples: int, seed: int):
    if samples < 2:
        raise InvalidInput("need at least 2 samples")
    if not 0 <= seed < 2**64:
        raise InvalidInput("seed must be an unsigned 64-bit integer")


def _run(kernel, samples: int, seed: int, threads: int | None, chunk: int, shape: str):
    _check(samples, seed)
    sizes = [chunk] * (samples // chunk)
    if samples % chunk:
        sizes.append(samples % chunk)

    def job(k):
        return _summary(kernel(_chunk_rng(seed, k), sizes[k]))

    threads = threads or default_threads()
    if threads == 1 or len(sizes) == 1:
        parts = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    n, mean, m2 = _tree_merge(parts)
    std = math.sqrt(m2 / (n - 1))
    return SprawlEstimate(mean, std / math.sqrt(n), n, seed, shape)


def sprawl_mc(L, samples: int, seed: int, threads: int | None = None, shape: str = "") -> SprawlEstimate:
    """Mean ``||x - y||_L`` over independent cone-measure pairs on ``L``."""
    sampler = L if isinstance(L, FacetSampler) else FacetSampler(L)

    def kernel(rng, n):
        x = sampler.draw(rng, n)
        y = sampler.draw(rng, n)
        return sampler.norm(x - y)

    return _run(kernel, samples, seed, threads, CHUNK, shape)


def _sphere_points(rng, n, d):
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _chunk_for(d: int) -> int:
    # Keep each chunk's Gaussian block near 4 MB in high dimension.
    return CHUNK if d <= 8 else 1 << 13


def sprawl_mc_sphere(d: int, samples: int, seed: int, threads: int | None = None) -> SprawlEstimate:
    """Mean Euclidean distance between independent uniform points of the unit sphere in R^d."""
    if d < 2:
        raise InvalidInput("sphere dimension must be at least 2")

    def kernel(rng, n):
        return np.linalg.norm(_sphere_points(rng, n, d) - _sphere_points(rng, n, d), axis=1)

    return _run(kernel, samples, seed, threads, _chunk_for(d), f"sphere:{d}")


def average_distance_volume(L, samples: int, seed: int, threads: int | None = None,
                            shape: str = "") -> SprawlEstimate:
    """Mean ``||x - y||_L`` over independent uniform points of the solid body bounded by ``L``.

    A uniform point of the body is ``u^(1/d) * b`` with ``b`` drawn by cone
    measure and ``u`` uniform on [0, 1].
    """
    sampler = L if isinstance(L, FacetSampler) else FacetSampler(L)
    d = sampler.dimension

    def kernel(rng, n):
        x = sampler.draw(rng, n) * rng.random((n, 1)) ** (1.0 / d)
        y = sampler.draw(rng, n) * rng.random((n, 1)) ** (1.0 / d)
        return sampler.norm(x - y)

    return _run(kernel, samples, seed, threads, CHUNK, shape)


def average_distance_ball(d: int, samples: int, seed: int, threads: int | None = None) -> SprawlEstimate:
    """Mean Euclidean distance between independent uniform points of the unit ball in R^d."""
    if d < 1:
        raise InvalidInput("dimension must be positive")

    def kernel(rng, n):
        x = _sphere_points(rng, n, d) * rng.random((n, 1)) ** (1.0 / d)
        y = _sphere_points(rng, n, d) * rng.random((n, 1)) ** (1.0 / d)
        return np.linalg.norm(x - y, axis=1)

    return _run(kernel, samples, seed, threads, _chunk_for(d), f"ball:{d}")
