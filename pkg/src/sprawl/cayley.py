"""Word-metric sprawl E_n on Cayley graphs of Z^d, free groups and lamplighters.

Spheres come from breadth-first layering.  Pair distances are exact word
lengths ``|x^-1 y|``; each group supplies the fastest exact method it has:

* Z^d: a lookup table of word lengths over the ball of radius 2n, filled by a
  grid BFS (translation invariance makes one table serve every source).
* free group, standard generators: ``d(x, y) = |x| + |y| - 2 lcp(x, y)``, so the
  all-pairs sum reduces to prefix counts.
* lamplighter with generators ``a^i t``: a closed-form word length (walk
  that covers the lit interval), vectorized over bitmask-encoded lamps.
* anything else: word lengths looked up in a BFS ball of radius 2n.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, MemoryBudgetExceeded
from .exact import Q

DEFAULT_MAX_ELEMENTS = 5_000_000


# -- groups ------------------------------------------------------------------

class ZdGroup:
    """Z^d with elements as integer tuples."""

    def __init__(self, d: int):
        if d < 1:
            raise InvalidInput("dimension must be positive")
        self.d = d

    def __repr__(self):
        return f"zd:{self.d}"

    def identity(self):
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def default_generators(self):
        out = []
        for i in range(self.d):
            e = tuple(1 if j == i else 0 for j in range(self.d))
            out += [e, self.inv(e)]
        return out


class FreeGroup:
    """Free group on ``k`` letters; elements are reduced words over ``+-1..+-k``."""

    def __init__(self, k: int):
        if k < 1:
            raise InvalidInput("rank must be positive")
        self.k = k

    def __repr__(self):
        return f"free:{self.k}"

    def identity(self):
        return ()

    def mul(self, a, b):
        i = 0
        while i < min(len(a), len(b)) and a[len(a) - 1 - i] == -b[i]:
            i += 1
        return a[: len(a) - i] + b[i:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def default_generators(self):
        return [(s * i,) for i in range(1, self.k + 1) for s in (1, -1)]


class Lamplighter:
    """Wreath product Z_m wr Z.

    An element ``(lamps, p)`` stores the finitely supported lamp function as a
    sorted tuple of ``(position, value)`` with nonzero values, and the lighter
    position ``p``.  Multiplication is ``(f, p)(g, q) = (f + g(. - p), p + q)``.
    """

    def __init__(self, m: int):
        if m < 2:
            raise InvalidInput("lamp group order must be at least 2")
        self.m = m

    def __repr__(self):
        return f"lamplighter:{self.m}"

    def identity(self):
        return ((), 0)

    def mul(self, a, b):
        (f, p), (g, q) = a, b
        lamps = dict(f)
        for z, v in g:
            w = (lamps.get(z + p, 0) + v) % self.m
            if w:
                lamps[z + p] = w
            else:
                lamps.pop(z + p, None)
        return tuple(sorted(lamps.items())), p + q

    def inv(self, a):
        f, p = a
        return tuple((z - p, (-v) % self.m) for z, v in f), -p

    def default_generators(self):
        """``a^i t`` for ``i = 0..m-1`` and their inverses.

        ``a^i t`` adds ``i`` to the lamp under the lighter, then steps right;
        its inverse steps left, then subtracts ``i`` there.  The Cayley graph
        is the Diestel-Leader graph DL(m, m).
        """
        forward = [(((0, i),) if i else (), 1) for i in range(self.m)]
        return forward + [self.inv(g) for g in forward]


def parse_group(text: str):
    """``zd:D``, ``free:K`` or ``lamplighter:M``."""
    try:
        kind, arg = text.split(":")
        arg = int(arg)
    except ValueError:
        raise InvalidInput(f"cannot parse group {text!r}") from None
    groups = {"zd": ZdGroup, "free": FreeGroup, "lamplighter": Lamplighter}
    if kind not in groups:
        raise InvalidInput(f"unknown group kind {kind!r}")
    return groups[kind](arg)


def _check_symmetric(group, generators):
    gens = list(dict.fromkeys(generators))
    if group.identity() in gens:
        raise InvalidInput("the identity is not a generator")
    missing = [g for g in gens if group.inv(g) not in gens]
    if missing:
        raise InvalidInput(f"generating set is not symmetric: missing inverses of {missing}")
    return gens


# -- spheres -----------------------------------------------------------------

@dataclass(frozen=True)
class CayleySphere:
    radius: int
    elements: tuple

    @property
    def size(self) -> int:
        return len(self.elements)


def bfs_spheres(group, generators, n_max: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> list:
    """Spheres S_0..S_{n_max} in discovery order."""
    if n_max < 0:
        raise InvalidInput("radius must be non-negative")
    gens = _check_symmetric(group, generators)
    e = group.identity()
    spheres = [CayleySphere(0, (e,))]
    previous, current = set(), {e}
    total = 1
    for r in range(1, n_max + 1):
        layer, seen = [], set()
        for x in spheres[-1].elements:
            for g in gens:
                y = group.mul(x, g)
                if y not in current and y not in previous and y not in seen:
                    seen.add(y)
                    layer.append(y)
        total += len(layer)
        if total > max_elements:
            raise MemoryBudgetExceeded(
                f"ball of radius {r} exceeds {max_elements} elements", completed_radius=r - 1
            )
        spheres.append(CayleySphere(r, tuple(layer)))
        previous, current = current, seen
    return spheres


def growth(spheres) -> list:
    """Ball sizes beta(n) = sum of |S_k| for k <= n."""
    return list(itertools.accumulate(s.size for s in spheres))


def word_lengths(group, generators, radius: int, max_elements: int = DEFAULT_MAX_ELEMENTS) -> dict:
    return {x: s.radius for s in bfs_spheres(group, generators, radius, max_elements) for x in s.elements}


# -- distance oracles ----------------------------------------------------------
#
# Each oracle answers two questions about one sphere: the exact sum of
# d(x, y) over all ordered pairs, and d for a batch of index pairs.

ROW_CHUNK_CELLS = 1 << 22


def _row_chunks(n_rows, n_cols):
    step = max(1, ROW_CHUNK_CELLS // max(1, n_cols))
    return [(i, min(n_rows, i + step)) for i in range(0, n_rows, step)]


def _parallel_sum(fn, chunks, threads):
    if threads <= 1 or len(chunks) == 1:
        return sum(fn(c) for c in chunks)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(fn, chunks))


class _BallOracle:
    def __init__(self, group, generators, elements, n, max_elements):
        self.group = group
        self.elements = elements
        self.lengths = word_lengths(group, generators, 2 * n, max_elements)

    def _d(self, x, y):
        return self.lengths[self.group.mul(self.group.inv(x), y)]

    def total(self, threads=1):
        els = self.elements
        return sum(self._d(x, y) for x in els for y in els)

    def distances(self, xi, yi):
        els = self.elements
        return np.array([self._d(els[i], els[j]) for i, j in zip(xi, yi)], dtype=np.int64)


class _ZdOracle:
    def __init__(self, generators, elements, n):
        gens = np.array(generators, dtype=np.int64)
        self.d = gens.shape[1]
        radius = 2 * n
        self.half = radius * int(np.abs(gens).max())
        self.table = _grid_word_lengths(gens, radius, self.half)
        self.points = np.array(elements, dtype=np.int64).reshape(len(elements), self.d)

    def _lookup(self, diff):
        idx = tuple(diff[..., k] + self.half for k in range(self.d))
        return self.table[idx]

    def total(self, threads=1):
        pts = self.points

        def chunk(bounds):
            a, b = bounds
            return int(self._lookup(pts[None, :, :] - pts[a:b, None, :]).sum(dtype=np.int64))

        return _parallel_sum(chunk, _row_chunks(len(pts), len(pts)), threads)

    def distances(self, xi, yi):
        return self._lookup(self.points[yi] - self.points[xi]).astype(np.int64)


def _grid_word_lengths(gens: np.ndarray, radius: int, half: int) -> np.ndarray:
    """Word lengths on the box ``[-half, half]^d``; -1 beyond ``radius``."""
    d = gens.shape[1]
    shape = (2 * half + 1,) * d
    dist = np.full(shape, -1, dtype=np.int32)
    frontier = np.zeros(shape, dtype=bool)
    origin = (half,) * d
    frontier[origin] = True
    dist[origin] = 0
    for step in range(1, radius + 1):
        reached = np.zeros(shape, dtype=bool)
        for g in gens:
            dst = tuple(slice(max(0, int(c)), shape[0] + min(0, int(c))) for c in g)
            src = tuple(slice(max(0, -int(c)), shape[0] - max(0, int(c))) for c in g)
            reached[dst] |= frontier[src]
        reached &= dist < 0
        dist[reached] = step
        frontier = reached
    return dist


class _FreeOracle:
    """Standard generators only: the Cayley graph is a tree."""

    def __init__(self, elements, n):
        self.elements = elements
        self.n = n

    def total(self, threads=1):
        # sum over ordered pairs of 2n - 2 lcp; sum of lcp = sum over prefixes of count^2.
        els = self.elements
        lcp_sum = 0
        for j in range(1, self.n + 1):
            lcp_sum += sum(c * c for c in Counter(x[:j] for x in els).values())
        return 2 * self.n * len(els) ** 2 - 2 * lcp_sum

    def distances(self, xi, yi):
        out = np.empty(len(xi), dtype=np.int64)
        for k, (i, j) in enumerate(zip(xi, yi)):
            x, y = self.elements[i], self.elements[j]
            common = 0
            while common < len(x) and common < len(y) and x[common] == y[common]:
                common += 1
            out[k] = len(x) + len(y) - 2 * common
        return out


class _LamplighterOracle:
    """Generators ``a^i t`` and inverses.

    The word length of ``(h, k)`` is the shortest walk of the lighter from 0 to
    ``k`` that crosses every edge ``[z, z+1]`` with ``z`` in the support of
    ``h`` (a crossing can set lamp ``z`` to anything).  With the support
    spanning edges ``[L, R)`` that is ``(R - L) + min(|L| + |k - R|, |R| + |k - L|)``,
    or ``|k|`` when no lamp is lit.
    """

    def __init__(self, m, elements, n):
        if 2 * n > 62:
            raise InvalidInput("lamplighter fast path supports radius <= 31")
        self.offset = n
        planes = max(1, (m - 1).bit_length())
        masks = np.zeros((planes, len(elements)), dtype=np.int64)
        pos = np.empty(len(elements), dtype=np.int64)
        for e, (lamps, p) in enumerate(elements):
            pos[e] = p
            for z, v in lamps:
                for b in range(planes):
                    if v >> b & 1:
                        masks[b, e] |= 1 << (z + n)
        self.masks = masks
        self.pos = pos

    def _length(self, diff, px, py):
        k = py - px
        nonzero = diff != 0
        safe = np.where(nonzero, diff, 1)
        low = np.frexp((safe & -safe).astype(np.float64))[1] - 1
        high = np.frexp(safe.astype(np.float64))[1]
        lo = low - self.offset - px
        hi = high - self.offset - px
        walk = (hi - lo) + np.minimum(np.abs(lo) + np.abs(k - hi), np.abs(hi) + np.abs(k - lo))
        return np.where(nonzero, walk, np.abs(k))

    def _diff(self, rows, cols):
        out = None
        for plane in self.masks:
            x = plane[rows] ^ plane[cols]
            out = x if out is None else out | x
        return out

    def total(self, threads=1):
        n_el = self.pos.size
        cols = np.arange(n_el)

        def chunk(bounds):
            a, b = bounds
            rows = np.arange(a, b)[:, None]
            diff = self._diff(rows, cols[None, :])
            return int(self._length(diff, self.pos[rows], self.pos[None, :]).sum(dtype=np.int64))

        return _parallel_sum(chunk, _row_chunks(n_el, n_el), threads)

    def distances(self, xi, yi):
        xi, yi = np.asarray(xi), np.asarray(yi)
        return self._length(self._diff(xi, yi), self.pos[xi], self.pos[yi]).astype(np.int64)


def _same_set(a, b):
    return len(a) == len(b) and set(a) == set(b)


def distance_oracle(group, generators, sphere: CayleySphere, max_elements=DEFAULT_MAX_ELEMENTS,
                    fast: bool = True):
    els, n = sphere.elements, sphere.radius
    if fast and isinstance(group, ZdGroup):
        return _ZdOracle(generators, els, n)
    if fast and isinstance(group, FreeGroup) and _same_set(generators, group.default_generators()):
        return _FreeOracle(els, n)
    if fast and isinstance(group, Lamplighter) and _same_set(generators, group.default_generators()):
        return _LamplighterOracle(group.m, els, n)
    return _BallOracle(group, generators, els, n, max_elements)


# -- empirical sprawl --------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalSprawl:
    """E_n for each computed radius.

    In exact mode ``values`` are exact rationals (sum over all |S_n|^2 ordered
    pairs of d(x, y) / n) and ``stderrs`` are zero.  In sample mode ``values``
    are floats from ``pairs`` uniformly drawn ordered pairs.
    """

    group: str
    mode: str
    radii: tuple
    sizes: tuple
    values: tuple
    stderrs: tuple
    pairs: int | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def value_at(self, n):
        return self.values[self.radii.index(n)]


def parse_pair_mode(text: str):
    """``exact`` or ``sample:K``; returns ``("exact", None)`` or ``("sample", K)``."""
    if text == "exact":
        return "exact", None
    if text.startswith("sample:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise InvalidInput(f"bad pair mode {text!r}") from None
        if k < 2:
            raise InvalidInput("need at least 2 sampled pairs")
        return "sample", k
    raise InvalidInput(f"pair mode must be 'exact' or 'sample:K', got {text!r}")


def _radius_value(oracle, sphere, mode, pairs, seed, threads):
    n, size = sphere.radius, sphere.size
    if mode == "exact":
        return Q(oracle.total(threads), size * size * n), 0.0
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(n,))))
    xi = rng.integers(0, size, pairs)
    yi = rng.integers(0, size, pairs)
    d = oracle.distances(xi, yi) / n
    return float(d.mean()), float(d.std(ddof=1) / math.sqrt(pairs))


def empirical_sprawl(group, generators=None, n: int = 1, pairs: str | tuple = "exact",
                     seed: int | None = None, radii=None, threads: int = 1,
                     max_elements: int = DEFAULT_MAX_ELEMENTS, fast: bool = True) -> EmpiricalSprawl:
    """E_k of ``(group, generators)`` for each ``k`` in ``radii`` (default ``1..n``)."""
    if n < 1:
        raise InvalidInput("radius must be at least 1")
    generators = group.default_generators() if generators is None else list(generators)
    mode, count = parse_pair_mode(pairs) if isinstance(pairs, str) else pairs
    if mode == "sample" and seed is None:
        raise InvalidInput("sampled pairs need a seed")
    radii = tuple(range(1, n + 1)) if radii is None else tuple(sorted(set(radii)))
    if not radii or radii[0] < 1 or radii[-1] > n:
        raise InvalidInput("radii must lie in 1..n")
    spheres = bfs_spheres(group, generators, n, max_elements)
    values, errs = [], []
    for r in radii:
        oracle = distance_oracle(group, generators, spheres[r], max_elements, fast)
        v, s = _radius_value(oracle, spheres[r], mode, count, seed, threads)
        values.append(v)
        errs.append(s)
    return EmpiricalSprawl(repr(group), mode, radii, tuple(spheres[r].size for r in radii),
                           tuple(values), tuple(errs), count, seed)


def lamplighter_sprawl(m: int, generators=None, n: int = 1, pair_budget: int = 10**9,
                       seed: int = 0, radii=None, threads: int = 1,
                       max_elements: int = DEFAULT_MAX_ELEMENTS) -> EmpiricalSprawl:
    """E_k on the lamplighter Z_m wr Z, exact while |S_k|^2 fits in ``pair_budget``.

    Radii whose sphere is too large fall back to ``pair_budget`` sampled pairs.
    """
    group = Lamplighter(m)
    generators = group.default_generators() if generators is None else list(generators)
    radii = tuple(range(1, n + 1)) if radii is None else tuple(sorted(set(radii)))
    spheres = bfs_spheres(group, generators, n, max_elements)
    values, errs, modes = [], [], []
    for r in radii:
        sphere = spheres[r]
        mode = "exact" if sphere.size ** 2 <= pair_budget else "sample"
        oracle = distance_oracle(group, generators, sphere, max_elements)
        v, s = _radius_value(oracle, sphere, mode, pair_budget, seed, threads)
        values.append(v)
        errs.append(s)
        modes.append(mode)
    mode = modes[0] if len(set(modes)) == 1 else "mixed"
    return EmpiricalSprawl(repr(group), mode, radii, tuple(spheres[r].size for r in radii),
                           tuple(values), tuple(errs), pair_budget, seed, {"modes": tuple(modes)})
