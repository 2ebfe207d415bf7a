"""Convex extension of lattice functions, greedy evaluation, chains, and the
tight separable lower bound.

A lattice function f extends from prod_i {0..k_i-1} to products of
distributions over levels.  A distribution over coordinate i's levels is
encoded by its reverse-cumulative weights rho_i(j) = P(X_i >= j) for
j = 1..k_i-1, so each rho_i is a non-increasing vector in [0,1].  The
extension is

    ext(p) = integral_0^1 f(level(p_1, t), ..., level(p_n, t)) dt,

and is evaluated exactly by a greedy pass: sort all entries of the profile in
decreasing order (ties: levels of one coordinate keep increasing-level
order, across coordinates ascending index), walk the induced increasing
chain from 0, and weight each marginal gain by its profile entry.

A *chain* is a maximal increasing lattice path 0 = p_0 < ... < p_r = k_max
raising one coordinate by one level per step (r = sum_i (k_i - 1)).  It
"contains" y when p at index sum(y) equals y.  Taking marginal gains of f
along a chain containing y yields a separable function that equals f on
every chain point and, when f is submodular, lower-bounds f everywhere.
"""

from __future__ import annotations

import random
from typing import List, Optional

import numpy as np

from .lattice import (
    CHECK_TOL,
    LatticeDomain,
    OracleFunction,
    SeparableFunction,
    Verdict,
    Witness,
)

PROFILE_TOL = 1e-9


class Profile:
    """Per-coordinate non-increasing level weights in [0, 1].

    ``levels[i][j-1]`` is the weight of level j of coordinate i
    (j = 1..k_i-1).  Entry order within a coordinate is non-increasing.
    """

    def __init__(self, domain: LatticeDomain, levels, validate: bool = True):
        self.domain = domain
        self.levels = [np.asarray(v, dtype=float).reshape(-1) for v in levels]
        if len(self.levels) != domain.n:
            raise ValueError(f"need {domain.n} level vectors, got {len(self.levels)}")
        for i, v in enumerate(self.levels):
            if v.size != domain.sizes[i] - 1:
                raise ValueError(
                    f"levels[{i}]: expected {domain.sizes[i] - 1} entries, got {v.size}"
                )
        if validate:
            for i, v in enumerate(self.levels):
                if v.size and (v.min() < -PROFILE_TOL or v.max() > 1 + PROFILE_TOL):
                    raise ValueError(f"levels[{i}] leave [0, 1]: {v}")
                if np.any(np.diff(v) > PROFILE_TOL):
                    raise ValueError(f"levels[{i}] not non-increasing: {v}")

    @classmethod
    def constant(cls, domain: LatticeDomain, value: float):
        return cls(domain, [np.full(k - 1, float(value)) for k in domain.sizes])

    def entry_count(self) -> int:
        return sum(v.size for v in self.levels)

    def point_at(self, t: float) -> tuple:
        return tuple(level_at(v, t) for v in self.levels)

    def breakpoints(self) -> np.ndarray:
        """Distinct entry values in (0, 1], plus 1.0, ascending."""
        vals = np.concatenate(self.levels + [np.ones(1)])
        vals = np.unique(vals)
        return vals[vals > 0.0]

    def copy(self):
        return Profile(self.domain, [v.copy() for v in self.levels], validate=False)

    def __repr__(self):
        return f"Profile({[np.round(v, 4).tolist() for v in self.levels]})"


def profile_from_point(domain: LatticeDomain, y) -> Profile:
    """Indicator profile of a lattice point: weight 1 on levels <= y_i, else 0."""
    y = domain.require(y)
    levels = []
    for i, k in enumerate(domain.sizes):
        v = np.zeros(k - 1)
        v[: y[i]] = 1.0
        levels.append(v)
    return Profile(domain, levels, validate=False)


def level_at(level_weights, t: float) -> int:
    """Map a threshold t in (0, 1] to a level.

    Returns the highest level j with t <= weight(j); intervals are
    right-closed, so a tie at t picks the deeper level.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {t}")
    v = np.asarray(level_weights, dtype=float)
    return int(np.count_nonzero(v >= t))


def greedy_extension(f: OracleFunction, profile: Profile):
    """Evaluate the extension of f at ``profile`` by the greedy chain walk.

    Sorts all entries of ``profile`` in decreasing order.  Ties within one
    coordinate keep increasing-level order (required for the walk to be a
    lattice chain); ties across coordinates break by ascending coordinate
    index so results are reproducible.  Walks y(s) = y(s-1) + e_{i(s)} from
    0 and accumulates t(s) * (f(y(s)) - f(y(s-1))).

    Parameters
    ----------
    f : OracleFunction
    profile : Profile
        Must match f's domain.  Exactly r + 1 oracle calls are made,
        where r is the total entry count.

    Returns
    -------
    (value, weights) : (float, SeparableFunction)
        The extension value and the greedy marginal gains as a separable
        function with constant f(0).  ``value`` equals
        weights.constant + <weights, profile>.
    """
    d = f.domain
    if profile.domain != d:
        raise ValueError("profile domain does not match the function domain")
    for i, v in enumerate(profile.levels):
        if np.any(np.diff(v) > PROFILE_TOL):
            raise ValueError(f"profile coordinate {i} is not non-increasing: {v}")

    entries = []
    for i, v in enumerate(profile.levels):
        for j in range(1, v.size + 1):
            entries.append((v[j - 1], i, j))
    entries.sort(key=lambda e: (-e[0], e[1], e[2]))

    y = list(d.zero)
    f0 = f(tuple(y))
    prev = f0
    value = f0
    tables = [np.zeros(k - 1) for k in d.sizes]
    for t, i, j in entries:
        y[i] += 1
        cur = f(tuple(y))
        gain = cur - prev
        tables[i][j - 1] = gain
        value += t * gain
        prev = cur
    return float(value), SeparableFunction(d, f0, tables)


class Chain:
    """Maximal increasing lattice path defined by its increment coordinates."""

    def __init__(self, domain: LatticeDomain, increments):
        self.domain = domain
        self.increments = tuple(int(i) for i in increments)
        counts = [0] * domain.n
        pts = [domain.zero]
        cur = list(domain.zero)
        for i in self.increments:
            cur[i] += 1
            counts[i] += 1
            pts.append(tuple(cur))
        for i, k in enumerate(domain.sizes):
            if counts[i] != k - 1:
                raise ValueError(
                    f"coordinate {i} incremented {counts[i]} times, needs {k - 1}"
                )
        self.points = pts

    @property
    def length(self) -> int:
        return len(self.increments)

    def index_of(self, y) -> int:
        return int(sum(y))

    def contains(self, y) -> bool:
        y = self.domain.require(y)
        return self.points[self.index_of(y)] == y

    def __repr__(self):
        return f"Chain({list(self.increments)})"


def chain_containing(domain: LatticeDomain, y, mode: str = "canonical",
                     seed: Optional[int] = None, rng: Optional[random.Random] = None) -> Chain:
    """A chain through ``y``: raise coordinates to y, then on to k_max.

    canonical: coordinate 0 first to y_0, then 1 to y_1, ...; afterwards
    coordinate 0 up to its top level, then 1, ...  randomized: the before-y
    and after-y increment blocks are each shuffled uniformly (seeded).
    """
    y = domain.require(y)
    before = [i for i in range(domain.n) for _ in range(y[i])]
    after = [i for i in range(domain.n) for _ in range(domain.sizes[i] - 1 - y[i])]
    if mode == "randomized":
        if rng is None:
            rng = random.Random(seed)
        rng.shuffle(before)
        rng.shuffle(after)
    elif mode != "canonical":
        raise ValueError(f"unknown chain mode {mode!r}")
    return Chain(domain, before + after)


def chain_lower_bound(f: OracleFunction, y, chain: Chain) -> SeparableFunction:
    """Separable lower bound of a submodular f, tight along ``chain``.

    The increment weights are the marginal gains of f along the chain; the
    result equals f at every chain point (in particular at y) and is <= f
    everywhere when f is submodular.  Exactly r + 1 oracle calls.
    """
    d = f.domain
    y = d.require(y)
    if chain.domain != d:
        raise ValueError("chain domain does not match the function domain")
    if not chain.contains(y):
        raise ValueError(f"chain does not contain {y}; the bound would not be tight there")
    tables = [np.zeros(k - 1) for k in d.sizes]
    prev = f(chain.points[0])
    constant = prev
    for s, i in enumerate(chain.increments, start=1):
        cur = f(chain.points[s])
        level = chain.points[s][i]
        tables[i][level - 1] = cur - prev
        prev = cur
    return SeparableFunction(d, constant, tables)


def adjacent_chain_family(domain: LatticeDomain, y) -> List[Chain]:
    """O(n) chains through y covering all immediate predecessors/successors.

    Across the family, every coordinate that can step down at y appears as
    the increment directly before y in some chain, and every coordinate that
    can step up appears directly after y in some chain.
    """
    y = domain.require(y)
    befores = [i for i in range(domain.n) if y[i] >= 1]
    afters = [i for i in range(domain.n) if y[i] <= domain.sizes[i] - 2]
    count = max(len(befores), len(afters), 1)
    chains = []
    seen = set()
    for t in range(count):
        b = befores[t % len(befores)] if befores else None
        a = afters[t % len(afters)] if afters else None
        before = [i for i in range(domain.n) if i != b for _ in range(y[i])]
        if b is not None:
            before += [b] * y[b]
        after = []
        if a is not None:
            after += [a] * (domain.sizes[a] - 1 - y[a])
        after += [i for i in range(domain.n) if i != a
                  for _ in range(domain.sizes[i] - 1 - y[i])]
        key = tuple(before + after)
        if key not in seen:
            seen.add(key)
            chains.append(Chain(domain, key))
    return chains


def base_vertex_check(f: OracleFunction, weights: SeparableFunction,
                      tol: float = CHECK_TOL, cap=None) -> Verdict:
    """Verify greedy weights lie in the base region of a submodular f.

    Checks sum_i sum_{j<=x_i} w_i(j) <= f(x) - f(0) at every lattice point,
    with equality at k_max.  The weight constant is ignored; only the
    increment tables matter.
    """
    d = f.domain
    d.check_cap(cap, what="base_vertex_check")
    f0 = f(d.zero)
    checked = 0
    for x in d.points():
        lhs = sum(weights.prefixes[i][x[i]] for i in range(d.n))
        rhs = f(x) - f0
        checked += 1
        if lhs > rhs + tol:
            return Verdict(False, Witness(x, -1, None, lhs - rhs, "base_inequality"), checked)
    top = sum(weights.prefixes[i][d.sizes[i] - 1] for i in range(d.n))
    gap = abs(top - (f(d.k_max) - f0))
    if gap > tol:
        return Verdict(False, Witness(d.k_max, -1, None, gap, "base_equality"), checked)
    return Verdict(True, None, checked)
