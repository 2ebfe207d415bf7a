"""Separable upper bounds for lattice submodular functions.

Tight separable upper bounds exist directly only for DR-submodular
functions, so a general submodular f is first split as

    f(x) = coeff * (x_1^2 + ... + x_n^2) + h(x),

where coeff bounds the largest within-coordinate second difference of f
(its DR violation) and h = f - quadratic is then DR-submodular.  The
quadratic part is already separable; adding a separable bound for h that is
tight at an anchor x gives a separable bound for f that majorises f
everywhere and equals f(x) at the anchor.

Four bound variants are exposed.  Writing a_i = max(x_i - y_i, 0) and
b_i = max(y_i - x_i, 0), the per-coordinate contribution added to h(x) is:

  grow1:  -[h(x) - h(x - a_i e_i)]            for levels below the anchor,
          +[h(b_i e_i) - h(0)]                 for levels above it.
  grow2:  -[h(top) - h(top - a_i e_i)]         below (top = k_max),
          +[h(x + b_i e_i) - h(x)]             above.
  tight1: grow1 below; above, the added increments are anchored at the
          lowest base consistent with the anchor coordinate:
          +[h((x_i + b_i) e_i) - h(x_i e_i)].
  tight2: below, the removed increments are anchored at the highest
          consistent base z = k_max with z_i = x_i:
          -[h(z) - h(z - a_i e_i)]; grow2 above.

All four majorise h and are tight at x; tight1 <= grow1 and
tight2 <= grow2 pointwise (the grow variants relax the tight ones by
diminishing returns).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    LatticeDomain,
    OracleFunction,
    SeparableFunction,
    second_difference_within,
)

UB_VARIANTS = ("grow1", "grow2", "tight1", "tight2")


@dataclass
class DrDecomposition:
    """f = quad + residual with residual DR-submodular when coeff is large enough."""

    coeff: float
    quad: SeparableFunction
    residual: OracleFunction


def dr_violation(f: OracleFunction, cap=None) -> float:
    """Largest within-coordinate second difference of f, clamped at 0.

    0 means f is already DR-submodular.  Brute force; cap-guarded.
    """
    d = f.domain
    d.check_cap(cap, what="dr_violation")
    worst = 0.0
    for x in d.points():
        for i in range(d.n):
            if x[i] + 2 > d.sizes[i] - 1:
                continue
            worst = max(worst, second_difference_within(f, x, i))
    return worst


def dr_violation_quadratic(A) -> float:
    """DR violation of x'Ax (+ linear + constant) from its coefficient matrix.

    The within-coordinate second difference of x'Ax is 2*A_ii, so the bound
    is 2 * max(0, max_i A_ii); linear and constant terms contribute nothing.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return 2.0 * max(0.0, float(np.max(np.diag(A))))


def dr_split(f: OracleFunction, coeff: float) -> DrDecomposition:
    """Split f into coeff * sum_i x_i^2 plus a residual.

    The residual is DR-submodular whenever coeff >= dr_violation(f); the
    identity quad(x) + residual(x) = f(x) holds exactly by construction.
    """
    coeff = float(coeff)
    if coeff < 0:
        raise ValueError(f"quadratic coefficient must be >= 0, got {coeff}")
    d = f.domain
    # increments of coeff * x^2: coeff * (2j - 1) at level j
    tables = [coeff * (2.0 * np.arange(1, k) - 1.0) for k in d.sizes]
    quad = SeparableFunction(d, 0.0, tables)
    residual = OracleFunction(d, lambda x: f(x) - quad.value(x))
    return DrDecomposition(coeff, quad, residual)


def _axis_point(d: LatticeDomain, i: int, level: int) -> tuple:
    p = [0] * d.n
    p[i] = level
    return tuple(p)


def _top_with(d: LatticeDomain, i: int, level: int) -> tuple:
    p = list(d.k_max)
    p[i] = level
    return tuple(p)


def dr_upper_bound(h: OracleFunction, x, variant: str = "grow1") -> SeparableFunction:
    """Separable upper bound of a DR-submodular h, tight at the anchor x.

    See the module docstring for the four variants.  h is trusted to be
    DR-submodular; the bound property fails otherwise.
    """
    if variant not in UB_VARIANTS:
        raise ValueError(f"variant must be one of {UB_VARIANTS}, got {variant!r}")
    d = h.domain
    x = d.require(x)
    hx = h(x)
    h0 = h(d.zero) if variant == "grow1" else None
    htop = h(d.k_max) if variant == "grow2" else None

    contribs = []
    for i, k in enumerate(d.sizes):
        phi = np.zeros(k)
        for level in range(k):
            if level == x[i]:
                continue
            if level < x[i]:
                if variant in ("grow1", "tight1"):
                    phi[level] = -(hx - h(d.shift(x, i, level - x[i])))
                elif variant == "grow2":
                    phi[level] = -(htop - h(_top_with(d, i, d.sizes[i] - 1 - (x[i] - level))))
                else:  # tight2
                    phi[level] = h(_top_with(d, i, level)) - h(_top_with(d, i, x[i]))
            else:
                if variant == "grow1":
                    phi[level] = h(_axis_point(d, i, level - x[i])) - h0
                elif variant == "tight1":
                    phi[level] = h(_axis_point(d, i, level)) - h(_axis_point(d, i, x[i]))
                else:  # grow2, tight2
                    phi[level] = h(d.shift(x, i, level - x[i])) - hx
        contribs.append(phi)

    tables = [np.diff(phi) for phi in contribs]
    constant = hx + sum(float(phi[0]) for phi in contribs)
    return SeparableFunction(d, constant, tables)


def separable_upper_bound(f: OracleFunction, coeff: float, x,
                          variant: str = "grow1") -> SeparableFunction:
    """Separable bound for a general submodular f: quadratic split plus DR bound.

    Requires coeff >= dr_violation(f) (trusted or verified by the caller).
    The result majorises f everywhere and equals f at the anchor.
    """
    split = dr_split(f, coeff)
    return split.quad + dr_upper_bound(split.residual, x, variant)
