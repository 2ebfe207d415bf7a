"""Majorisation-minimisation loops for DS minimisation on integer lattices.

Three surrogate choices share one outer loop, all starting at x = 0:

  subsup: replace g by its chain lower bound (tight at x_t) and minimise
          f - bound, a submodular subproblem.
  supsub: replace f by its separable upper bound (tight at x_t) and
          minimise bound - g, i.e. maximise g - bound, a submodular
          maximisation handled by double greedy.
  modmod: replace both; the surrogate is separable and is minimised exactly
          (optionally under a cardinality budget).

Because both bounds are tight at the current iterate, the true objective
never increases along accepted steps; inexact inner solvers are additionally
guarded by comparing each candidate against the current iterate before
acceptance.  Steps are accepted only if they improve v by at least
epsilon * |v| (sign-safe form; plain strict descent when epsilon = 0).

When an iteration produces no accepted move, the current point is certified
by checking all 2n unit neighbours (the condition the O(n) adjacent-chain
families guarantee; the family used is recorded in the certificate).  A
failed certificate hands the loop its descending neighbour; a passed one
ends the run with status "certified_local_min".
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

from .lattice import CapExceededError, OracleFunction
from .extension import Chain, adjacent_chain_family, chain_containing, chain_lower_bound
from .bounds import dr_violation, separable_upper_bound
from .decompose import DsProblem, monotone_form
from .solvers import (
    SubgradientOptions,
    double_greedy_maximize,
    minimize_separable,
    minimize_separable_cardinality,
    minimize_submodular,
)

DESCENT_TOL = 1e-12

ALGORITHMS = ("subsup", "supsub", "modmod")
UB_POLICIES = ("try_both", "grow1", "grow2")


@dataclass
class SolveOptions:
    algorithm: str = "modmod"
    epsilon: float = 0.0
    max_iters: int = 100
    chain_mode: str = "canonical"   # or "randomized"
    seed: Optional[int] = None
    ub_policy: str = "try_both"     # "try_both" | "grow1" | "grow2"
    sfm_method: str = "brute_force"
    sfm_options: Optional[SubgradientOptions] = None
    dr_coeff: Optional[float] = None  # user-supplied quadratic split coefficient
    start: Optional[tuple] = None
    budget: Optional[int] = None    # cardinality budget, modmod only
    cap: Optional[int] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.ub_policy not in UB_POLICIES:
            raise ValueError(f"ub_policy must be one of {UB_POLICIES}")
        if self.chain_mode not in ("canonical", "randomized"):
            raise ValueError("chain_mode must be 'canonical' or 'randomized'")
        if self.budget is not None and self.algorithm != "modmod":
            raise ValueError("a cardinality budget is supported by modmod only")


@dataclass
class IterateRecord:
    t: int
    point: tuple
    v: float
    f_val: float
    g_val: float
    surrogate: Optional[float]
    accepted: bool
    label: str
    calls_f: int
    calls_g: int
    wall_time: float


@dataclass
class Certificate:
    passed: bool
    point: tuple
    value: float
    neighbors: List[tuple]            # (point, v) pairs actually checked
    best_descending: Optional[tuple]  # (point, v) or None
    chain_family: List[Chain]


@dataclass
class PredictedBound:
    bound: float
    big_m: float   # f'(0) - g'(k_max) from the monotone decompositions
    small_m: float  # objective value after the first step


@dataclass
class SolveReport:
    algorithm: str
    iterates: List[IterateRecord]
    events: List[IterateRecord]
    status: str  # "certified_local_min" | "converged" | "iter_budget"
    certificate: Optional[Certificate] = None
    predicted: Optional[PredictedBound] = None

    @property
    def final_point(self) -> tuple:
        return self.iterates[-1].point

    @property
    def final_value(self) -> float:
        return self.iterates[-1].v

    @property
    def accepted_steps(self) -> int:
        return len(self.iterates) - 1


def accept_step(v_old: float, v_new: float, epsilon: float) -> bool:
    """Sign-safe epsilon-descent rule.

    epsilon = 0: accept strict improvements beyond float noise.
    epsilon > 0: require an improvement of at least epsilon * |v_old|.
    """
    if epsilon == 0:
        return v_new < v_old - DESCENT_TOL
    return v_new <= v_old - epsilon * max(abs(v_old), DESCENT_TOL)


def certify_local_minimum(p: DsProblem, x, tol: float = DESCENT_TOL,
                          budget: Optional[int] = None) -> Certificate:
    """Check v(x) <= v(x +- e_i) for every feasible unit neighbour.

    2n evaluations of v; with a cardinality budget, up-neighbours violating
    it are not feasible and are skipped.  The adjacent chain family at x is
    recorded so the certificate shows which chain sweep covers the same
    neighbours.
    """
    d = p.domain
    x = d.require(x)
    vx = p.v(x)
    neighbors = []
    best = None
    for i in range(d.n):
        for delta in (1, -1):
            ni = x[i] + delta
            if not 0 <= ni <= d.sizes[i] - 1:
                continue
            nbr = x[:i] + (ni,) + x[i + 1:]
            if budget is not None and sum(nbr) > budget:
                continue
            vn = p.v(nbr)
            neighbors.append((nbr, vn))
            if vn < vx - tol and (best is None or vn < best[1]):
                best = (nbr, vn)
    return Certificate(best is None, x, vx, neighbors, best,
                       adjacent_chain_family(d, x))


def _resolve_dr_coeff(f: OracleFunction, opts: SolveOptions) -> float:
    if opts.dr_coeff is not None:
        if opts.dr_coeff < 0:
            raise ValueError("the quadratic split coefficient must be >= 0")
        return float(opts.dr_coeff)
    try:
        return dr_violation(f, cap=opts.cap)
    except CapExceededError as exc:
        raise CapExceededError(
            f"{exc}; supply the quadratic split coefficient explicitly for "
            "domains beyond the brute-force cap"
        ) from exc


def _variants(policy: str):
    return ("grow1", "grow2") if policy == "try_both" else (policy,)


def _run_loop(p: DsProblem, opts: SolveOptions, propose: Callable) -> SolveReport:
    d = p.domain
    rng = random.Random(opts.seed)
    start = d.require(opts.start) if opts.start is not None else d.zero
    if opts.budget is not None and sum(start) > opts.budget:
        raise ValueError(f"start point {start} violates the budget {opts.budget}")

    t0 = time.perf_counter()
    calls_f0 = p.f.call_count
    calls_g0 = p.g.call_count

    def record(t, x, surrogate, accepted, label):
        f_val = p.f(x)
        g_val = p.g(x)
        return IterateRecord(t, x, f_val - g_val, f_val, g_val, surrogate,
                             accepted, label,
                             p.f.call_count - calls_f0, p.g.call_count - calls_g0,
                             time.perf_counter() - t0)

    x = start
    iterates = [record(0, x, None, True, "start")]
    events = [iterates[0]]
    vx = iterates[0].v
    status = "iter_budget"
    certificate = None

    for t in range(1, opts.max_iters + 1):
        moved = False
        for cand, surrogate, label in propose(x, rng):
            cand = tuple(cand)
            if cand == x:
                continue
            rec = record(t, cand, surrogate, False, label)
            rec.accepted = accept_step(vx, rec.v, opts.epsilon)
            events.append(rec)
            if rec.accepted:
                x, vx = cand, rec.v
                iterates.append(rec)
                moved = True
                break
        if moved:
            continue

        cert = certify_local_minimum(p, x, budget=opts.budget)
        if cert.passed:
            status = "certified_local_min"
            certificate = cert
            break
        nbr, v_nbr = cert.best_descending
        if accept_step(vx, v_nbr, opts.epsilon):
            rec = record(t, nbr, None, True, "descending_neighbor")
            events.append(rec)
            iterates.append(rec)
            x, vx = nbr, rec.v
        else:
            # a neighbour descends, but by less than the epsilon threshold
            status = "converged"
            break

    predicted = None
    if opts.epsilon > 0:
        try:
            v_x1 = iterates[1].v if len(iterates) > 1 else iterates[0].v
            predicted = predicted_iteration_bound(p, opts.epsilon, v_x1=v_x1, cap=opts.cap)
        except CapExceededError:
            pass
    return SolveReport(opts.algorithm, iterates, events, status,
                       certificate=certificate, predicted=predicted)


def subsup(p: DsProblem, opts: Optional[SolveOptions] = None) -> SolveReport:
    """MM with the chain lower bound on g; inner solves are submodular minimisations."""
    opts = opts or SolveOptions(algorithm="subsup")
    if opts.algorithm != "subsup":
        raise ValueError(f"options specify {opts.algorithm!r}")

    def propose(x, rng):
        chain = chain_containing(p.domain, x, mode=opts.chain_mode, rng=rng)
        h_g = chain_lower_bound(p.g, x, chain)
        inner = p.f - h_g
        res = minimize_submodular(inner, method=opts.sfm_method,
                                  options=opts.sfm_options, cap=opts.cap)
        yield res.minimizer, res.value, "subsup"

    return _run_loop(p, opts, propose)


def supsub(p: DsProblem, opts: Optional[SolveOptions] = None) -> SolveReport:
    """MM with the separable upper bound on f; inner solves are double greedy."""
    opts = opts or SolveOptions(algorithm="supsub")
    if opts.algorithm != "supsub":
        raise ValueError(f"options specify {opts.algorithm!r}")
    coeff = _resolve_dr_coeff(p.f, opts)

    def propose(x, rng):
        for variant in _variants(opts.ub_policy):
            m_f = separable_upper_bound(p.f, coeff, x, variant)
            inner = p.g - m_f
            cand, val = double_greedy_maximize(inner)
            yield cand, -val, f"supsub:{variant}"

    return _run_loop(p, opts, propose)


def modmod(p: DsProblem, opts: Optional[SolveOptions] = None) -> SolveReport:
    """MM with both bounds; the separable surrogate is minimised exactly."""
    opts = opts or SolveOptions(algorithm="modmod")
    if opts.algorithm != "modmod":
        raise ValueError(f"options specify {opts.algorithm!r}")
    coeff = _resolve_dr_coeff(p.f, opts)

    def propose(x, rng):
        chain = chain_containing(p.domain, x, mode=opts.chain_mode, rng=rng)
        h_g = chain_lower_bound(p.g, x, chain)
        for variant in _variants(opts.ub_policy):
            surrogate = separable_upper_bound(p.f, coeff, x, variant) - h_g
            if opts.budget is not None:
                cand, val = minimize_separable_cardinality(surrogate, p.domain, opts.budget)
            else:
                cand, val = minimize_separable(surrogate)
            yield cand, val, f"modmod:{variant}"

    return _run_loop(p, opts, propose)


def solve(p: DsProblem, opts: Optional[SolveOptions] = None) -> SolveReport:
    opts = opts or SolveOptions()
    return {"subsup": subsup, "supsub": supsub, "modmod": modmod}[opts.algorithm](p, opts)


def predicted_iteration_bound(p: DsProblem, epsilon: float,
                              v_x1: Optional[float] = None, cap=None) -> PredictedBound:
    """Worst-case accepted-step count log(|M|/|m|) / epsilon.

    M is f'(0) - g'(k_max) from the monotone decompositions of f and g; m is
    the objective value after the first MM step (one modmod step is run when
    it is not supplied).  m = 0 reports a bound of 0: the first iterate is
    already as good as the scale argument can certify.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    d = p.domain
    _, mono_f = monotone_form(p.f, cap=cap)
    _, mono_g = monotone_form(p.g, cap=cap)
    big_m = mono_f(d.zero) - mono_g(d.k_max)
    if v_x1 is None:
        probe = modmod(p, SolveOptions(algorithm="modmod", epsilon=epsilon,
                                       max_iters=1, cap=cap))
        v_x1 = probe.iterates[-1].v
    small_m = float(v_x1)
    if small_m == 0.0:
        return PredictedBound(0.0, big_m, small_m)
    if epsilon == 0.0 or big_m == 0.0:
        bound = math.inf if epsilon == 0.0 else -math.inf
        return PredictedBound(bound, big_m, small_m)
    return PredictedBound(math.log(abs(big_m) / abs(small_m)) / epsilon, big_m, small_m)
