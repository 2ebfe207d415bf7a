"""Domains, oracles, and structural checkers.

Walks through the basic vocabulary: lattice domains, counting oracles,
second differences, and the brute-force checkers for submodularity,
diminishing returns, and monotonicity.
"""

import math

import dsmin as d

# A domain is a product of integer ranges; coordinates may differ in size.
dom = d.LatticeDomain([3, 4])
print(f"domain {dom}: {dom.num_points} points, top point {dom.k_max}")

# Any callable on tuples becomes a counting oracle.
f = d.OracleFunction(dom, lambda x: -x[0] * x[1], name="negative product")
print(f"f(2, 3) = {f((2, 3))}, calls so far: {f.call_count}")

# Submodularity on the lattice is a sign condition on cross second
# differences: f(x+e_i+e_j) - f(x+e_i) - f(x+e_j) + f(x) <= 0.
print("\ncross second difference at (0, 0):",
      d.second_difference_cross(f, (0, 0), 0, 1))
print("check_submodular:", d.check_submodular(f))

# The positive product fails, and the checker reports the largest violation.
g = d.OracleFunction(dom, lambda x: x[0] * x[1])
verdict = d.check_submodular(g)
print("\npositive product:", verdict)
print("witness:", verdict.witness)

# Diminishing returns additionally needs concavity along each coordinate.
sqrt_sum = d.OracleFunction(dom, lambda x: math.sqrt(x[0] + x[1]))
square = d.OracleFunction(d.LatticeDomain([3]), lambda x: float(x[0] ** 2))
print("\nsqrt of sum is DR:", bool(d.check_dr(sqrt_sum)))
print("x^2 is submodular (one coordinate, no cross pairs):",
      bool(d.check_submodular(square)))
print("x^2 is DR:", d.check_dr(square))

# Separable functions (constant + per-level increments) are the lattice
# analogue of linear functions: modular, hence always submodular.
s = d.SeparableFunction(dom, 1.0, [[2.0, -3.0], [-1.0, 4.0, 0.5]])
print(f"\nseparable s(2, 1) = {s.value((2, 1))}")
print("separable is submodular:", bool(d.check_submodular(s)))
print("separable is DR:", bool(d.check_dr(s)))

# Monotonicity checker, with the largest descending step as witness.
print("\nmonotone sqrt:", bool(d.check_monotone(sqrt_sum)))
decreasing = d.OracleFunction(dom, lambda x: -float(x[0]))
print("monotone -x1:", d.check_monotone(decreasing))

# Enumerating checkers refuse oversized domains instead of spinning.
big = d.LatticeDomain([101, 101, 101])
try:
    d.check_submodular(d.OracleFunction(big, lambda x: 0.0))
except d.CapExceededError as exc:
    print(f"\ncap guard: {exc}")
