"""The three majorisation-minimisation algorithms end to end.

Runs all three loops on a closed-form toy and on a generated sensor-coverage
instance, prints iterate traces, certificates, and the predicted iteration
bound, and shows how the same run looks through the problem-file interface.
"""

import json
import math
import tempfile
from pathlib import Path

import dsmin as d

# --- the toy: f = sqrt(x1+x2), g = x1+x2 on {0,1,2}^2 -----------------------
dom = d.LatticeDomain([3, 3])
p = d.DsProblem(d.OracleFunction(dom, lambda x: math.sqrt(x[0] + x[1])),
                d.OracleFunction(dom, lambda x: float(x[0] + x[1])))

for algo in ("subsup", "supsub", "modmod"):
    report = d.solve(p, d.SolveOptions(algorithm=algo))
    path = " -> ".join(str(r.point) for r in report.iterates)
    print(f"{algo:7s}: {path}, value {report.final_value}, {report.status}")

# The certificate records the neighbour sweep and the chain family used.
report = d.modmod(p, d.SolveOptions(algorithm="modmod"))
cert = report.certificate
print(f"\ncertificate at {cert.point}: neighbours checked "
      f"{[(n, round(v, 3)) for n, v in cert.neighbors]}")

# A cardinality budget restricts modmod's inner separable solves.
budget_run = d.modmod(p, d.SolveOptions(algorithm="modmod", budget=2))
print(f"budget 2: point {budget_run.final_point}, value {budget_run.final_value:.4f}")

# Epsilon-approximate descent only accepts steps improving by eps * |v|, and
# comes with a worst-case bound on the number of accepted steps.
eps_run = d.modmod(p, d.SolveOptions(algorithm="modmod", epsilon=0.1))
pred = eps_run.predicted
print(f"\nepsilon 0.1: accepted steps {eps_run.accepted_steps}, "
      f"predicted bound {pred.bound:.2f} (M={pred.big_m}, m={pred.small_m})")

# --- a generated coverage instance ------------------------------------------
spec = d.generate_ensemble("coverage", {"count": 1, "sizes": (4, 4, 4)}, seed=5)[0]
problem, _ = d.build_problem(spec)
report = d.solve(problem, d.SolveOptions(algorithm="subsup", chain_mode="randomized",
                                         seed=1))
_, oracle_best = d.brute_force_minimize(problem.v_oracle())
print(f"\ncoverage instance: final {report.final_value:.4f} at "
      f"{report.final_point}, oracle {oracle_best:.4f}, "
      f"gap {report.final_value - oracle_best:.2e}")
print("iterate trace:")
for rec in report.iterates:
    print(f"  t={rec.t} x={rec.point} v={rec.v:.4f} "
          f"calls f/g = {rec.calls_f}/{rec.calls_g}")

# --- the same run through the file interface ---------------------------------
with tempfile.TemporaryDirectory() as tmp:
    problem_path = Path(tmp) / "coverage.json"
    trace_path = Path(tmp) / "trace.jsonl"
    d.write_problem(spec, problem_path)
    from dsmin.cli import cli_run
    code = cli_run(["solve", str(problem_path), "--algorithm", "modmod",
                    "--trace", str(trace_path)])
    print(f"\ncli exit code {code}; first trace record:")
    print(json.dumps(json.loads(trace_path.read_text().splitlines()[0]), indent=2))
