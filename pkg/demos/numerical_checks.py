"""Numerical verification tour: the checks behind the solver.

Runs every verification suite and explains what each one establishes:

  ghost        - the eliminated ghost values satisfy both discrete
                 boundary relations to machine precision
  poles        - the boundary-condition resolvent poles sit exactly on
                 the unit circle for every filtration level
  selfadjoint  - the eliminated diffusion operator is symmetric and
                 nonpositive in the trapezoid inner product, with defects
                 vanishing at second order
  extension    - the reflection-plus-cutoff extension reproduces the
                 coupled boundary data with a norm bound uniform in the
                 coupling parameter
  convergence  - manufactured-solution orders: second order in both the
                 grid spacing and the time step

    python3 demos/numerical_checks.py [seed]
"""

import sys

from aquafilter import run_suite

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0

reports = run_suite("all", seed=seed)
for report in reports:
    print(report)

passed = sum(r.passed for r in reports)
print(f"\n{passed}/{len(reports)} checks passed (seed {seed})")
if passed != len(reports):
    sys.exit(1)
