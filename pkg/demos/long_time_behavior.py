"""Two long-time fates of a filtered tank: settling vs clogging.

Feeds the tank at two rates with the standard parameter table and follows
the four diagnostics (spatial averages of dust and predators, filter load,
filter predators) to t = 500.  At feeding 0.5 everything settles to an
equilibrium; at feeding 2.0 the filter saturates and the dust grows
linearly without bound while the predator populations level off.

Run from the repository root:

    python3 demos/long_time_behavior.py

Writes the full time series of each run under demo_output/.
"""

import numpy as np

from aquafilter import (GridSpec, ModelParams, TimeSpec, classify_clogging,
                        default_initial, emit_run, run_simulation)

grid = GridSpec(32)
timespec = TimeSpec(dt=0.01, t_end=500.0, record_every=100)

for feeding in (0.5, 2.0):
    params = ModelParams(f_tilde=feeding)
    record = run_simulation(params, grid, timespec, default_initial(grid.n))
    outcome = classify_clogging(record)

    print(f"feeding rate {feeding}: {outcome} "
          f"(final growth rate {record.final_growth_rate:.3e})")
    print(f"  {'t':>8} {'avg dust':>10} {'avg pred':>10} "
          f"{'load':>8} {'filt pred':>10}")
    show = np.linspace(0, len(record.times) - 1, 6).astype(int)
    for i in show:
        print(f"  {record.times[i]:8.1f} {record.avg_v1[i]:10.4f} "
              f"{record.avg_v2[i]:10.4f} {record.sigma1[i]:8.4f} "
              f"{record.sigma2[i]:10.4f}")
    print(f"  minimum field values over the whole run: "
          f"dust {record.min_v1:.2e}, predators {record.min_v2:.2e}")

    outdir = f"demo_output/feeding_{feeding}"
    emit_run(record, outdir, classification=outcome)
    print(f"  full series written to {outdir}/\n")
