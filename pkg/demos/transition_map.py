"""Phase map of the clogging transition in the (C_rho, f) plane.

Sweeps the filter's predator carrying capacity C_rho against the feeding
rate f, classifying each long run as converged or clogging, and draws the
resulting phase boundary as a text map.  Converged cells reach an exact
steady state (zero growth in double precision), so the boundary is traced
with the distinguishable-from-zero growth threshold.

The full-resolution map (10 x 15 cells, horizon 5000) takes a couple of
minutes on one CPU; the default here is a quarter-size map that finishes
in about twenty seconds.  Pass "full" as the first argument for the
complete one.

    python3 demos/transition_map.py [full]

Writes the growth rates and classifications to demo_output/sweep.csv.
"""

import sys

import numpy as np

from aquafilter import (Classification, DimensionalParams, GridSpec,
                        TRANSITION_THRESHOLD, TimeSpec, emit_sweep,
                        lowest_clogging_f, sweep_transition)

full = len(sys.argv) > 1 and sys.argv[1] == "full"
if full:
    c_axis = np.round(np.arange(0.2, 2.01, 0.2), 10)
    f_axis = np.round(np.arange(0.2, 3.01, 0.2), 10)
else:
    c_axis = np.round(np.arange(0.4, 2.01, 0.4), 10)
    f_axis = np.round(np.arange(0.4, 3.01, 0.4), 10)

grid = GridSpec(32)
timespec = TimeSpec(dt=0.01, t_end=5000.0, record_every=100)

print(f"sweeping {len(c_axis)} x {len(f_axis)} cells to t = {timespec.t_end}"
      f" (this takes a while)...")
result = sweep_transition(DimensionalParams(), c_axis, f_axis, grid,
                          timespec, threshold=TRANSITION_THRESHOLD)

# text phase map: '#' clogging, '.' converged, '?' marginal, 'x' failed
print("\n        f = " + " ".join(f"{f:4.1f}" for f in f_axis))
glyph = {Classification.CLOGGING: "#", Classification.CONVERGED: ".",
         Classification.MARGINAL: "?", None: "x"}
for i, c_rho in enumerate(c_axis):
    row = "    ".join(glyph[result.classification[i, j]]
                      for j in range(len(f_axis)))
    print(f"C_rho {c_rho:4.1f}  {row}")

low = lowest_clogging_f(result)
print("\nlowest clogging feeding rate per capacity:")
for c_rho, f in zip(c_axis, low):
    bar = "nothing clogs" if np.isnan(f) else f"{f:.1f}"
    print(f"  C_rho = {c_rho:.1f}: {bar}")

emit_sweep(result, "demo_output")
print("\ncell-by-cell data written to demo_output/sweep.csv")
