"""Closed forms for a perfectly thermalizing cold stroke against the full pipeline."""

import numpy as np

from otto_monitor import BathSpec, CycleSpec, Parametric, PerfectReset, SchemeConfig, StrokeHamiltonian
from otto_monitor import cycle_channel, fixed_point
from otto_monitor.oracle import PerfectCoolingParams, w_avg_schemes_perfect, w_avg_tpm_perfect, w_avg_um_perfect
from otto_monitor.stats import scheme_cumulants
from otto_monitor.strokes import effective_rate

r, phi, sigma = 0.2, 0.7, 1.0
h1, h2 = StrokeHamiltonian.tls(1.0), StrokeHamiltonian.tls(3.2)

print(f"{'tau_b':>6} {'UM':>10} {'TPM':>10} {'S1 pipe':>10} {'S1 exact':>10} {'S3 pipe':>10} {'S3 exact':>10}")
for tau_b in np.linspace(0, 12, 13):
    cycle = CycleSpec(h1, h2, Parametric(r, phi), BathSpec(0.2, 0.05, tau_b), PerfectReset(3.0))
    p = PerfectCoolingParams(1.0, 3.2, 3.0, 0.2, effective_rate(h2, cycle.hot), tau_b, r, phi, sigma)
    pipe = {}
    for s in ("S1", "S3"):
        cfg = SchemeConfig.uniform(s, sigma)
        pipe[s] = scheme_cumulants(cycle, cfg, fixed_point(cycle_channel(cycle, cfg))).w
    s1, _, s3 = w_avg_schemes_perfect(p)
    print(f"{tau_b:6.1f} {w_avg_um_perfect(p):10.6f} {w_avg_tpm_perfect(p):10.6f} {pipe['S1']:10.6f} {s1:10.6f} {pipe['S3']:10.6f} {s3:10.6f}")
# the UM - TPM gap oscillates with period 2 pi / omega2 and decays at half the relaxation rate
