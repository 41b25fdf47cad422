"""Joint work/heat statistics as an exact Gaussian mixture."""

import numpy as np

from otto_monitor import BathSpec, CycleSpec, Protocol, SchemeConfig, cycle_channel, fixed_point
from otto_monitor.stats import characteristic_function, cumulants, joint_distribution, marginal_work, moments

proto = Protocol(1.0, 3.0, 3.5)
h1, h2 = proto.endpoints()
cycle = CycleSpec(h1, h2, proto, BathSpec(0.2, 0.05, 22.0), BathSpec(3.0, 0.05, 22.0))

tpm = SchemeConfig.uniform("TPM")
dist = joint_distribution(cycle, tpm, fixed_point(cycle_channel(cycle, tpm)))
marg = marginal_work(dist)
print("two-point work distribution:")
for w, p in sorted(zip(marg.means, marg.weights)):
    if p > 1e-6:
        print(f"  w = {w:+.1f}: {p:.5f}")

for sigma in (0.1, 1.0, 10.0):
    cfg = SchemeConfig.uniform("S1", sigma)
    dist = joint_distribution(cycle, cfg, fixed_point(cycle_channel(cycle, cfg)))
    c = cumulants(dist)
    print(f"S1 sigma = {sigma:4}: {len(dist)} components, <w> = {c.w:.5f}, var = {c.w2c:.4f}, <w q_h> = {moments(dist, 1, 1):.4f}")
    grid = np.linspace(-6, 6, 25)
    dens = marginal_work(dist).pdf(grid)
    print("   " + "".join(" .:-=+*#%@"[min(9, int(9 * d / dens.max()))] for d in dens))

# cumulants also follow from derivatives of the characteristic function
h = 1e-4 / np.sqrt(moments(dist, 2, 0))  # step matched to the spread
d1 = (characteristic_function(dist, h, 0) - characteristic_function(dist, -h, 0)) / (2j * h)
print("<w> from chi:", d1.real, " exact:", moments(dist, 1, 0))
