"""One Otto cycle under the five monitoring schemes."""

import math

from otto_monitor import BathSpec, CycleSpec, Protocol, SchemeConfig, cycle_channel, fixed_point
from otto_monitor.stats import kl_divergence, l1_coherence, scheme_cumulants
from otto_monitor.strokes import gibbs_state

proto = Protocol(1.0, 3.2, 3.5)
h1, h2 = proto.endpoints()
cycle = CycleSpec(h1, h2, proto, BathSpec(0.2, 0.05, 22.0), BathSpec(3.0, 0.05, 22.0))
ref = gibbs_state(h1, 3.0)

print(f"{'scheme':>10} {'<w>':>10} {'var w':>10} {'<q_h>':>10} {'KL':>10} {'l1':>10}")
configs = [SchemeConfig.uniform("UM"), SchemeConfig.uniform("TPM")]
configs += [SchemeConfig.uniform(s, x) for s in ("S1", "S2", "S3") for x in (0.0, 1.0, math.inf)]
for cfg in configs:
    rho = fixed_point(cycle_channel(cycle, cfg))
    c = scheme_cumulants(cycle, cfg, rho)
    label = cfg.scheme.value + (f"({cfg.widths[0]:g})" if cfg.widths else "")
    print(f"{label:>10} {c.w:10.5f} {c.w2c:10.4g} {c.qh:10.5f} {kl_divergence(rho, ref):10.5f} {l1_coherence(rho, h1):10.5f}")

# which projective limits coincide with the two-point record?
from otto_monitor.linops import frobenius_distance

tpm = cycle_channel(cycle, SchemeConfig.uniform("TPM"))
for s in ("S1", "S2", "S3"):
    print(s, "at sigma = 0, distance to TPM:", frobenius_distance(cycle_channel(cycle, SchemeConfig.uniform(s, 0.0)), tpm))
