"""Work strokes and isochores of a two-level engine."""

import numpy as np

from otto_monitor.strokes import (
    BathSpec,
    Direction,
    Protocol,
    effective_transition_params,
    gibbs_state,
    protocol_step_error,
    protocol_unitary,
    thermal_channel,
)

# driven compression from (omega1/2) sigma_x to (omega2/2) sigma_z
for tau_u in (0.01, 1.0, 3.5, 50.0):
    proto = Protocol(1.0, 3.2, tau_u)
    h1, h2 = proto.endpoints()
    u = protocol_unitary(proto, Direction.COMPRESSION)
    tp = effective_transition_params(u, h1, h2)
    print(f"tau_u = {tau_u:6.2f}: transition probability r = {tp.r:.5f}, phase = {tp.phi:.4f}")

proto = Protocol(1.0, 3.2, 3.5)
print("time-step error estimate:", protocol_step_error(proto))

# hot isochore: populations relax, coherences decay and rotate
h1, h2 = proto.endpoints()
plus = np.full((2, 2), 0.5, dtype=complex)
for tau_b in (0.0, 5.0, 22.0, 200.0):
    out = h2.to_eigenbasis(thermal_channel(h2, BathSpec(0.2, 0.05, tau_b))(plus))
    print(f"tau_b = {tau_b:5.1f}: excited population {out[1, 1].real:.4f}, |coherence| {abs(out[0, 1]):.4f}")
print("hot Gibbs excited population:", h2.to_eigenbasis(gibbs_state(h2, 0.2))[1, 1].real.round(4))
