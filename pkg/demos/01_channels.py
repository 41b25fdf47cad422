"""Channels in Liouville form: Kraus maps, Choi matrices, composition, fixed points."""

import numpy as np

from otto_monitor.linops import (
    channel_from_kraus,
    compose,
    fixed_point,
    fixed_point_power,
    reset_channel,
    unitary_channel,
)

# amplitude damping with decay probability p
p = 0.3
k0 = np.array([[1, 0], [0, np.sqrt(1 - p)]])
k1 = np.array([[0, np.sqrt(p)], [0, 0]])
damp = channel_from_kraus([k0, k1])

rho = np.array([[0.2, 0.3], [0.3, 0.8]], dtype=complex)
print("damped state:\n", damp(rho).round(4))
print("trace preserving:", damp.is_trace_preserving(), " completely positive:", damp.is_completely_positive())
print("Choi eigenvalues:", np.linalg.eigvalsh(damp.choi()).round(4))

# a rotation followed by damping has a unique fixed point; both solvers agree
theta = 0.4
rot = unitary_channel(np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]))
cycle = compose(damp, rot)
a = fixed_point(cycle)
b = fixed_point_power(cycle)
print("fixed point:\n", a.round(6))
print("solver gap:", np.linalg.norm(a - b))

# a reset wipes the input completely
target = np.diag([0.9, 0.1]).astype(complex)
print("reset output:", np.diag(reset_channel(target)(rho)).real)
