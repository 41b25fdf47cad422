"""A Gaussian pointer reading the energy of a qubit in superposition."""

import math

import numpy as np

from otto_monitor.pointer import averaged_state, outcome_density, suppression_factor
from otto_monitor.strokes import StrokeHamiltonian

h = StrokeHamiltonian.tls(1.0)
plus = h.vectors @ np.full((2, 2), 0.5) @ h.vectors.conj().T

# the wider the pointer, the less coherence the readout destroys
for sigma in (0.0, 0.1, 0.25, 0.5, 1.0, 3.0, math.inf):
    after = h.to_eigenbasis(averaged_state(plus, h, sigma))
    print(f"sigma = {sigma:5}: coherence left {abs(after[0, 1]):.4f}  (factor {suppression_factor(1.0, sigma):.4f})")

# outcome histogram of a narrow pointer: two peaks at -1/2 and +1/2
dens = outcome_density(plus, h, 0.1)
x = np.linspace(-1, 1, 21)
for xi, p in zip(x, dens.pdf(x)):
    print(f"{xi:5.2f} {'#' * int(p * 5)}")
