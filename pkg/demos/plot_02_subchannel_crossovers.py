"""
Crossover probabilities of the first two subchannels
====================================================

Level 1 disagrees exactly when ``X`` and ``Y`` have opposite signs, so its
crossover has the closed form ``arccos(rho) / pi``. Level 2 has no closed
form; we integrate it numerically and check it against simulation.
"""

import math

import numpy as np

from arithrec import alpha1, alpha2, bsc_capacity, correlation_coefficient, db_to_linear
from arithrec.channel_analysis import monte_carlo_alpha

print(" snr_db   alpha1   orthant    alpha2     C1       C2")
for d in (-10, -5, 0, 2, 5, 10):
    snr = float(db_to_linear(d))
    a1, a2 = alpha1(snr), alpha2(snr)
    orth = math.acos(correlation_coefficient(snr)) / math.pi
    print(f"{d:6}  {a1:.5f}  {orth:.5f}  {a2:.5f}  {bsc_capacity(a1):.5f}  {bsc_capacity(a2):.5f}")

###############################################################################
# A million simulated pairs at 0 dB, including levels with no quadrature.
alpha, err = monte_carlo_alpha([1, 2, 3, 4], 1.0, 10**6, seed=1)
for k, (a, e) in enumerate(zip(alpha, err), start=1):
    print(f"level {k}: {a:.4f} +- {e:.4f}")
print("quadrature level 2:", alpha2(1.0))
