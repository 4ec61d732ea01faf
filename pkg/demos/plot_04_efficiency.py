"""
Quantization efficiency
=======================

How much of I(X;Y) survives when Alice reconciles each of Bob's level bits
against her continuous sample, compared with the capacity bound.
"""

import logging

from arithrec import efficiency_point

# deep levels at low SNR often estimate slightly below zero; keep the output short
logging.getLogger("arithrec").setLevel(logging.ERROR)

for d in (-14.0, -10.0, -3.6, 0.0, 2.0):
    soft = efficiency_point(d, m=4, n_samples=5000, seeds=range(4), mi_mode="vs_X")
    hard = efficiency_point(d, m=4, n_samples=5000, seeds=range(4), mi_mode="hard_dd")
    print(f"{d:6.1f} dB  soft {soft.beta_q_reverse:.3f}  hard {hard.beta_q_reverse:.3f}  "
          f"bound {soft.beta_q_max:.3f}")

###############################################################################
# Levels beyond the fourth barely move the bound.
for m in (1, 2, 4, 7):
    rep = efficiency_point(-3.6, m=m, n_samples=1000, seeds=[0])
    print(f"m = {m}: beta_q_max = {rep.beta_q_max:.4f}")
