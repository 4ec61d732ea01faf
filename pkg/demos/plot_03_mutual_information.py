"""
The transform keeps the mutual information
==========================================

``U = F_X(X)`` and ``V = F_Y(Y)`` are invertible maps, so I(U;V) = I(X;Y).
The KSG estimator reproduces this from 5000 samples per replicate.
"""

from arithrec import run_mi_preservation

rows = run_mi_preservation(range(-14, 3, 4), n=5000, seeds=range(5))
print(" snr_db  analytic   I(U;V)   stderr   I(X;Y)")
for r in rows:
    print(f"{r.snr_db:6.0f}  {r.i_xy_analytic:.4f}   {r.i_uv_ksg:.4f}   "
          f"{r.i_uv_ksg_stderr:.4f}   {r.i_xy_ksg:.4f}")
