"""
The two deformation functions
=============================

The bulk densities in this package are a semicircle-like factor times a
slowly varying deformation: g(x, eta) on the gapped side and the single
function gt(x) on the gapless side.  This script tabulates both, shows the
eta -> 1 and eta -> infinity limits, and zooms in on the x = -1 wall where
gt drops to -1 like a square root.
"""

import numpy as np

from isospectra.quadrature import deformation_g, deformation_g_tilde

xs = np.linspace(-0.995, 0.995, 399)

# the gapped deformation flattens toward 1 as eta grows: the profile turns
# into a plain semicircle deep in the gapped regime
print("g(x, eta) at a few x for increasing eta")
print("%8s %10s %10s %10s %10s" % ("eta", "x=-0.9", "x=0", "x=0.5", "x=0.9"))
for eta in (1.0, 1.05, 1.3, 2.0, 5.0, 50.0):
    row = deformation_g(np.array([-0.9, 0.0, 0.5, 0.9]), eta)
    print("%8g %10.6f %10.6f %10.6f %10.6f" % (eta, *row))

print()
print("gt has one interior maximum, pi/2 - 1 at x = 0:")
print("  gt(0) = %.15f" % deformation_g_tilde(0.0))

# wall behavior: gt(-1 + eps) + 1 ~ pi sqrt(eps / 2)
print()
print("left wall: (gt + 1) / sqrt(eps) should approach pi / sqrt(2) = %.6f"
      % (np.pi / np.sqrt(2.0)))
for eps in (1e-2, 1e-4, 1e-6, 1e-8):
    val = deformation_g_tilde(-1.0 + eps)
    print("  eps = %7.0e   ratio = %.6f" % (eps, (val + 1.0) / np.sqrt(eps)))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
for eta in (1.0, 1.05, 1.3, 2.0, 5.0):
    ax1.plot(xs, deformation_g(xs, eta), label="eta = %g" % eta)
ax1.axhline(1.0, color="0.7", lw=0.8, ls="--")
ax1.set_xlabel("x")
ax1.set_ylabel("g(x, eta)")
ax1.legend(fontsize=8)

ax2.plot(xs, deformation_g_tilde(xs), color="C3")
ax2.axhline(0.0, color="0.7", lw=0.8)
ax2.set_xlabel("x")
ax2.set_ylabel("gt(x)")

fig.tight_layout()
fig.savefig("deformation_functions.png", dpi=120)
print()
print("wrote deformation_functions.png")
