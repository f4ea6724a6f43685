"""
From the multiplier beta to the entropy deficit u, and back
===========================================================

u(beta) maps the conjugate multiplier to the typical entropy deficit
u = ln N - S.  It is strictly decreasing from u(0) = 1/2, so it inverts
cleanly; the entropy density s(u) then packs the whole phase structure
into one curve with two special points: u_c (a fourth order kink, where
the spectral gap opens) and u = 1/2 (a first order kink at finite N, where
one eigenvalue detaches).
"""

import math

import numpy as np

import isospectra as iso

print("critical values:", iso.critical_values())
print("u(beta=0)  = %.15f (exactly 1/2)" % iso.u_of_beta(0.0))
print("u(beta=3)  = %.15f" % iso.u_of_beta(3.0))
print("beta(u_c)  = %.12f (the gap opens at 3/2)" % iso.beta_of_u(iso.U_CRITICAL))

# round trip through the inverse
for beta in (0.2, 1.5, 4.0):
    u = iso.u_of_beta(beta)
    print("beta = %-4g -> u = %.12f -> beta = %.12f" % (beta, u, iso.beta_of_u(u)))

N = 50
log_n = math.log(N)
print()
print("s(u) for N = %d (phase labels from phase_of_u)" % N)
print("%10s %12s %12s %s" % ("u", "s", "N^2 s", "phase"))
for u in (0.05, 0.15, iso.U_CRITICAL, 0.35, 0.5, 0.8, 1.5, 3.0):
    s = iso.entropy_density_s(u, N)
    print("%10.6f %12.6f %12.1f %s" % (u, s, iso.log_volume(u, N),
                                       iso.phase_of_u(u).name.lower()))

# the volume collapses completely at u = ln N (a pure state)
print()
print("s(u -> ln N) = %s" % iso.entropy_density_s(log_n, N))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

us_low = np.linspace(0.02, 0.5, 300)
us_high = np.linspace(0.5, log_n - 1e-9, 300)
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(us_low, [iso.entropy_density_s(u) for u in us_low], label="analytic branches")
ax.plot(us_high, [iso.entropy_density_s(u, N) for u in us_high],
        label="evaporated branch, N = %d" % N)
ax.axvline(iso.U_CRITICAL, color="0.6", ls=":", lw=1, label="u_c")
ax.axvline(0.5, color="0.6", ls="--", lw=1, label="u = 1/2")
ax.set_xlabel("entropy deficit u")
ax.set_ylabel("s(u)")
ax.set_ylim(-4.0, 0.0)
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig("temperature_entropy_map.png", dpi=120)
print("wrote temperature_entropy_map.png")
