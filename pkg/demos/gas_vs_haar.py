"""
Sampler cross check: Metropolis gas against direct Gaussian draws
=================================================================

At beta = 0 the gas samples plain unconstrained spectra, so its histogram
must agree with direct Gaussian draws up to Monte Carlo noise, and both
must agree with the closed form density.  At beta = 3 only the gas can go;
its histogram lands on the gapped analytic profile.

Sized to finish in a few seconds; push steps/draws up for tighter bars.
"""

import numpy as np

import isospectra as iso
from isospectra.coulomb_gas import ChainConfig, empirical_spectrum, run_chain
from isospectra.empirics import Histogram, l1_distance, summarize
from isospectra.haar_ensemble import sample_spectra

N = 32
rng = np.random.default_rng(7)

haar = sample_spectra(N, 400, rng)
print("direct draws:", summarize(haar))

free = run_chain(ChainConfig(n_dim=N, beta=0.0, steps=8000, burn_in=2000,
                             thinning=10, seed=11))
print("free gas:   ", summarize(free))

coupled = run_chain(ChainConfig(n_dim=N, beta=3.0, steps=8000, burn_in=2000,
                                thinning=10, seed=12))
print("coupled gas:", summarize(coupled))

mp_ref = iso.mp_density()
h_haar = Histogram.from_samples(haar.ravel() * N, bins=40, hi=4.2)
h_free = empirical_spectrum(free, bins=40, upper=4.2)
print()
print("L1 to the closed form: direct %.4f, free gas %.4f"
      % (l1_distance(h_haar, mp_ref), l1_distance(h_free, mp_ref)))

sd3 = iso.sigma(3.0)
h3 = empirical_spectrum(coupled, bins=40, upper=1.05 * sd3.support.b)
print("L1 of the coupled gas to sigma(beta=3): %.4f" % l1_distance(h3, sd3))
print("expected deficit u(3) = %.6f" % iso.u_of_beta(3.0))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
width = h_haar.edges[1] - h_haar.edges[0]
ax1.bar(h_haar.centers, h_haar.masses / width, width=width, alpha=0.45,
        label="direct draws")
ax1.bar(h_free.centers, h_free.masses / width, width=width, alpha=0.45,
        label="gas, beta = 0")
lam = np.linspace(1e-3, 4.0, 400)
ax1.plot(lam, mp_ref.eval(lam), "k-", lw=1, label="closed form")
ax1.set_ylim(0, 1.4)
ax1.legend(fontsize=8)
ax1.set_xlabel("N lambda")

width3 = h3.edges[1] - h3.edges[0]
ax2.bar(h3.centers, h3.masses / width3, width=width3, alpha=0.45, color="C2",
        label="gas, beta = 3")
lam3 = np.linspace(sd3.support.a + 1e-4, sd3.support.b - 1e-6, 400)
ax2.plot(lam3, sd3.eval(lam3), "k-", lw=1, label="sigma(beta = 3)")
ax2.legend(fontsize=8)
ax2.set_xlabel("N lambda")

fig.tight_layout()
fig.savefig("gas_vs_haar.png", dpi=120)
print("wrote gas_vs_haar.png")
