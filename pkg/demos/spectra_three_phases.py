"""
One spectral density per phase
==============================

Three profiles side by side: the gapless density at beta = 1/2 (inverse
square root wall at the origin), the gapped density at beta = 3 (detached
from zero, two soft edges) and, past u = 1/2, the evaporated picture where
the bulk reverts to the unconstrained shape and the excess deficit is
carried by a single detached eigenvalue.

Each bulk is checked against its three exact moments before plotting.
"""

import numpy as np

import isospectra as iso
from isospectra.quadrature import density_moment

cases = [
    ("gapless, beta = 1/2", iso.sigma(0.5), iso.u_of_beta(0.5)),
    ("gapped,  beta = 3", iso.sigma(3.0), iso.u_of_beta(3.0)),
    ("evaporated, u = 1 (N = 50)", iso.evaporated_spectrum(1.0, 50), None),
]

for label, sd, u in cases:
    norm = density_moment(sd, "one")
    mean = density_moment(sd, "lambda")
    print("%-28s support [%.5f, %.5f]  norm %.12f  mean %.12f"
          % (label, sd.support.a, sd.support.b, norm, mean))
    if u is not None:
        ent = density_moment(sd, "lambda_log_lambda")
        print("%-28s entropy moment %.12f vs u(beta) = %.12f" % ("", ent, u))
    if sd.atom is not None:
        print("%-28s atom: trace fraction %.6f pinned at %.6f"
              % ("", sd.atom.weight, sd.atom.position))
        print("%-28s %s" % ("", sd.rescaling))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(1, 3, figsize=(11, 3.4))
for ax, (label, sd, _) in zip(axes, cases):
    a, b = sd.support.a, sd.support.b
    lam = np.linspace(max(a, 1e-4), b - 1e-9, 500)
    ax.plot(lam, sd.eval(lam), color="C0")
    ax.set_title(label, fontsize=9)
    ax.set_xlabel("rescaled eigenvalue")
    ax.set_ylim(0.0, 1.6)
    if sd.atom is not None:
        # the atom lives in trace units, not on this axis, so words only
        ax.annotate("+ detached eigenvalue at\ntrace fraction %.3f" % sd.atom.weight,
                    xy=(1.3, 1.25), fontsize=7)
axes[0].set_ylabel("sigma(lambda)")
fig.tight_layout()
fig.savefig("spectra_three_phases.png", dpi=120)
print()
print("wrote spectra_three_phases.png")
