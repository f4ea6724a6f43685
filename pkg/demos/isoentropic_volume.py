"""
Volume of the isoentropic manifold and its two kinks
====================================================

N^2 s(u) is the log volume of states sharing an entanglement entropy
ln N - u.  The curve looks perfectly smooth to the eye, which is the point:
the gap opening at u_c only shows up in the fourth derivative, and the
evaporation kink at u = 1/2 has a first derivative jump that dies off like
1/ln N.  The detector below finds both blind, from one sided stencils.
"""

import math

from isospectra.transitions import detect_transitions, fit_half_jump_constant

N = 50
report = detect_transitions(N)
print("scanning s(u) for N = %d ..." % N)
print("flagged branch points (u_star, lowest discontinuous order):")
for u_star, order in report.detected:
    print("  u* = %.10f   order %d" % (u_star, order))
print("reference location of the gap opening: u_c = %.10f" % report.u_c)

# the full table also certifies what did NOT jump: at u_c the third
# derivative agrees from both sides to within the stencil noise
r3 = next(r for r in report.table
          if r.order == 3 and abs(r.u_star - report.u_c) < 1e-12)
print()
print("third derivative at u_c: left %.4f, right %.4f (no jump: %.3f <= 10 x %.3f)"
      % (r3.left, r3.right, r3.jump, r3.noise))
r4 = next(r for r in report.table
          if r.order == 4 and abs(r.u_star - report.u_c) < 1e-12)
print("fourth derivative at u_c: left %.1f, right %.2f  -> order 4 transition"
      % (r4.left, r4.right))

print()
print("first derivative jump at u = 1/2 across sizes (expected ~ c / ln N):")
print("%8s %14s %14s" % ("N", "jump", "jump * ln N"))
for row in fit_half_jump_constant(n_dims=(50, 500, 5000)):
    print("%8d %14.8f %14.8f" % (row["n_dim"], row["jump"], row["c_fit"]))
print("the product drifts slowly toward 1, i.e. jump = 1/(ln N - 1/2):")
for n in (50, 500, 5000):
    print("  N = %-5d  1/(ln N - 1/2) = %.8f" % (n, 1.0 / (math.log(n) - 0.5)))
