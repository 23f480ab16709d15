#!/usr/bin/env python3
"""Tensor products, partial traces, and the unique four-part Hamiltonian split.

Any composite Hamiltonian splits uniquely into an identity part, traceless
local parts, and an interaction whose partial traces vanish over both
factors.  The split is what makes "interaction strength" a well-defined
dial.
"""

import numpy as np

import einsel as es

print("== composite index convention: kron is subsystem-major ==")
z = np.diag([1.0, -1.0]).astype(complex)
print("diag(1,-1) (x) 1_2 =", np.diag(es.kron(z, np.eye(2, dtype=complex)).matrix).real)

print()
print("== partial traces ==")
rho_s = es.random_density(2, seed=3)
rho_b = es.random_density(4, seed=4)
product = np.kron(rho_s.matrix, rho_b.matrix)
err = np.max(np.abs(es.partial_trace_B(product, 2, 4) - rho_s.matrix))
print("Tr_B of a product state recovers the subsystem factor, error:", err)

bell = np.zeros(4, dtype=complex)
bell[0] = bell[3] = 1 / np.sqrt(2)
rho_bell = np.outer(bell, bell.conj())
print("Tr_B of a maximally entangled pair:")
print(np.round(es.partial_trace_B(rho_bell, 2, 2).real, 6))

print()
print("== the unique traceless split ==")
h = es.gue(8, seed=7)
sys = es.decompose(h, 2, 4)
print("h0 coefficient:", round(sys.h0_coeff, 6))
print("|Tr H_S| =", abs(np.trace(sys.H_S.matrix)))
print("max |Tr_B H_SB| =", np.max(np.abs(es.partial_trace_B(sys.H_SB, 2, 4))))
print("reassembly residual:", np.max(np.abs(es.assemble(sys).matrix - h.matrix)))

zz = es.kron(z, z)
pure_interaction = es.decompose(zz, 2, 2)
print("Z(x)Z splits into pure interaction: |H_S| = %g, |H_SB - Z(x)Z| = %g" % (
    np.max(np.abs(pure_interaction.H_S.matrix)),
    np.max(np.abs(pure_interaction.H_SB.matrix - zz.matrix)),
))

print()
print("== non-degenerate energy gaps ==")
for spectrum in ([0.0, 1.0, 2.0], [0.0, 1.0, 3.0, 7.0]):
    sd = es.SpectralDecomposition(
        np.array(spectrum), np.eye(len(spectrum), dtype=complex)
    )
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = es.validate_gaps(sd, tol=1e-9)
    print(f"spectrum {spectrum}: ok={report.ok}, "
          f"closest gap pair {report.worst_pair}, "
          f"difference {report.min_gap_difference:.3e}")

report = es.validate_gaps(es.eigh(es.gue(16, seed=11)), tol=1e-9)
print("GUE dim 16 draw: gaps non-degenerate =", report.ok)
