#!/usr/bin/env python3
"""Certified operator types and the norms everything else builds on.

Walks through Hermitian operators, density matrices, spectral
decompositions, trace/operator norms, trace distance, and exact propagators
on tiny hand-checkable examples.
"""

import numpy as np

import einsel as es

print("== certified construction ==")
h = es.HermitianOperator(np.array([[1.0, 2.0 - 1.0j], [2.0 + 1.0j, -1.0]]))
print("2x2 Hermitian operator, dim:", h.dim)
try:
    es.HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))
except es.NonHermitianInput as exc:
    print("non-Hermitian input is rejected:", exc)

rho = es.random_density(3, seed=1)
print("random mixed state: trace = %.12f, purity = %.4f" % (
    np.trace(rho.matrix).real, rho.purity()))

print()
print("== spectra and norms ==")
sd = es.eigh(h)
print("eigenvalues:", np.round(sd.eigenvalues, 6))
print("reconstruction error:", np.max(np.abs(sd.reconstruct() - h.matrix)))
print("trace norm (sum |eig|):   %.6f" % es.trace_norm(h))
print("operator norm (max |eig|): %.6f" % es.op_norm(h))

print()
print("== trace distance ==")
p0 = es.DensityMatrix(np.diag([1.0, 0.0]).astype(complex))
mixed = es.DensityMatrix(np.eye(2, dtype=complex) / 2)
print("D(pure, same pure)    =", es.trace_distance(p0, p0))
print("D(pure, maximally mixed) = %.3f (eigenvalues of the difference are +-1/2)"
      % es.trace_distance(p0, mixed))

print()
print("== exact propagators ==")
h_sd = es.eigh(np.diag([0.0, np.pi]).astype(complex))
u = es.matrix_exp_unitary(h_sd, 1.0)
print("phases of diag(0, pi) at t=1:", np.round(np.diag(u), 12))
u2 = es.matrix_exp_unitary(h_sd, 0.4) @ es.matrix_exp_unitary(h_sd, 0.6)
print("group property |U(1) - U(.4)U(.6)| =", np.max(np.abs(u - u2)))

print()
print("== commutators ==")
plus = es.DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
proj = np.diag([0.0, 1.0]).astype(complex)
comm = es.commutator(plus, proj)
print("[|+><+|, diag(0,1)] =")
print(np.round(comm, 6))
print("trace norm of i[rho, A]: %.6f (<= 2 ||A|| = %.1f)"
      % (es.trace_norm(1j * comm), 2 * es.op_norm(proj)))
