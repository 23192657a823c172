"""Sampling the three Gaussian Hermitian ensembles and checking their laws.

Prints entry variances against the defining table, the Kramers pairing of
symplectic spectra, and Monte-Carlo estimates of the spectral edge.
"""
import numpy as np

from groupsynch import EnsembleKind, sample, spectral_edge_check

for tag in ("GOE", "GUE", "GSE"):
    kind = EnsembleKind(tag, 500)
    w = sample(kind, seed=1).entries
    print(f"== {tag}: shape {w.shape}, exactly Hermitian:",
          bool(np.array_equal(w, w.conj().T)))
    off = w[np.triu_indices(w.shape[0], 1)]
    print(f"   off-diagonal E|w|^2 = {np.mean(np.abs(off) ** 2):.3f}")
    print(f"   diagonal variance   = {w.diagonal().real.var():.3f}")

w = sample(EnsembleKind("GSE", 100), seed=2).entries
ev = np.linalg.eigvalsh(w)
print(f"GSE spectrum comes in pairs: max split {np.abs(ev[::2] - ev[1::2]).max():.2e}")

for tag in ("GOE", "GUE"):
    mean, se = spectral_edge_check(EnsembleKind(tag, 1000), trials=20, seed=3)
    print(f"{tag}(1000): top eigenvalue of W/sqrt(n) = {mean:.3f} +/- {se:.3f} "
          f"(bulk edge 2)")
