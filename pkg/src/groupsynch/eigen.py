"""Top-eigenvalue computation for Hermitian matrices.

Small matrices go through the dense LAPACK solver; large ones through
Lanczos (ARPACK) with a fixed deterministic start vector, so results are
reproducible run to run.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import InvalidParameterError, NonConvergenceError

__all__ = ["top_eigenvalue", "top_eigenvalues"]

_DENSE_CUTOFF = 256
HERMITIAN_TOL = 1e-8


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidParameterError("matrix must be square")
    if np.abs(h - h.conj().T).max() > HERMITIAN_TOL:
        raise InvalidParameterError("matrix is not Hermitian within 1e-8")
    return h


def _start_vector(n: int) -> np.ndarray:
    # fixed, generic start: normalized alternating-sign ramp
    v = 1.0 + np.arange(n) % 3
    v[1::2] *= -1
    return v / np.linalg.norm(v)


def top_eigenvalue(h: np.ndarray, tol: float = 1e-8, maxiter: int = None) -> float:
    """Largest eigenvalue of a Hermitian matrix ``h`` within ``tol``.

    Tolerances of 1e-4 and looser run the Lanczos iteration in single
    precision; Hermitian eigenvalues are perturbed by at most the backward
    error norm, which stays two orders of magnitude below that tolerance.
    """
    h = _check_hermitian(h)
    n = h.shape[0]
    if n <= _DENSE_CUTOFF:
        return float(np.linalg.eigvalsh(h)[-1])
    v0 = _start_vector(n)
    if tol >= 1e-4:
        h = h.astype(np.complex64 if np.iscomplexobj(h) else np.float32)
        v0 = v0.astype(np.float32)
    try:
        vals = eigsh(h, k=1, which="LA", tol=tol, v0=v0,
                     maxiter=maxiter, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NonConvergenceError(
            f"Lanczos did not converge within the iteration limit: {exc}") from exc
    return float(vals[0].real)


def top_eigenvalues(h: np.ndarray, k: int, tol: float = 1e-8) -> np.ndarray:
    """The ``k`` largest eigenvalues, descending."""
    h = _check_hermitian(h)
    n = h.shape[0]
    if n <= _DENSE_CUTOFF or k >= n - 1:
        return np.linalg.eigvalsh(h)[::-1][:k]
    try:
        vals = eigsh(h, k=k, which="LA", tol=tol, v0=_start_vector(n),
                     return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NonConvergenceError(
            f"Lanczos did not converge within the iteration limit: {exc}") from exc
    return np.sort(vals.real)[::-1]
