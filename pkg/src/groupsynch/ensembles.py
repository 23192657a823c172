"""Gaussian Hermitian random-matrix ensembles (orthogonal, unitary, symplectic).

Entry conventions:

  ensemble   shape          off-diagonal                    diagonal
  GOE        n x n real     N(0, 1)                         N(0, 2)
  GUE        n x n complex  N(0, 1/2) + i N(0, 1/2)         N(0, 1) real
  GSE        2n x 2n        2x2 quaternionic block          a * I_2,
             complex        [[a+bi, c+di], [-c+di, a-bi]],  a ~ N(0, 1/2)
                            a,b,c,d ~ N(0, 1/4)

Hermiticity is exact by construction: the strict upper triangle (or upper
block triangle) is drawn and mirrored, never symmetrized after the fact.
Sampling is a pure function of (kind, seed) via counter-based Philox streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import top_eigenvalue
from .errors import InvalidParameterError
from .rng import make_rng, spawn_seeds

__all__ = [
    "EnsembleKind",
    "NoiseMatrix",
    "sample",
    "sample_goe",
    "sample_gue",
    "sample_gse",
    "spectral_edge_check",
]

_TAGS = ("GOE", "GUE", "GSE")


@dataclass(frozen=True)
class EnsembleKind:
    tag: str
    n: int

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise InvalidParameterError(f"unknown ensemble tag {self.tag!r}")
        if self.n < 1:
            raise InvalidParameterError("matrix size parameter must be >= 1")

    @property
    def shape(self):
        m = 2 * self.n if self.tag == "GSE" else self.n
        return (m, m)


@dataclass(frozen=True)
class NoiseMatrix:
    entries: np.ndarray
    kind: EnsembleKind
    seed: int


def sample_goe(n: int, rng: np.random.Generator) -> np.ndarray:
    iu = np.triu_indices(n, 1)
    w = np.zeros((n, n))
    vals = rng.standard_normal(len(iu[0]))
    w[iu] = vals
    w[(iu[1], iu[0])] = vals
    w[np.diag_indices(n)] = np.sqrt(2.0) * rng.standard_normal(n)
    return w


def sample_gue(n: int, rng: np.random.Generator) -> np.ndarray:
    iu = np.triu_indices(n, 1)
    w = np.zeros((n, n), dtype=complex)
    m = len(iu[0])
    vals = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    w[iu] = vals
    w[(iu[1], iu[0])] = vals.conj()
    w[np.diag_indices(n)] = rng.standard_normal(n)
    return w


def sample_gse(n: int, rng: np.random.Generator) -> np.ndarray:
    """2n x 2n Hermitian matrix of quaternionic blocks."""
    w = np.zeros((2 * n, 2 * n), dtype=complex)
    half = 0.5  # std of each quaternion coefficient, variance 1/4
    for i in range(n):
        a = np.sqrt(0.5) * rng.standard_normal()
        w[2 * i, 2 * i] = a
        w[2 * i + 1, 2 * i + 1] = a
        if i + 1 < n:
            k = n - i - 1
            a4 = half * rng.standard_normal((k, 4))
            top = a4[:, 0] + 1j * a4[:, 1]
            off = a4[:, 2] + 1j * a4[:, 3]
            cols = 2 * (np.arange(i + 1, n))
            w[2 * i, cols] = top
            w[2 * i, cols + 1] = off
            w[2 * i + 1, cols] = -off.conj()
            w[2 * i + 1, cols + 1] = top.conj()
    iu = np.triu_indices(2 * n, 1)
    w[(iu[1], iu[0])] = w[iu].conj()
    return w


_SAMPLERS = {"GOE": sample_goe, "GUE": sample_gue, "GSE": sample_gse}


def sample(kind: EnsembleKind, seed: int) -> NoiseMatrix:
    """Draw one noise matrix; deterministic given (kind, seed)."""
    rng = make_rng(seed, _TAGS.index(kind.tag), kind.n)
    return NoiseMatrix(_SAMPLERS[kind.tag](kind.n, rng), kind, seed)


def spectral_edge_check(kind: EnsembleKind, trials: int, seed: int):
    """Monte-Carlo mean and standard error of lambda_max(W)/sqrt(n).

    Under the conventions above the bulk spectrum of W/sqrt(n) fills
    [-2, 2] for each ensemble, so the mean should sit near 2 for large n.
    """
    if kind.n < 1:
        raise InvalidParameterError("n must be >= 1")
    vals = np.empty(trials)
    for t, s in enumerate(spawn_seeds(seed, trials)):
        w = sample(kind, s).entries
        vals[t] = top_eigenvalue(w) / np.sqrt(kind.n)
    se = vals.std(ddof=1) / np.sqrt(trials) if trials > 1 else float("nan")
    return float(vals.mean()), float(se)
