"""Random instances for the randomized verification suites.

Every generator takes a ``numpy.random.Generator`` so callers control
reproducibility.  Spectra deliberately mix exact zeros and ones with
uniform values, otherwise kernels and projections would almost never be
exercised.
"""

from __future__ import annotations

import zlib

import numpy as np

from .complementation import ContractionPair
from .relation import LinearRelation, adjoint
from .subspace import Subspace, orthogonal_complement, orthonormalize


def trial_rng(seed: int, key: str, trial: int) -> np.random.Generator:
    """Independent stream for one trial of one property."""
    return np.random.default_rng([int(seed), zlib.crc32(key.encode()), int(trial)])


def complex_normal(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(complex_normal(rng, n, n))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_subspace(n: int, r: int, rng: np.random.Generator) -> Subspace:
    if r == 0:
        return Subspace.zero(n)
    return Subspace(random_unitary(n, rng)[:, :r])


def random_spectrum(n: int, rng: np.random.Generator, kind: str = "mixed") -> np.ndarray:
    """Eigenvalues in ``[0, 1]``.

    ``kind`` is ``"uniform"``, ``"projection"`` (only 0 and 1),
    ``"strict"`` (uniform in ``(0.05, 0.95)``) or ``"mixed"``
    (each eigenvalue is 0, 1 or uniform with equal odds).
    """
    if kind == "uniform":
        return rng.uniform(0.0, 1.0, n)
    if kind == "projection":
        return rng.integers(0, 2, n).astype(float)
    if kind == "strict":
        return rng.uniform(0.05, 0.95, n)
    if kind == "mixed":
        pick = rng.integers(0, 3, n)
        u = rng.uniform(0.0, 1.0, n)
        return np.where(pick == 0, 0.0, np.where(pick == 1, 1.0, u))
    raise ValueError(f"unknown spectrum kind {kind!r}")


def contraction_with_spectrum(lam, rng: np.random.Generator) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    U = random_unitary(lam.size, rng)
    A = (U * lam) @ U.conj().T
    return 0.5 * (A + A.conj().T)


def random_contraction(n: int, rng: np.random.Generator, kind: str = "mixed") -> np.ndarray:
    return contraction_with_spectrum(random_spectrum(n, rng, kind), rng)


def contraction_on(S: Subspace, rng: np.random.Generator, kind: str = "mixed") -> np.ndarray:
    """Nonnegative contraction acting on ``S`` and vanishing on ``S^⊥``."""
    n, r = S.ambient_dim, S.dim
    if r == 0:
        return np.zeros((n, n), dtype=complex)
    B = S.basis @ random_unitary(r, rng)
    lam = random_spectrum(r, rng, kind)
    A = (B * lam) @ B.conj().T
    return 0.5 * (A + A.conj().T)


def random_pair(n: int, rng: np.random.Generator, kind: str = "mixed") -> ContractionPair:
    return ContractionPair(random_contraction(n, rng, kind))


def random_relation(
    rng: np.random.Generator,
    max_dim: int = 8,
    force_mul: bool | None = None,
    dim_h: int | None = None,
    dim_k: int | None = None,
) -> LinearRelation:
    """Random graph subspace ``{{f, M f}} + {0} × mul``.

    ``dom`` and ``mul`` dimensions are random; with ``force_mul=None`` a
    nontrivial multivalued part is forced in half of the draws.
    """
    m = int(dim_h or rng.integers(1, max_dim + 1))
    n = int(dim_k or rng.integers(1, max_dim + 1))
    if force_mul is None:
        force_mul = bool(rng.integers(0, 2))
    r = int(rng.integers(1, n + 1)) if force_mul else 0
    d = int(rng.integers(0, m + 1))
    dom = random_subspace(m, d, rng)
    mul = random_subspace(n, r, rng)
    M = complex_normal(rng, n, m) * rng.choice([0.0, 0.5, 1.0, 3.0])
    cols = []
    if d:
        cols.append(np.vstack([dom.basis, M @ dom.basis]))
    if r:
        cols.append(np.vstack([np.zeros((m, r)), mul.basis]))
    if not cols:
        return LinearRelation(m, n, Subspace.zero(m + n))
    return LinearRelation(m, n, orthonormalize(np.hstack(cols), scale=1.0))


def random_sum3_K(T: LinearRelation, rng: np.random.Generator) -> np.ndarray:
    """Contraction splitting ``mul T`` directly.

    A projection onto a random subspace of ``mul T`` plus an arbitrary
    nonnegative contraction on ``(mul T)^⊥``.
    """
    m = T.mul()
    n = T.dim_k
    q = int(rng.integers(0, m.dim + 1))
    Q = Subspace(m.basis @ random_unitary(m.dim, rng)[:, :q]) if m.dim else Subspace.zero(n)
    C = contraction_on(orthogonal_complement(m), rng)
    K = Q.projector() + C
    return 0.5 * (K + K.conj().T)


def random_lebesgue_G(T: LinearRelation, rng: np.random.Generator, hi: float = 0.95) -> np.ndarray:
    """``G`` on ``ker T* ∩ dom T*`` with spectrum in ``[0, hi]``."""
    Ts = adjoint(T)
    L = Ts.ker()
    n = T.dim_k
    if L.dim == 0:
        return np.zeros((n, n), dtype=complex)
    B = L.basis @ random_unitary(L.dim, rng)
    lam = rng.uniform(0.0, hi, L.dim)
    return (B * lam) @ B.conj().T


def random_R(T: LinearRelation, rng: np.random.Generator) -> np.ndarray:
    """Contraction chosen to hit both verdicts of the product criteria."""
    n = T.dim_k
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return random_contraction(n, rng)
    m = T.mul()
    if kind == 1:
        return contraction_on(orthogonal_complement(m), rng)
    ker_s = adjoint(T).ker()
    if kind == 2:
        # inside mul T + ker T*, where R T is singular
        pieces = [b for b in (m.basis, ker_s.basis) if b.shape[1]]
        if not pieces:
            return np.zeros((n, n), dtype=complex)
        return contraction_on(orthonormalize(np.hstack(pieces), scale=1.0), rng)
    # random projection mixing directions of mul T and its complement
    r = int(rng.integers(0, n + 1))
    return random_subspace(n, r, rng).projector()


def random_operator_pair(rng: np.random.Generator, max_dim: int = 8):
    """``(Φ, Ψ)`` with random rank deficiencies.

    ``Ψ = A Φ + N`` where ``N`` lives on ``ker Φ`` with probability 1/2 and
    ``A`` vanishes with probability 1/4, so regular, singular and mixed
    cases all occur.
    """
    e = int(rng.integers(1, max_dim + 1))
    h = int(rng.integers(1, max_dim + 1))
    k = int(rng.integers(1, max_dim + 1))
    rank = int(rng.integers(0, min(e, h) + 1))
    U = random_unitary(h, rng)[:, :rank]
    V = random_unitary(e, rng)[:, :rank]
    s = rng.uniform(0.2, 2.0, rank)
    Phi = (U * s) @ V.conj().T
    A = complex_normal(rng, k, h) * float(rng.integers(0, 4) > 0)
    Psi = A @ Phi
    if rng.integers(0, 2):
        Pk = np.eye(e) - V @ V.conj().T
        Psi = Psi + complex_normal(rng, k, e) @ Pk
    return Phi, Psi
