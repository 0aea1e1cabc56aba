"""Exact reference computations with sympy.

These helpers never call into relkit, so they can serve as independent
oracles for the hand-derived example values.
"""

from __future__ import annotations

import numpy as np
import sympy as sp


def mat(rows) -> sp.Matrix:
    return sp.Matrix([[sp.nsimplify(x) for x in r] for r in rows])


def rank(M: sp.Matrix) -> int:
    return M.rank()


def colspace_projector(M: sp.Matrix) -> sp.Matrix:
    """Orthogonal projection onto the column space of ``M``."""
    cols = M.columnspace()
    if not cols:
        return sp.zeros(M.rows, M.rows)
    B = sp.Matrix.hstack(*cols)
    return sp.simplify(B * (B.H * B).inv() * B.H)


def nullspace_projector(M: sp.Matrix) -> sp.Matrix:
    null = M.nullspace()
    if not null:
        return sp.zeros(M.cols, M.cols)
    return colspace_projector(sp.Matrix.hstack(*null))


def intersection_projector(A: sp.Matrix, B: sp.Matrix) -> sp.Matrix:
    """Projection onto ``col A ∩ col B`` from the null space of ``[A, -B]``."""
    null = sp.Matrix.hstack(A, -B).nullspace()
    if not null:
        return sp.zeros(A.rows, A.rows)
    vecs = [A * v[: A.cols, :] for v in null]
    return colspace_projector(sp.Matrix.hstack(*vecs))


def gap(P1: sp.Matrix, P2: sp.Matrix) -> sp.Expr:
    """Spectral norm of the Hermitian difference ``P1 - P2``."""
    D = sp.simplify(P1 - P2)
    eig = D.eigenvals()
    return max((sp.Abs(e) for e in eig), default=sp.Integer(0))


def pinv(M: sp.Matrix) -> sp.Matrix:
    return M.pinv()


def to_numpy(M: sp.Matrix) -> np.ndarray:
    return np.array(M.evalf(30).tolist(), dtype=complex)


def close(A, B, atol=1e-9) -> bool:
    A = to_numpy(A) if isinstance(A, sp.MatrixBase) else np.asarray(A, dtype=complex)
    B = to_numpy(B) if isinstance(B, sp.MatrixBase) else np.asarray(B, dtype=complex)
    return A.shape == B.shape and bool(np.allclose(A, B, atol=atol, rtol=0))
