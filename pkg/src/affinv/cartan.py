"""Jordan and Cartan projections, full flags, transverse frames and the
neutral / co-neutral maps attached to a transverse flag pair.

Cartan vectors are zero-sum numpy arrays of length n (coordinates on the
diagonal subalgebra of sl(n,R)).  Flags are stored as frames: column j of the
frame spans the new direction of the j-dimensional subspace, so the flag's
p-dimensional piece is the span of the first p columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkernel
from .numkernel import (DEFAULT_TOL, MODULUS_GAP_TOL, LoxodromicData,
                        ModulusCollision, Singular)


class NotTransverse(numkernel.NumericalDegeneracy):
    pass


def jordan_projection(g, *, gap_tol: float = MODULUS_GAP_TOL) -> np.ndarray:
    """Sorted log eigenvalue moduli (decreasing).  Requires pairwise distinct
    moduli; a complex conjugate pair collides and is rejected the same way."""
    g = np.asarray(g, dtype=float)
    values = np.linalg.eigvals(g)
    moduli = np.sort(np.abs(values))[::-1]
    for i in range(len(moduli) - 1):
        if moduli[i + 1] == 0.0:
            raise Singular("zero eigenvalue modulus")
        if moduli[i] / moduli[i + 1] - 1.0 <= gap_tol:
            raise ModulusCollision("eigenvalue moduli collide")
    return np.log(moduli)


def cartan_projection(g) -> np.ndarray:
    """Sorted log singular values (decreasing)."""
    return np.log(numkernel.singular_values(g))


def omega0(x) -> np.ndarray:
    """The longest Weyl element on the Cartan of sl(n): coordinate reversal."""
    return np.asarray(x, dtype=float)[::-1].copy()


@dataclass(frozen=True)
class Flag:
    """Full flag given by a frame; prefix spans are the flag subspaces."""

    frame: np.ndarray

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        if frame.ndim != 2 or frame.shape[0] != frame.shape[1]:
            raise ValueError(f"flag frame must be square, got {frame.shape}")
        object.__setattr__(self, "frame", frame)

    @property
    def n(self) -> int:
        return self.frame.shape[0]


def standard_flag(n: int) -> Flag:
    return Flag(np.eye(n))


def reversed_flag(n: int) -> Flag:
    return Flag(np.eye(n)[:, ::-1])


def _orthonormal_frame(flag: Flag) -> np.ndarray:
    """QR-orthonormalized frame adapted to the same flag (R has positive diagonal)."""
    q, r = np.linalg.qr(flag.frame)
    signs = np.sign(np.diag(r))
    if np.any(signs == 0):
        raise Singular("flag frame is not invertible")
    return q * signs


def flag_distance(f: Flag, g: Flag) -> float:
    """Max over p of the gap between the p-dimensional pieces (projector norm)."""
    qf = _orthonormal_frame(f)
    qg = _orthonormal_frame(g)
    worst = 0.0
    for p in range(1, f.n):
        pf = qf[:, :p] @ qf[:, :p].T
        pg = qg[:, :p] @ qg[:, :p].T
        worst = max(worst, np.linalg.norm(pf - pg, 2))
    return worst


def flags_of(lox: LoxodromicData) -> tuple[Flag, Flag]:
    """Attracting and repelling flags of a loxodromic matrix."""
    return Flag(lox.frame), Flag(lox.frame[:, ::-1])


def _unit_columns(frame: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(frame, axis=0)
    if np.any(norms == 0.0):
        raise Singular("flag frame has a zero column")
    return frame / norms


def is_transverse(f: Flag, g: Flag, *, tol: float = DEFAULT_TOL) -> bool:
    """Check F^p + G^(n-p) = R^n for every p via mixed-minor determinants,
    measured relative to unit column scaling."""
    n = f.n
    fu = _unit_columns(f.frame)
    gu = _unit_columns(g.frame)
    for p in range(1, n):
        minor = np.linalg.det(np.hstack([fu[:, :p], gu[:, : n - p]]))
        if abs(minor) <= tol:
            return False
    return True


def transverse_frame(f: Flag, g: Flag, *, tol: float = DEFAULT_TOL) -> np.ndarray:
    """The det-1 frame h whose column p spans F^p intersect G^(n-p+1).

    h carries the standard pair (standard flag, reversed standard flag) to
    (F, G); it is unique up to a diagonal matrix, and this realization is
    deterministic (fixed sign and scale convention).
    """
    if not is_transverse(f, g, tol=tol):
        raise NotTransverse("flags are not transverse")
    n = f.n
    fu = _unit_columns(f.frame)
    gu = _unit_columns(g.frame)
    h = np.empty((n, n))
    for p in range(1, n + 1):
        stacked = np.hstack([fu[:, :p], gu[:, : n - p + 1]])
        # Null vector of the n x (n+1) stack: F-part coefficients give the
        # intersection direction.
        _, _, vt = np.linalg.svd(stacked)
        coeffs = vt[-1]
        v = fu[:, :p] @ coeffs[:p]
        norm = np.linalg.norm(v)
        if norm <= tol:
            raise NotTransverse(f"intersection at level {p} is numerically empty")
        v = v / norm
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        h[:, p - 1] = v
    d = np.linalg.det(h)
    if abs(d) < tol:
        raise NotTransverse("transverse frame is numerically singular")
    h = h * abs(d) ** (-1.0 / n)
    if d < 0:
        h[:, -1] = -h[:, -1]
    return h


def co_neutral(f_i: Flag, f_j: Flag, z, *, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Co-neutral map of the transverse pair (F_i, F_j) applied to traceless z:
    the diagonal part of z in the transverse frame.  Kills the nilpotent
    pieces attached to F_i (upper) and F_j (lower)."""
    h = transverse_frame(f_i, f_j, tol=tol)
    w = numkernel.solve(h, np.asarray(z, dtype=float) @ h)
    return np.diag(w).copy()


def neutral(f_i: Flag, f_j: Flag, y0, *, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Neutral map: embed a Cartan vector back along the transverse pair."""
    h = transverse_frame(f_i, f_j, tol=tol)
    return h @ np.diag(np.asarray(y0, dtype=float)) @ np.linalg.inv(h)


def borel_residual(f: Flag, z) -> float:
    """Distance of z from the Borel subalgebra of the flag: norm of the
    strictly lower part of z in an adapted orthonormal frame."""
    q = _orthonormal_frame(f)
    w = q.T @ np.asarray(z, dtype=float) @ q
    return float(np.linalg.norm(np.tril(w, -1)))


def nilpotent_residual(f: Flag, z) -> float:
    """Distance of z from the nilradical (strictly upper part) of the flag's
    Borel: norm of the lower-plus-diagonal part in an adapted frame."""
    q = _orthonormal_frame(f)
    w = q.T @ np.asarray(z, dtype=float) @ q
    return float(np.linalg.norm(np.tril(w, 0)))
