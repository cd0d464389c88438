"""Dense 4x4 symmetric-matrix utilities for two-mode phase space.

Conventions
-----------
Mode ordering is (x1, p1, x2, p2) and units are vacuum-normalized, so the
vacuum covariance matrix is the identity and a covariance matrix is
physical iff its smallest symplectic eigenvalue is >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveMatrixError

#: Default tolerance on the minimum eigenvalue for all PSD checks.
PSD_TOL = 1e-10


def symplectic_form(n_modes: int = 2) -> np.ndarray:
    """Block-diagonal symplectic form with one [[0, 1], [-1, 0]] block per mode."""
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = j2
    return out


#: Single-mode symplectic form.
J2 = symplectic_form(1)
J2.setflags(write=False)

#: Two-mode symplectic form.
J4 = symplectic_form(2)
J4.setflags(write=False)

#: Partial transposition of the second mode: flips the sign of p2.
PT_B = np.diag([1.0, 1.0, 1.0, -1.0])
PT_B.setflags(write=False)


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Return the symmetric part (m + m^T)/2 as a fresh float array."""
    m = np.asarray(m, dtype=float)
    return (m + m.T) / 2.0


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(np.linalg.eigvalsh(symmetrize(m))[0])


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> bool:
    """True iff the minimum eigenvalue of m is >= -tol."""
    return min_eigenvalue(m) >= -tol


def loewner_ge(m1: np.ndarray, m2: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Loewner order: m1 >= m2 iff m1 - m2 is PSD within tol."""
    return is_psd(np.asarray(m1, dtype=float) - np.asarray(m2, dtype=float), tol)


def partial_transpose(m: np.ndarray) -> np.ndarray:
    """Conjugate a 4x4 matrix by the partial transposition of mode 2.

    Involutive; for a standard-form covariance matrix it flips the sign
    of the second correlation entry c2.
    """
    m = np.asarray(m, dtype=float)
    return PT_B @ m @ PT_B


@dataclass(frozen=True)
class SympSpectrum:
    """Symplectic eigenvalue pair of a two-mode matrix, sorted ascending."""

    mu_minus: float
    mu_plus: float

    def __iter__(self):
        return iter((self.mu_minus, self.mu_plus))


def symplectic_spectrum(m: np.ndarray, tol: float = PSD_TOL) -> SympSpectrum:
    """Symplectic eigenvalues of a symmetric positive-definite 4x4 matrix.

    Computed as the positive eigenvalues of i*J*m via the similar
    Hermitian matrix i*sqrt(m)*J*sqrt(m), which keeps the solver in
    well-conditioned Hermitian territory.

    Raises
    ------
    NonPositiveMatrixError
        If m is not positive definite within tol.
    """
    m = symmetrize(m)
    w, q = np.linalg.eigh(m)
    if w[0] <= tol:
        raise NonPositiveMatrixError(
            f"matrix is not positive definite: min eigenvalue {w[0]:.3e}"
        )
    root = (q * np.sqrt(w)) @ q.T
    herm = 1j * (root @ J4 @ root)
    mus = np.linalg.eigvalsh(herm)  # sorted: -mu+, -mu-, mu-, mu+
    return SympSpectrum(float(mus[2]), float(mus[3]))
