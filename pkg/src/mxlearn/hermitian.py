"""Hermitian matrix helpers and the entropic exponential map.

Matrices are plain complex ``numpy`` arrays. Functions that expect a
Hermitian argument call :func:`hermitian` on it, which symmetrizes small
round-off asymmetries and rejects anything that is clearly not Hermitian.

All entropy-type functionals work in the unit-trace normalization; callers
dealing with a power budget ``P`` rescale by ``1/P`` first.
"""

from typing import NamedTuple

import numpy as np

__all__ = [
    "EigenDecomposition",
    "hermitian",
    "hermitize",
    "herm_eig",
    "from_eig",
    "exp_map",
    "von_neumann_entropy",
    "entropy_conjugate",
    "fenchel_coupling",
    "orthonormalize",
    "inv_sqrt",
    "logdet",
]

# relative asymmetry above which an input is rejected instead of symmetrized
_ASYMMETRY_TOL = 1e-8
# relative eigenvalue clamp used by the entropy
_CLAMP_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching unitary eigenvectors
    (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_square(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermitize(A):
    """Return the Hermitian part ``(A + A^H) / 2`` of a square matrix."""
    A = _check_square(A).astype(complex)
    return 0.5 * (A + A.conj().T)


def hermitian(A):
    """Validate ``A`` as Hermitian and return an exactly symmetric copy.

    Raises
    ------
    ValueError
        If ``A`` is not square, has non-finite entries or deviates from
        conjugate symmetry by more than round-off.
    """
    A = _check_square(A).astype(complex)
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    if np.abs(A - A.conj().T).max(initial=0.0) > _ASYMMETRY_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    return 0.5 * (A + A.conj().T)


def herm_eig(A):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    A : (M, M) array_like
        Hermitian matrix.

    Returns
    -------
    EigenDecomposition
        Real ascending eigenvalues and a unitary matrix of eigenvectors.
    """
    w, U = np.linalg.eigh(hermitian(A))
    return EigenDecomposition(w, U)


def from_eig(w, U):
    """Reassemble ``U diag(w) U^H`` as an exactly Hermitian matrix."""
    A = (U * w) @ U.conj().T
    return 0.5 * (A + A.conj().T)


def exp_map(Y, P=1.0):
    """Map a score matrix to a feasible covariance: ``P exp(Y) / tr exp(Y)``.

    The exponential is taken through the eigendecomposition of ``Y`` after
    shifting by its largest eigenvalue, so arbitrarily large scores are
    handled without overflow. The result is positive semidefinite with
    trace ``P``.
    """
    if not P > 0:
        raise ValueError(f"power must be positive, got {P}")
    w, U = herm_eig(Y)
    e = np.exp(w - w[-1])
    e *= P / e.sum()
    return from_eig(e, U)


def von_neumann_entropy(Q):
    """Negative von Neumann entropy ``tr[Q log Q]`` of a unit-trace ``Q``.

    Eigenvalues below ``-1e-10`` are rejected; tiny negative ones are
    clamped to zero and ``0 log 0 = 0``.
    """
    q = herm_eig(Q).eigenvalues
    scale = max(q[-1], 1.0)
    if q[0] < -1e-10 * scale:
        raise ValueError(f"matrix is not positive semidefinite (min eig {q[0]:.3e})")
    q = np.where(q > _CLAMP_TOL * scale, q, 0.0)
    nz = q[q > 0]
    return float(np.sum(nz * np.log(nz)))


def entropy_conjugate(Y):
    """Convex conjugate of the entropy, ``log tr exp(Y)``, computed stably."""
    w = herm_eig(Y).eigenvalues
    return float(w[-1] + np.log(np.sum(np.exp(w - w[-1]))))


def fenchel_coupling(Q, Y):
    """Fenchel coupling ``h(Q) + h*(Y) - tr[QY]`` for unit-trace ``Q``.

    Nonnegative, and zero exactly when ``Q == exp_map(Y, 1)``.
    """
    Q = hermitian(Q)
    Y = hermitian(Y)
    cross = np.real(np.sum(Q * Y.conj()))  # tr[QY] for Hermitian Q, Y
    return von_neumann_entropy(Q) + entropy_conjugate(Y) - cross


def orthonormalize(U):
    """Orthonormalize the columns of ``U`` by modified Gram-Schmidt.

    A second sweep is applied (re-orthogonalization) so the result is
    unitary to machine precision. Column ``j`` of the output spans the same
    flag ``span(u_1, ..., u_j)`` as the input.

    Raises
    ------
    ValueError
        If the columns are numerically linearly dependent.
    """
    U = _check_square(U).astype(complex)
    Q = U.copy()
    m = Q.shape[1]
    norms = np.linalg.norm(U, axis=0)
    for _ in range(2):
        for j in range(m):
            v = Q[:, j]
            for i in range(j):
                v -= (Q[:, i].conj() @ v) * Q[:, i]
            nv = np.linalg.norm(v)
            if nv <= 1e-12 * max(norms[j], 1e-300):
                raise ValueError("columns are linearly dependent")
            Q[:, j] = v / nv
    return Q


def inv_sqrt(A):
    """``A^{-1/2}`` for a Hermitian positive-definite matrix."""
    w, U = herm_eig(A)
    if w[0] <= 0:
        raise ValueError("matrix is not positive definite")
    return from_eig(1.0 / np.sqrt(w), U)


def logdet(A):
    """``log det A`` of a Hermitian positive-definite matrix via its
    eigenvalues."""
    w = herm_eig(A).eigenvalues
    if w[0] <= 0:
        raise ValueError("matrix is not positive definite")
    return float(np.sum(np.log(w)))
