"""Small complex linear-algebra helpers shared by every other module.

Vectors are 1-D complex numpy arrays, matrices are 2-D complex arrays.
"""

import numpy as np

__all__ = ['as_cvec', 'as_cmat', 'inner', 'norm', 'unit',
           'project_complement', 'complement_unit', 'null_space_basis',
           'NULL_RANK_RTOL']

# Singular values below this fraction of the largest one count as zero.
NULL_RANK_RTOL = 1e-10


def as_cvec(x, name='vector'):
    """Coerce `x` to a finite 1-D complex array."""
    v = np.atleast_1d(np.asarray(x, dtype=complex))
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if v.size < 1:
        raise ValueError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def as_cmat(x, name='matrix'):
    """Coerce `x` to a finite 2-D complex array."""
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def inner(a, b):
    """Return ``a^H b`` (conjugate-linear in the first argument)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(a):
    return float(np.linalg.norm(a))


def unit(a):
    """Normalize `a`; raises on the zero vector."""
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return np.asarray(a, dtype=complex) / n


def project_complement(target, anchor):
    """
    Project `target` onto the orthogonal complement of `anchor`.

    Returns ``(I - a a^H) target`` with ``a = anchor / ||anchor||``.
    """
    target = np.asarray(target, dtype=complex)
    a_hat = unit(anchor)
    if a_hat.shape != target.shape:
        raise ValueError(
            f"dimension mismatch: {target.shape} vs {a_hat.shape}")
    return target - a_hat * np.vdot(a_hat, target)


def complement_unit(target, anchor, collinear_eps):
    """
    Normalized complement of `target` against `anchor`.

    Returns None when the complement norm is below
    ``collinear_eps * ||target||`` (the two vectors are parallel).
    """
    p = project_complement(target, anchor)
    # One re-orthogonalization pass; the first pass loses orthogonality
    # when target is nearly parallel to anchor.
    p = project_complement(p, anchor)
    pn = norm(p)
    if pn <= collinear_eps * norm(target):
        return None
    return p / pn


def null_space_basis(m, rtol=NULL_RANK_RTOL):
    """
    Orthonormal basis of the right null space of `m`.

    Parameters
    ----------
    m : array_like, shape (rows, cols)
    rtol : float
        Singular values ``<= rtol * s_max`` are treated as zero.

    Returns
    -------
    V : ndarray, shape (cols, cols - rank)
        Columns span ``{x : m x = 0}``. Zero columns when the kernel is
        trivial.
    """
    m = as_cmat(m)
    cols = m.shape[1]
    if m.size == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(m)
    s_max = s[0] if s.size else 0.0
    if s_max == 0.0:
        return np.eye(cols, dtype=complex)
    rank = int(np.sum(s > rtol * s_max))
    return vh[rank:].conj().T.copy()
