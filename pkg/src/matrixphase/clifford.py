"""Exact Clifford-algebra core.

Gamma-matrix representations with metric signature (+,-,-,-), derived
alpha and sigma matrices, Dirac adjoints, and finite Lorentz spinor
transforms acting on 4x4 matrix-valued quantities.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "GammaRep",
    "GammaSet",
    "SpinorTransform",
    "METRIC",
    "build_gamma_set",
    "gamma_set_from_matrices",
    "algebra_reports",
    "anticommutator",
    "commutator",
    "dirac_adjoint",
    "mat_exp",
    "spin_transform",
]

# Minkowski metric, lower indices: eta_{mu nu} = diag(+1,-1,-1,-1).
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
METRIC.setflags(write=False)

_I2 = np.eye(2, dtype=complex)
_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class GammaRep(enum.Enum):
    DIRAC = "dirac"
    CHIRAL = "chiral"


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class GammaSet:
    """A gamma-matrix representation and its derived matrices.

    gamma[mu] carries an upper index; alpha[i-1] = gamma^0 gamma^i;
    sigma[mu][nu] = (i/2)[gamma^mu, gamma^nu].
    """

    rep: GammaRep
    gamma: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    alpha: tuple[np.ndarray, np.ndarray, np.ndarray]
    sigma: tuple[tuple[np.ndarray, ...], ...]
    metric: np.ndarray = METRIC

    @property
    def gamma0(self) -> np.ndarray:
        return self.gamma[0]


def build_gamma_set(rep: GammaRep = GammaRep.DIRAC) -> GammaSet:
    """Construct the standard Dirac- or chiral-basis gamma matrices."""
    zero = np.zeros((2, 2), dtype=complex)
    if rep is GammaRep.DIRAC:
        g0 = np.block([[_I2, zero], [zero, -_I2]])
    elif rep is GammaRep.CHIRAL:
        g0 = np.block([[zero, _I2], [_I2, zero]])
    else:
        raise ValueError(f"unknown representation {rep!r}")
    spatial = [np.block([[zero, s], [-s, zero]]) for s in _PAULI]
    gamma = tuple(_freeze(g) for g in [g0] + spatial)
    alpha = tuple(_freeze(gamma[0] @ gamma[i]) for i in (1, 2, 3))
    sigma = tuple(
        tuple(_freeze(0.5j * (gamma[m] @ gamma[n] - gamma[n] @ gamma[m])) for n in range(4))
        for m in range(4)
    )
    return GammaSet(rep=rep, gamma=gamma, alpha=alpha, sigma=sigma)


def gamma_set_from_matrices(gamma, rep: GammaRep = GammaRep.DIRAC) -> GammaSet:
    """Derive alpha and sigma tables from four explicit gamma matrices.

    No algebra relations are checked here; feed the result to
    algebra_reports to validate (or to demonstrate a violation).
    """
    gamma = tuple(_freeze(np.asarray(g)) for g in gamma)
    if len(gamma) != 4 or any(g.shape != (4, 4) for g in gamma):
        raise ValueError("need four 4x4 matrices")
    alpha = tuple(_freeze(gamma[0] @ gamma[i]) for i in (1, 2, 3))
    sigma = tuple(
        tuple(_freeze(0.5j * (gamma[m] @ gamma[n] - gamma[n] @ gamma[m])) for n in range(4))
        for m in range(4)
    )
    return GammaSet(rep=rep, gamma=gamma, alpha=alpha, sigma=sigma)


def algebra_reports(gset: GammaSet, tol: float = 1e-14):
    """Asserted claim reports for the defining algebra relations."""
    from .report import ClaimReport

    label = gset.rep.value
    eye = np.eye(4)
    reports = []

    res = max(
        float(np.abs(anticommutator(gset.gamma[m], gset.gamma[n]) - 2 * METRIC[m, n] * eye).max())
        for m in range(4)
        for n in range(4)
    )
    reports.append(ClaimReport.checked("gamma_anticommutator", label, res, tol))

    res = max(
        float(np.abs(anticommutator(gset.alpha[i], gset.alpha[j]) - 2 * (i == j) * eye).max())
        for i in range(3)
        for j in range(3)
    )
    reports.append(ClaimReport.checked("alpha_anticommutator", label, res, tol))

    res = max(float(np.abs(a - a.conj().T).max()) for a in gset.alpha)
    reports.append(ClaimReport.checked("alpha_hermitian", label, res, tol))

    res = max(
        float(np.abs(dirac_adjoint(g, gset.gamma0) - g).max()) for g in gset.gamma
    )
    reports.append(ClaimReport.checked("gamma_dirac_hermitian", label, res, tol))

    res = max(
        float(np.abs(gset.sigma[m][n] + gset.sigma[n][m]).max())
        for m in range(4)
        for n in range(4)
    )
    reports.append(ClaimReport.checked("sigma_antisymmetric", label, res, tol))

    res = max(
        float(
            np.abs(
                gset.sigma[m][n]
                - 0.5j * (gset.gamma[m] @ gset.gamma[n] - gset.gamma[n] @ gset.gamma[m])
            ).max()
        )
        for m in range(4)
        for n in range(4)
    )
    reports.append(ClaimReport.checked("sigma_definition", label, res, tol))
    return reports


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB + BA."""
    return a @ b + b @ a


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """AB - BA."""
    return a @ b - b @ a


def dirac_adjoint(m: np.ndarray, gamma0: np.ndarray) -> np.ndarray:
    """gamma^0 M^dagger gamma^0.

    An involution; a matrix fixed by it is called Dirac-Hermitian.
    """
    return gamma0 @ m.conj().T @ gamma0


def mat_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential via eigendecomposition when well conditioned.

    Falls back to scaling-and-squaring for defective or ill-conditioned
    eigenvector matrices (the Lorentz generators are not normal in general).
    """
    try:
        w, v = np.linalg.eig(m)
        if np.linalg.cond(v) < 1e8:
            return (v * np.exp(w)) @ np.linalg.inv(v)
    except np.linalg.LinAlgError:
        pass
    return scipy.linalg.expm(m)


@dataclass(frozen=True)
class SpinorTransform:
    """Double-cover spinor transform S with its vector representation Lambda.

    Satisfies Sinv @ gamma^mu @ S = Lambda^mu_nu gamma^nu.
    """

    S: np.ndarray
    Sinv: np.ndarray
    Lambda: np.ndarray


def spin_transform(omega: np.ndarray, gset: GammaSet) -> SpinorTransform:
    """Finite Lorentz transform from an antisymmetric parameter matrix.

    omega holds the lower-index parameters omega_{mu nu}; the spinor part is
    S = exp(-(i/4) omega_{mu nu} sigma^{mu nu}) and the vector part is
    Lambda = exp(eta . omega) acting on upper indices.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (4, 4):
        raise ValueError("omega must be a 4x4 real matrix")
    if not np.allclose(omega, -omega.T, atol=1e-12):
        raise ValueError("omega must be antisymmetric")
    gen = sum(
        omega[m, n] * gset.sigma[m][n] for m in range(4) for n in range(4)
    )
    S = mat_exp(-0.25j * gen)
    Sinv = mat_exp(0.25j * gen)
    Lam = np.real(scipy.linalg.expm(METRIC @ omega))
    return SpinorTransform(S=_freeze(S), Sinv=_freeze(Sinv), Lambda=_freeze(Lam))
