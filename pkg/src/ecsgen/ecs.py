"""Entanglement of two-mode superpositions of coherent products.

A state ``mu|x1, y1> + nu|x2, y2>`` lives, mode by mode, in the span of two
coherent states.  Orthonormalising each span turns it into a two-qubit state
whose entanglement is measured by the Wootters concurrence.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError, DensityValidationError, DomainError

#: Hermiticity and trace tolerance of :func:`check_density`.
DENSITY_ATOL = 1e-12
#: Eigenvalues of a density matrix above ``-PSD_ATOL`` are treated as zero.
PSD_ATOL = 1e-10

_SIGMA_YY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)


def coherent_overlap(x: complex, y: complex) -> complex:
    """Inner product ``<x|y>`` of two normalised coherent states."""
    x = complex(x)
    y = complex(y)
    return cmath.exp(-0.5 * abs(x) ** 2 - 0.5 * abs(y) ** 2 + x.conjugate() * y)


def _one_minus_overlap_sq(x: complex, y: complex) -> float:
    # |<x|y>|^2 = exp(-|x - y|^2); expm1 keeps precision for nearby labels
    return -math.expm1(-abs(complex(x) - complex(y)) ** 2)


@dataclass(frozen=True)
class ECSSpec:
    """Normalised state ``mu|alpha, beta> + nu|gamma, delta>``.

    ``(alpha, gamma)`` are the labels of mode 1 and ``(beta, delta)`` those of
    mode 2.  Construction fails unless the state has unit norm to 1e-10; use
    :meth:`normalized` to rescale arbitrary weights.
    """

    mu: complex
    nu: complex
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        for name in ("mu", "nu", "alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        n = self.norm_sq()
        if abs(n - 1.0) > 1e-10:
            raise DomainError(f"ECS is not normalised: norm^2 = {n!r}")

    def norm_sq(self) -> float:
        cross = self.mu.conjugate() * self.nu * coherent_overlap(self.alpha, self.gamma) \
            * coherent_overlap(self.beta, self.delta)
        return abs(self.mu) ** 2 + abs(self.nu) ** 2 + 2.0 * cross.real

    @classmethod
    def normalized(cls, mu, nu, alpha, beta, gamma, delta) -> "ECSSpec":
        mu, nu = complex(mu), complex(nu)
        cross = mu.conjugate() * nu * coherent_overlap(alpha, gamma) * coherent_overlap(beta, delta)
        n = abs(mu) ** 2 + abs(nu) ** 2 + 2.0 * cross.real
        if not n > 0:
            raise DomainError("weights describe the zero vector")
        s = 1.0 / math.sqrt(n)
        return cls(mu * s, nu * s, alpha, beta, gamma, delta)


@dataclass(frozen=True)
class OverlapData:
    """Single-mode overlaps and the norms of the orthogonalised ``|1>`` vectors."""

    p1: complex
    p2: complex
    m1: float
    m2: float


def overlap_data(spec: ECSSpec, p2_convention: str = "corrected") -> OverlapData:
    """Overlaps used by the qubit encoding.

    ``p2_convention="corrected"`` takes ``p2 = <beta|delta>`` (the two labels
    of mode 2).  ``"printed"`` takes ``p2 = <gamma|beta>`` and exists only for
    auditing that alternative; it mixes the two modes.
    """
    p1 = coherent_overlap(spec.alpha, spec.gamma)
    if p2_convention == "corrected":
        p2 = coherent_overlap(spec.beta, spec.delta)
        m2_sq = _one_minus_overlap_sq(spec.beta, spec.delta)
    elif p2_convention == "printed":
        p2 = coherent_overlap(spec.gamma, spec.beta)
        m2_sq = _one_minus_overlap_sq(spec.gamma, spec.beta)
    else:
        raise DomainError(f"unknown p2 convention {p2_convention!r}")
    m1_sq = _one_minus_overlap_sq(spec.alpha, spec.gamma)
    return OverlapData(p1=p1, p2=p2, m1=math.sqrt(m1_sq), m2=math.sqrt(m2_sq))


def qubit_map(spec: ECSSpec) -> tuple[np.ndarray, OverlapData]:
    """Density matrix of ``spec`` in the orthonormalised two-qubit basis.

    Mode 1 uses ``|0> = |alpha>``, ``|1> = (|gamma> - p1|alpha>)/m1``; mode 2
    likewise with ``beta`` and ``delta``.  Basis order is
    ``|00>, |01>, |10>, |11>``.

    Raises
    ------
    DegenerateModeError
        If the two labels of either mode coincide.
    """
    ov = overlap_data(spec)
    if ov.m1 == 0.0 or ov.m2 == 0.0:
        raise DegenerateModeError(
            f"coherent labels coincide in mode {1 if ov.m1 == 0.0 else 2}; "
            "that mode carries no which-branch information"
        )
    # |gamma> = p1|0> + m1|1>, |delta> = p2|0> + m2|1>
    mode1 = np.array([ov.p1, ov.m1])
    mode2 = np.array([ov.p2, ov.m2])
    psi = spec.nu * np.kron(mode1, mode2)
    psi[0] += spec.mu
    return np.outer(psi, psi.conj()), ov


def check_density(rho, atol: float = DENSITY_ATOL, psd_atol: float = PSD_ATOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityValidationError(f"expected a square matrix, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > atol:
        raise DensityValidationError(f"matrix is not Hermitian (max deviation {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise DensityValidationError(f"trace is {tr.real:.15g}, expected 1")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lo < -psd_atol:
        raise DensityValidationError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
    return rho


def wootters_concurrence(rho, validate: bool = True) -> float:
    """Concurrence of a two-qubit density matrix.

    The square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)`` are
    obtained as singular values of ``W^T (Y x Y) W`` with ``rho = W W^+``,
    which avoids square roots of rounding-level eigenvalues.
    """
    rho = check_density(rho) if validate else np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DensityValidationError(f"two-qubit density must be 4x4, got {rho.shape}")
    evals, evecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    w = evecs * np.sqrt(np.clip(evals, 0.0, None))
    lam = np.linalg.svd(w.T @ _SIGMA_YY @ w, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(1.0, max(0.0, c)))


def ecs_concurrence_closed_form(spec: ECSSpec, p2_convention: str = "corrected") -> float:
    """``C = 2|mu nu| m1 m2`` for a normalised two-branch coherent superposition."""
    ov = overlap_data(spec, p2_convention)
    if p2_convention == "printed":
        # (1 - p2**2) is complex for complex p2; report its modulus for audit purposes
        return 2.0 * abs(spec.mu * spec.nu) * math.sqrt(ov.m1 ** 2 * abs(1.0 - ov.p2 ** 2))
    return 2.0 * abs(spec.mu * spec.nu) * ov.m1 * ov.m2
