"""Closed-form dynamics of the ideal (loss-free) cavity.

Under the secular Hamiltonian the atom, prepared in ``|a>``, splits into the
dressed branches ``|B>`` and ``|C>`` which displace the vacuum fields in
opposite directions.  Measuring the atom then leaves the two modes in an
even (``plus``) or odd (``minus``) entangled coherent superposition.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .ecs import ECSSpec
from .errors import DegenerateStateError, DomainError
from .model import Branch, ModelParams

logger = logging.getLogger(__name__)

#: Default map from detected bare level to the branch it selects.
OUTCOME_BRANCH = {"a": Branch.PLUS, "b": Branch.MINUS, "c": Branch.MINUS}

_CLAMP_LOG_TOL = 1e-9


@dataclass(frozen=True)
class CoherentPair:
    """Coherent amplitudes of cavity modes 1 and 2."""

    alpha: complex
    beta: complex

    @property
    def mean_photons(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2

    def negated(self) -> "CoherentPair":
        return CoherentPair(-self.alpha, -self.beta)


@dataclass(frozen=True)
class ProjectedPureECS:
    """Normalised field state ``(e^{-iut}|alpha, beta> +/- e^{iut}|-alpha, -beta>) / sqrt(M)``."""

    pair: CoherentPair
    sign: Branch
    phase: float
    norm: float

    def to_ecs_spec(self) -> ECSSpec:
        s = 1.0 / math.sqrt(self.norm)
        return ECSSpec(
            mu=cmath.exp(-1j * self.phase) * s,
            nu=self.sign.sign * cmath.exp(1j * self.phase) * s,
            alpha=self.pair.alpha,
            beta=self.pair.beta,
            gamma=-self.pair.alpha,
            delta=-self.pair.beta,
        )

    def to_fock(self, d1: int, d2: int) -> np.ndarray:
        """State vector over ``mode1 x mode2`` in a truncated Fock basis (not renormalised)."""
        from .fock import coherent_vector

        a, b = self.pair.alpha, self.pair.beta
        plus = np.kron(coherent_vector(a, d1), coherent_vector(b, d2))
        minus = np.kron(coherent_vector(-a, d1), coherent_vector(-b, d2))
        return (cmath.exp(-1j * self.phase) * plus
                + self.sign.sign * cmath.exp(1j * self.phase) * minus) / math.sqrt(self.norm)


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0 or not math.isfinite(t):
        raise DomainError(f"time must be a finite non-negative number, got {t!r}")
    return t


def coherent_amplitudes(params: ModelParams, t: float) -> CoherentPair:
    """``alpha = -i Omega1 g1 t / 2u`` and ``beta = -i Omega2 g2 t / 2u``."""
    t = _check_time(t)
    u = params.u
    return CoherentPair(
        alpha=complex(0.0, -params.omega1 * params.g1 * t / (2.0 * u)),
        beta=complex(0.0, -params.omega2 * params.g2 * t / (2.0 * u)),
    )


def branch_norm(sign: Branch | str, mean_photons: float, phase: float) -> float:
    """``M = 2[1 +/- cos(2 phase) exp(-2 mean_photons)]`` without cancellation near zero.

    Uses ``1 + cos(2x) e = (1 - e) + 2e cos^2 x`` and the ``sin^2`` analogue.
    """
    sign = Branch.coerce(sign)
    e = math.exp(-2.0 * mean_photons)
    trig = math.cos(phase) if sign is Branch.PLUS else math.sin(phase)
    return 2.0 * (-math.expm1(-2.0 * mean_photons) + 2.0 * e * trig * trig)


def projected_state(params: ModelParams, t: float, sign: Branch | str | None = None) -> ProjectedPureECS:
    """Field state left after the atom is detected in a level selecting ``sign``.

    ``sign`` defaults to ``params.sign``; see :data:`OUTCOME_BRANCH` for the
    level-to-branch map.

    Raises
    ------
    DegenerateStateError
        If the branch has zero norm (the ``minus`` branch at ``t = 0``).
    """
    sign = params.sign if sign is None else Branch.coerce(sign)
    pair = coherent_amplitudes(params, t)
    phase = params.u * float(t)
    m = branch_norm(sign, pair.mean_photons, phase)
    if m <= 0.0:
        raise DegenerateStateError(
            f"the {sign.value} branch is unpopulated at t={t!r} (M = 0)"
        )
    return ProjectedPureECS(pair=pair, sign=sign, phase=phase, norm=m)


def projected_state_for_outcome(params: ModelParams, t: float, outcome: str,
                                outcome_branch: dict | None = None) -> ProjectedPureECS:
    """Projected state for a detected bare level ``a``, ``b`` or ``c``."""
    table = OUTCOME_BRANCH if outcome_branch is None else outcome_branch
    try:
        sign = table[outcome]
    except KeyError:
        raise DomainError(f"unknown outcome {outcome!r}") from None
    return projected_state(params, t, sign)


def detection_probabilities(params: ModelParams, t: float) -> dict[str, float]:
    """Probabilities of detecting the atom in ``a``, ``b`` and ``c`` at time ``t``.

    The ``|a>`` amplitude carries weight 1/2 and the ``|b>`` (``|c>``)
    amplitudes carry ``Omega2/2u`` (``Omega1/2u``) in front of the
    corresponding even or odd field superposition.
    """
    pair = coherent_amplitudes(params, t)
    phase = params.u * float(t)
    m_plus = branch_norm(Branch.PLUS, pair.mean_photons, phase)
    m_minus = branch_norm(Branch.MINUS, pair.mean_photons, phase)
    u = params.u
    return {
        "a": m_plus / 4.0,
        "b": (params.omega2 / (2.0 * u)) ** 2 * m_minus,
        "c": (params.omega1 / (2.0 * u)) ** 2 * m_minus,
    }


def mean_photon_numbers(params: ModelParams, t: float, sign: Branch | str | None = None) -> tuple[float, float]:
    """Mean photon numbers of both modes in the projected state.

    The ``plus`` branch pairs ``M+`` with ``(1 - e cos 2ut)`` and the ``minus``
    branch pairs ``M-`` with ``(1 + e cos 2ut)``.
    """
    state = projected_state(params, t, sign)
    pair = state.pair
    e = math.exp(-2.0 * pair.mean_photons)
    factor = (1.0 - state.sign.sign * e * math.cos(2.0 * state.phase)) / state.norm
    return 2.0 * abs(pair.alpha) ** 2 * factor, 2.0 * abs(pair.beta) ** 2 * factor


def concurrence_lossless(params: ModelParams, t: float, sign: Branch | str | None = None) -> float:
    """Concurrence of the projected two-mode state.

    ``C = sqrt[(1 - exp(-4|alpha|^2))(1 - exp(-4|beta|^2))] / (M/2)``, clamped
    to ``[0, 1]``.
    """
    state = projected_state(params, t, sign)
    return _clamped(
        math.sqrt(-math.expm1(-4.0 * abs(state.pair.alpha) ** 2)
                  * -math.expm1(-4.0 * abs(state.pair.beta) ** 2)) / (0.5 * state.norm)
    )


def _clamped(c: float) -> float:
    if c > 1.0 + _CLAMP_LOG_TOL or c < -_CLAMP_LOG_TOL:
        logger.warning("concurrence %.12g outside [0, 1]; clamping", c)
    return min(1.0, max(0.0, c))
