"""Closed-form field dynamics with cavity decay.

Each dressed branch still drives a coherent state, now with a saturating
amplitude ``alpha' = -i Omega1 g1 (1 - e^{-kappa t}) / (2 u kappa)``.  Photon
leakage reveals which branch emitted, shrinking the branch coherence by the
factor ``q``.  Everything that can underflow (``q``, ``P1``, ``P2`` and their
products) is handled through logarithms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModeError, LosslessRegimeError
from .lossless import CoherentPair, _check_time, _clamped, coherent_amplitudes
from .model import ModelParams

# below this kappa*t the decay-shape function is summed as a power series
_SERIES_CUTOFF = 0.1


def lossy_amplitudes(params: ModelParams, t: float) -> CoherentPair:
    """Damped coherent amplitudes of both modes.

    Raises
    ------
    LosslessRegimeError
        If ``params.kappa`` is zero; :func:`field_amplitudes` handles that limit.
    """
    t = _check_time(t)
    if params.kappa <= 0.0:
        raise LosslessRegimeError("kappa must be > 0 for the lossy amplitudes; use coherent_amplitudes")
    k = params.kappa
    s = -math.expm1(-k * t) / (2.0 * params.u * k)
    return CoherentPair(
        alpha=complex(0.0, -params.omega1 * params.g1 * s),
        beta=complex(0.0, -params.omega2 * params.g2 * s),
    )


def field_amplitudes(params: ModelParams, t: float) -> CoherentPair:
    """:func:`lossy_amplitudes`, falling back to the loss-free law when ``kappa == 0``."""
    if params.kappa == 0.0:
        return coherent_amplitudes(params, t)
    return lossy_amplitudes(params, t)


def _decay_shape(x: float) -> float:
    """``2x + 4e^{-x} - e^{-2x} - 3``, accurate for small ``x`` (it is ``O(x^3)``)."""
    if x < _SERIES_CUTOFF:
        # sum_{n>=3} (-1)^n (4 - 2^n) x^n / n!
        total = 0.0
        term = x * x / 2.0
        for n in range(3, 30):
            term *= x / n
            total += (-1) ** n * (4.0 - 2.0 ** n) * term
        return total
    return 2.0 * x + 4.0 * math.exp(-x) - math.exp(-2.0 * x) - 3.0


def log_decoherence_factor(params: ModelParams, t: float) -> float:
    """Natural log of :func:`decoherence_factor`."""
    t = _check_time(t)
    k = params.kappa
    weight = ((params.omega1 * params.g1) ** 2 + (params.omega2 * params.g2) ** 2) / params.u ** 2
    if k == 0.0:
        return 0.0
    x = k * t
    if x < 1e-4:
        # leading term, (2/3) x^3 / (2 kappa^2), written without the 1/kappa^2 blow-up
        return -weight * k * t ** 3 / 3.0 * (1.0 - 0.75 * x)
    return -weight / (2.0 * k * k) * _decay_shape(x)


def decoherence_factor(params: ModelParams, t: float) -> float:
    """Branch-coherence factor ``q`` in ``(0, 1]``; exactly 1 for ``kappa == 0``."""
    return math.exp(log_decoherence_factor(params, t))


@dataclass(frozen=True)
class DressedDensity:
    """Atom-field density ``1/2 [|B,a',b'><B,a',b'| + |C,-a',-b'><C,-a',-b'| - q(...)]``.

    Kept symbolic: the two branches are coherent products labelled by
    :attr:`pair` and its negation, and the coherence carries
    ``-q e^{-2i phase}``.
    """

    pair: CoherentPair
    q: float
    phase: float

    def trace(self) -> float:
        # <C|B> = 0, so only the two diagonal branches contribute
        return 0.5 * (1.0 + 1.0)

    def off_diagonal_norm(self) -> float:
        """Hilbert-Schmidt norm of the ``B``-``C`` coherence block."""
        return 0.5 * self.q

    def to_fock(self, params: ModelParams, d1: int, d2: int, frame: str = "lab") -> np.ndarray:
        """Dense density over ``atom x mode1 x mode2`` in bare atomic coordinates.

        ``frame="lab"`` keeps the ``e^{-2i phase}`` coherence phase;
        ``frame="interaction"`` drops it (the picture rotating with the drives).
        """
        from .fock import coherent_vector
        from .model import dressed_frame

        fr = dressed_frame(params)
        a, b = self.pair.alpha, self.pair.beta
        kb = np.kron(fr.ket("B"), np.kron(coherent_vector(a, d1), coherent_vector(b, d2)))
        kc = np.kron(fr.ket("C"), np.kron(coherent_vector(-a, d1), coherent_vector(-b, d2)))
        ph = cmath.exp(-2j * self.phase) if frame == "lab" else 1.0
        coh = -self.q * ph * np.outer(kb, kc.conj())
        return 0.5 * (np.outer(kb, kb.conj()) + np.outer(kc, kc.conj()) + coh + coh.conj().T)


def dressed_density(params: ModelParams, t: float) -> DressedDensity:
    """Normalised atom-field state for an atom injected in ``|a>``; valid for any ``kappa >= 0``."""
    return DressedDensity(
        pair=field_amplitudes(params, t),
        q=decoherence_factor(params, t),
        phase=params.u * float(t),
    )


@dataclass(frozen=True)
class LossyFieldState:
    """Field density conditioned on detecting the atom in ``|a>``."""

    pair: CoherentPair
    q: float
    phase: float
    S: float
    P1: float
    P2: float

    def to_fock(self, d1: int, d2: int) -> np.ndarray:
        from .fock import coherent_vector

        a, b = self.pair.alpha, self.pair.beta
        kp = np.kron(coherent_vector(a, d1), coherent_vector(b, d2))
        km = np.kron(coherent_vector(-a, d1), coherent_vector(-b, d2))
        coh = self.q * cmath.exp(-2j * self.phase) * np.outer(kp, km.conj())
        return (np.outer(kp, kp.conj()) + np.outer(km, km.conj()) + coh + coh.conj().T) / self.S


def _log_overlaps(pair: CoherentPair) -> tuple[float, float]:
    return -2.0 * abs(pair.alpha) ** 2, -2.0 * abs(pair.beta) ** 2


def normalization_from_parts(pair: CoherentPair, q: float, phase: float) -> float:
    """``S = 2 + 2 q P1 P2 cos 2 phase`` via log space."""
    l1, l2 = _log_overlaps(pair)
    if q <= 0.0:
        return 2.0
    return 2.0 * (1.0 + math.exp(math.log(q) + l1 + l2) * math.cos(2.0 * phase))


def projected_mixed_state(params: ModelParams, t: float) -> LossyFieldState:
    """Mixed two-mode field state after detecting the atom in ``|a>``."""
    pair = field_amplitudes(params, t)
    q = decoherence_factor(params, t)
    phase = params.u * float(t)
    l1, l2 = _log_overlaps(pair)
    return LossyFieldState(pair=pair, q=q, phase=phase, S=normalization_from_parts(pair, q, phase),
                           P1=math.exp(l1), P2=math.exp(l2))


def _mode_norms(pair: CoherentPair) -> tuple[float, float]:
    m1 = math.sqrt(-math.expm1(-4.0 * abs(pair.alpha) ** 2))
    m2 = math.sqrt(-math.expm1(-4.0 * abs(pair.beta) ** 2))
    if m1 == 0.0 or m2 == 0.0:
        raise DegenerateModeError(
            "a coherent amplitude is zero, so |x> and |-x> coincide and the qubit basis is undefined"
        )
    return m1, m2


def field_density_from_parts(pair: CoherentPair, q: float, phase: float) -> np.ndarray:
    """4x4 field density in the basis ``|0> = |x>``, ``|1> = (|-x> - P|x>)/M`` of each mode."""
    m1, m2 = _mode_norms(pair)
    l1, l2 = _log_overlaps(pair)
    p1, p2 = math.exp(l1), math.exp(l2)
    pp = math.exp(l1 + l2)
    S = normalization_from_parts(pair, q, phase)
    z = pp + q * cmath.exp(-2j * phase)
    zc = z.conjugate()
    rho = np.array(
        [
            [1.0 + pp * pp + 2.0 * q * pp * math.cos(2.0 * phase), p1 * m2 * z, p2 * m1 * z, m1 * m2 * z],
            [p1 * m2 * zc, p1 * p1 * m2 * m2, m1 * m2 * pp, p1 * m1 * m2 * m2],
            [p2 * m1 * zc, m1 * m2 * pp, p2 * p2 * m1 * m1, p2 * m1 * m1 * m2],
            [m1 * m2 * zc, p1 * m1 * m2 * m2, m1 * m1 * m2 * p2, m1 * m1 * m2 * m2],
        ],
        dtype=complex,
    )
    return rho / S


def field_density_matrix(params: ModelParams, t: float) -> np.ndarray:
    """Two-qubit density of :func:`projected_mixed_state`.

    Raises
    ------
    DegenerateModeError
        At ``t = 0``, where both amplitudes vanish.
    """
    return field_density_from_parts(field_amplitudes(params, t), decoherence_factor(params, t),
                                    params.u * float(t))


def concurrence_from_parts(pair: CoherentPair, q: float, phase: float) -> float:
    """``C = 2 M1 M2 q / S``."""
    m1, m2 = _mode_norms(pair)
    return _clamped(2.0 * m1 * m2 * q / normalization_from_parts(pair, q, phase))


def concurrence_lossy(params: ModelParams, t: float) -> float:
    """Concurrence of the field after detecting the atom in ``|a>``."""
    return concurrence_from_parts(field_amplitudes(params, t), decoherence_factor(params, t),
                                  params.u * float(t))


def lossy_photon_numbers(params: ModelParams, t: float) -> tuple[float, float]:
    """``N_i = 2|x_i|^2 (1 - q P1 P2 cos 2ut) / S`` for the conditioned field."""
    pair = field_amplitudes(params, t)
    q = decoherence_factor(params, t)
    phase = params.u * float(t)
    l1, l2 = _log_overlaps(pair)
    c = math.exp(math.log(q) + l1 + l2) * math.cos(2.0 * phase) if q > 0 else 0.0
    S = 2.0 * (1.0 + c)
    factor = 2.0 * (1.0 - c) / S
    return abs(pair.alpha) ** 2 * factor, abs(pair.beta) ** 2 * factor


def lossy_detection_probabilities(params: ModelParams, t: float) -> dict[str, float]:
    """Atomic outcome probabilities read off the normalised dressed density.

    ``P(a) = S/4``; the remaining ``1 - S/4`` splits between ``b`` and ``c``
    in the ratio ``Omega2^2 : Omega1^2``.
    """
    S = projected_mixed_state(params, t).S
    u2 = params.u ** 2
    rest = 1.0 - S / 4.0
    return {"a": S / 4.0, "b": rest * params.omega2 ** 2 / u2, "c": rest * params.omega1 ** 2 / u2}
