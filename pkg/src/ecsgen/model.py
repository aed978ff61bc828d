"""Physical parameters and the dressed-state algebra of the driven V atom.

Atomic basis ordering is ``(a, b, c)`` throughout the package: ``a`` is the
common lower level, ``c`` couples to cavity mode 1 and ``b`` to mode 2.  The
classical drives mix the three levels into the dressed states ``(A, B, C)``
with energies ``(0, u, -u)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

ATOM_LABELS = ("a", "b", "c")
DRESSED_LABELS = ("A", "B", "C")

#: min(Omega)/max(g) at or above which the secular approximation is trusted.
STRONG_DRIVING_RATIO = 10.0


class Branch(str, enum.Enum):
    """Sign of the superposition selected by the atomic measurement."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1

    @classmethod
    def coerce(cls, value: "Branch | str | int") -> "Branch":
        if isinstance(value, cls):
            return value
        if value in (1, "+", "+1"):
            return cls.PLUS
        if value in (-1, "-", "-1"):
            return cls.MINUS
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown branch {value!r}; expected 'plus' or 'minus'") from None


@dataclass(frozen=True)
class ModelParams:
    """Couplings, drive strengths and cavity decay.

    All rates share one unit; by convention ``g1 = 1`` so times are in units
    of ``1/g1``.

    Parameters
    ----------
    g1, g2 : float
        Atom-cavity couplings of mode 1 (``a <-> c``) and mode 2 (``a <-> b``).
    omega1, omega2 : float
        Rabi frequencies of the classical drives on the same transitions.
    kappa : float
        Common amplitude decay rate of both cavity modes.
    sign : Branch or str
        Measurement branch used by the lossless projected state.
    """

    g1: float = 1.0
    g2: float = 1.0
    omega1: float = 100.0
    omega2: float = 100.0
    kappa: float = 0.0
    sign: Branch = Branch.PLUS
    strong_driving: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("g1", "g2", "omega1", "omega2", "kappa"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.g1 <= 0 or self.g2 <= 0:
            raise DomainError(f"couplings must be positive, got g1={self.g1}, g2={self.g2}")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise DomainError(
                f"Rabi frequencies must be positive, got omega1={self.omega1}, omega2={self.omega2}"
            )
        if self.kappa < 0:
            raise DomainError(f"kappa must be >= 0, got {self.kappa}")
        object.__setattr__(self, "sign", Branch.coerce(self.sign))
        ratio = min(self.omega1, self.omega2) / max(self.g1, self.g2)
        object.__setattr__(self, "strong_driving", ratio >= STRONG_DRIVING_RATIO)

    @property
    def u(self) -> float:
        return rabi_norm(self.omega1, self.omega2)

    def replace(self, **changes) -> "ModelParams":
        kwargs = {k: getattr(self, k) for k in ("g1", "g2", "omega1", "omega2", "kappa", "sign")}
        kwargs.update(changes)
        return ModelParams(**kwargs)

    def to_dict(self) -> dict:
        return {
            "g1": self.g1,
            "g2": self.g2,
            "omega1": self.omega1,
            "omega2": self.omega2,
            "kappa": self.kappa,
            "sign": self.sign.value,
        }


def rabi_norm(omega1: float, omega2: float) -> float:
    """Return ``u = sqrt(omega1**2 + omega2**2)``, the dressed-state splitting."""
    if not omega1 > 0 or not omega2 > 0:
        raise DomainError(f"Rabi frequencies must be positive, got ({omega1}, {omega2})")
    return math.hypot(omega1, omega2)


@dataclass(frozen=True)
class DressedFrame:
    """Orthogonal change of basis from bare ``(a, b, c)`` to dressed ``(A, B, C)``.

    Row ``X`` of :attr:`basis_change` holds the bare coefficients of ``|X>``,
    so ``basis_change @ v`` converts bare coordinates to dressed ones.
    """

    u: float
    basis_change: np.ndarray
    eigenvalues: tuple

    def forward(self, v) -> np.ndarray:
        """Bare coordinates -> dressed coordinates."""
        return self.basis_change @ np.asarray(v)

    def inverse(self, w) -> np.ndarray:
        """Dressed coordinates -> bare coordinates."""
        return self.basis_change.T @ np.asarray(w)

    def ket(self, label: str) -> np.ndarray:
        """Bare-basis vector of the dressed state ``A``, ``B`` or ``C``."""
        return self.basis_change[_dressed_index(label)].copy()


def dressed_frame(params: ModelParams) -> DressedFrame:
    """Build the dressed frame that diagonalises the drive Hamiltonian."""
    w1, w2 = params.omega1, params.omega2
    u = params.u
    s = 1.0 / (math.sqrt(2.0) * u)
    basis_change = np.array(
        [
            [0.0, -w1 / u, w2 / u],
            [u * s, w2 * s, w1 * s],
            [-u * s, w2 * s, w1 * s],
        ]
    )
    basis_change.setflags(write=False)
    return DressedFrame(u=u, basis_change=basis_change, eigenvalues=(0.0, u, -u))


def atomic_in_dressed(state_label: str, frame: DressedFrame) -> np.ndarray:
    """Expansion coefficients of a bare level over ``(|A>, |B>, |C>)``."""
    return frame.basis_change[:, _atom_index(state_label)].copy()


def drive_hamiltonian(params: ModelParams) -> np.ndarray:
    """3x3 drive Hamiltonian ``Omega1(|c><a| + h.c.) + Omega2(|b><a| + h.c.)`` in the bare basis."""
    h0 = np.zeros((3, 3))
    h0[2, 0] = h0[0, 2] = params.omega1
    h0[1, 0] = h0[0, 1] = params.omega2
    return h0


def _atom_index(label: str) -> int:
    try:
        return ATOM_LABELS.index(label)
    except ValueError:
        raise DomainError(f"unknown atomic level {label!r}; expected one of {ATOM_LABELS}") from None


def _dressed_index(label: str) -> int:
    try:
        return DRESSED_LABELS.index(label)
    except ValueError:
        raise DomainError(f"unknown dressed level {label!r}; expected one of {DRESSED_LABELS}") from None
