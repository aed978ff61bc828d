"""Brute-force dynamics in a truncated Fock space.

The composite space is ``atom (3) x mode1 (d1) x mode2 (d2)`` with row-major
ordering, atomic levels in the bare order ``(a, b, c)``.  Operators are
scipy sparse matrices; states are plain numpy arrays (vectors for unitary
runs, square matrices for master-equation runs).

This module is the independent check on the closed forms in
:mod:`ecsgen.lossless` and :mod:`ecsgen.lossy`; it shares only the parameter
and dressed-frame definitions with them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.special import gammainc

from .errors import DomainError, TruncationError, ZeroProbabilityError
from .model import ATOM_LABELS, DRESSED_LABELS, DressedFrame, ModelParams, dressed_frame, drive_hamiltonian

#: Population allowed in the top two Fock levels of a mode.
TAIL_THRESHOLD = 1e-6
#: Leakage out of the coherent-state subspace above which a warning is attached.
LEAKAGE_WARN = 0.05


class SubspaceLeakageWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TruncationSpec:
    """Fock cutoffs of the two cavity modes."""

    d1: int
    d2: int

    def __post_init__(self):
        for name in ("d1", "d2"):
            v = getattr(self, name)
            if int(v) != v or v < 2:
                raise DomainError(f"{name} must be an integer >= 2, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def field_dim(self) -> int:
        return self.d1 * self.d2

    @property
    def dim(self) -> int:
        return 3 * self.d1 * self.d2

    @property
    def shape(self) -> tuple[int, int, int]:
        return 3, self.d1, self.d2


def required_dim(amplitude: complex) -> int:
    """Fock cutoff ``ceil(|x|) + 7 sqrt(ceil(|x|))`` for a coherent amplitude ``x``."""
    n = math.ceil(abs(amplitude))
    return max(2, math.ceil(n + 7.0 * math.sqrt(n)))


def minimal_dim(amplitude: complex, tol: float = 1e-8) -> int:
    """Smallest cutoff whose Poisson tail beyond ``dim - 1`` is at most ``tol``."""
    nbar = abs(complex(amplitude)) ** 2
    d = 1
    while nbar > 0 and gammainc(d, nbar) > tol:
        d += 1
    return d


def _ladder(d: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, shape=(d, d), format="csr", dtype=complex)


@dataclass(frozen=True)
class OperatorSet:
    """Embedded ladder operators and atomic transition operators."""

    spec: TruncationSpec
    a1: sp.csr_matrix
    a2: sp.csr_matrix
    identity: sp.csr_matrix = field(repr=False)

    def sigma(self, x: str, y: str) -> sp.csr_matrix:
        """Bare transition operator ``|x><y|`` for ``x, y`` in ``a, b, c``."""
        m = np.zeros((3, 3))
        m[ATOM_LABELS.index(x), ATOM_LABELS.index(y)] = 1.0
        return self._atomic(m)

    def dressed_sigma(self, frame: DressedFrame, x: str, y: str) -> sp.csr_matrix:
        """Dressed transition operator ``|X><Y|`` expressed in bare coordinates."""
        return self._atomic(np.outer(frame.ket(x), frame.ket(y)))

    def _atomic(self, m3: np.ndarray) -> sp.csr_matrix:
        return sp.kron(sp.csr_matrix(m3), sp.identity(self.spec.field_dim, format="csr"), format="csr")


def build_operators(spec: TruncationSpec) -> OperatorSet:
    """Truncated ladder operators embedded in ``atom x mode1 x mode2``."""
    i3 = sp.identity(3, format="csr")
    a1 = sp.kron(i3, sp.kron(_ladder(spec.d1), sp.identity(spec.d2)), format="csr")
    a2 = sp.kron(i3, sp.kron(sp.identity(spec.d1), _ladder(spec.d2)), format="csr")
    return OperatorSet(spec=spec, a1=a1, a2=a2, identity=sp.identity(spec.dim, format="csr", dtype=complex))


def build_h0(params: ModelParams, ops: OperatorSet) -> sp.csr_matrix:
    """Drive Hamiltonian acting on the atom only."""
    return ops._atomic(drive_hamiltonian(params)).astype(complex)


def build_h1(params: ModelParams, ops: OperatorSet) -> sp.csr_matrix:
    """Atom-cavity coupling ``g1(a1|c><a| + h.c.) + g2(a2|b><a| + h.c.)``."""
    t1 = params.g1 * (ops.a1 @ ops.sigma("c", "a"))
    t2 = params.g2 * (ops.a2 @ ops.sigma("b", "a"))
    return (t1 + t1.conj().T + t2 + t2.conj().T).tocsr()


def build_h_eff(params: ModelParams, ops: OperatorSet) -> sp.csr_matrix:
    """Secular Hamiltonian ``(1/2u)[W1 (a1 + a1^+) + W2 (a2 + a2^+)](|B><B| - |C><C|)``, ``Wi = Omega_i g_i``."""
    fr = dressed_frame(params)
    u = fr.u
    x1 = ops.a1 + ops.a1.conj().T
    x2 = ops.a2 + ops.a2.conj().T
    field_part = (params.omega1 * params.g1 * x1 + params.omega2 * params.g2 * x2) / (2.0 * u)
    z = ops.dressed_sigma(fr, "B", "B") - ops.dressed_sigma(fr, "C", "C")
    return (field_part @ z).tocsr()


class InteractionHamiltonian:
    """Time-dependent coupling in the frame rotating with the drives.

    ``H(t) = sum_k e^{i w_k t} O_k + h.c.`` with frequencies ``0, +/-u, +/-2u``;
    the zero-frequency part is the secular Hamiltonian.
    """

    def __init__(self, params: ModelParams, ops: OperatorSet):
        fr = dressed_frame(params)
        u = fr.u
        s = lambda x, y: ops.dressed_sigma(fr, x, y)  # noqa: E731
        w1, w2 = params.omega1 * params.g1, params.omega2 * params.g2
        diag_field = (w1 * ops.a1 + w2 * ops.a2) / (2.0 * u)
        side_field = math.sqrt(2.0) * (params.g1 * params.omega2 * ops.a1
                                       - params.g2 * params.omega1 * ops.a2) / (2.0 * u)
        self.u = u
        # (frequency, operator) pairs; each contributes e^{i w t} O + h.c.
        self.terms = [
            (0.0, (diag_field @ (s("B", "B") - s("C", "C"))).tocsr()),
            (2.0 * u, (-diag_field @ s("B", "C")).tocsr()),
            (-2.0 * u, (diag_field @ s("C", "B")).tocsr()),
            (-u, (side_field @ s("A", "B")).tocsr()),
            (u, (-side_field @ s("A", "C")).tocsr()),
        ]
        self._adjoints = [op.conj().T.tocsr() for _, op in self.terms]

    def __call__(self, t: float) -> sp.csr_matrix:
        out = None
        for (w, op), adj in zip(self.terms, self._adjoints):
            ph = complex(math.cos(w * t), math.sin(w * t))
            piece = ph * op + ph.conjugate() * adj
            out = piece if out is None else out + piece
        return out.tocsr()

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        """``H(t) @ psi`` without assembling ``H(t)``."""
        out = np.zeros_like(psi, dtype=complex)
        for (w, op), adj in zip(self.terms, self._adjoints):
            ph = complex(math.cos(w * t), math.sin(w * t))
            out += ph * (op @ psi)
            out += ph.conjugate() * (adj @ psi)
        return out

    def secular_part(self) -> sp.csr_matrix:
        op = self.terms[0][1]
        return (op + op.conj().T).tocsr()


def build_h_interaction(params: ModelParams, ops: OperatorSet, t: float) -> sp.csr_matrix:
    """``e^{i H0 t} H1 e^{-i H0 t}`` assembled from its dressed-frame Fourier components."""
    return InteractionHamiltonian(params, ops)(t)


def coherent_vector(amplitude: complex, dim: int, tol: float = 1e-8) -> np.ndarray:
    """Normalised coherent state truncated to ``dim`` Fock levels.

    Raises
    ------
    TruncationError
        If the Poisson mass beyond ``dim - 1`` exceeds ``tol``.
    """
    amplitude = complex(amplitude)
    dim = int(dim)
    if dim < 1:
        raise DomainError(f"dim must be positive, got {dim}")
    nbar = abs(amplitude) ** 2
    tail = float(gammainc(dim, nbar)) if nbar > 0 else 0.0
    if tail > tol:
        raise TruncationError(
            f"coherent state |{amplitude:.4g}> loses {tail:.2e} probability beyond n={dim - 1}; "
            f"need dim >= {minimal_dim(amplitude, tol)}"
        )
    n = np.arange(dim)
    if nbar == 0.0:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    log_mag = -0.5 * nbar + n * math.log(abs(amplitude)) - 0.5 * np.array([math.lgamma(k + 1) for k in n])
    vec = np.exp(log_mag) * np.exp(1j * n * np.angle(amplitude))
    return vec / np.linalg.norm(vec)


def atom_field_state(atom: Sequence[complex] | str, mode1: np.ndarray, mode2: np.ndarray) -> np.ndarray:
    """Product vector ``atom x mode1 x mode2``; ``atom`` may be a bare label."""
    if isinstance(atom, str):
        vec = np.zeros(3, dtype=complex)
        vec[ATOM_LABELS.index(atom)] = 1.0
        atom = vec
    return np.kron(np.asarray(atom, dtype=complex), np.kron(mode1, mode2))


def initial_state(spec: TruncationSpec, label: str = "a") -> np.ndarray:
    """``|label, 0, 0>``; ``label='a'`` is the standard preparation."""
    vac1 = np.zeros(spec.d1, dtype=complex)
    vac1[0] = 1.0
    vac2 = np.zeros(spec.d2, dtype=complex)
    vac2[0] = 1.0
    return atom_field_state(label, vac1, vac2)


def tail_population(state: np.ndarray, spec: TruncationSpec) -> float:
    """Largest population in the top two Fock levels of either mode."""
    if state.ndim == 1:
        probs = np.abs(state.reshape(spec.shape)) ** 2
    else:
        probs = np.real(np.diagonal(state)).reshape(spec.shape)
    t1 = probs[:, -2:, :].sum()
    t2 = probs[:, :, -2:].sum()
    return float(max(t1, t2))


@dataclass
class EvolutionResult:
    """States at the requested sample times plus integrator diagnostics."""

    times: np.ndarray
    states: list
    max_drift: float
    tail_population: float
    truncation_ok: bool
    steps: int
    error_estimate: float | None = None

    @property
    def state(self) -> np.ndarray:
        return self.states[-1]


def _as_callable(H) -> tuple[Callable[[float], object], bool]:
    if callable(H) and not isinstance(H, np.ndarray) and not sp.issparse(H):
        return H, False
    mat = sp.csr_matrix(H) if sp.issparse(H) else np.asarray(H, dtype=complex)
    return (lambda t: mat), True


def _sample_grid(t: float, sample_times) -> np.ndarray:
    t = float(t)
    if not t >= 0:
        raise DomainError(f"final time must be >= 0, got {t}")
    if sample_times is None:
        return np.array([t])
    grid = np.asarray(sorted(float(s) for s in sample_times))
    if grid.size == 0 or grid[0] < 0 or grid[-1] > t + 1e-12:
        raise DomainError("sample times must lie in [0, t]")
    return grid


def _segments(grid: np.ndarray, dt: float):
    """Yield ``(t_start, n_steps, h)`` legs that land exactly on each sample time."""
    t_prev = 0.0
    for ts in grid:
        span = ts - t_prev
        n = int(math.ceil(span / dt - 1e-9)) if span > 0 else 0
        yield t_prev, n, (span / n if n else 0.0)
        t_prev = ts


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_schrodinger(H, psi0: np.ndarray, t: float, dt: float, *, method: str = "rk4",
                       sample_times=None, spec: TruncationSpec | None = None,
                       estimate_error: bool = False, strict: bool = False) -> EvolutionResult:
    """Integrate ``i d/dt psi = H(t) psi`` with a fixed step.

    Parameters
    ----------
    H : matrix or callable
        A constant (dense or sparse) Hamiltonian or a function ``t -> H(t)``.
    psi0 : ndarray
        Initial normalised state vector.
    t, dt : float
        Final time and maximal step; each leg between sample times is split
        into equal steps no larger than ``dt``.
    method : {"rk4", "expm"}
        Classical Runge-Kutta, or the exponential midpoint rule (exactly
        unitary; the propagator is cached when ``H`` is constant).
    sample_times : sequence of float, optional
        Times at which to record the state; defaults to ``[t]``.
    spec : TruncationSpec, optional
        Enables the Fock-tail check.
    estimate_error : bool
        Rerun at ``dt/2`` and report the final-state difference.
    strict : bool
        Raise :class:`TruncationError` instead of flagging.
    """
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    grid = _sample_grid(t, sample_times)
    Hf, constant = _as_callable(H)
    psi = np.array(psi0, dtype=complex)
    n0 = np.linalg.norm(psi)

    if method == "rk4":
        if hasattr(H, "apply"):
            rhs = lambda s, y: -1j * H.apply(s, y)  # noqa: E731
        else:
            rhs = lambda s, y: -1j * (Hf(s) @ y)  # noqa: E731
        step = lambda s, y, h: _rk4_step(rhs, s, y, h)  # noqa: E731
    elif method == "expm":
        cache = {}

        def step(s, y, h):
            if constant:
                if h not in cache:
                    cache[h] = scipy.linalg.expm(-1j * h * _dense(Hf(0.0)))
                return cache[h] @ y
            return scipy.linalg.expm(-1j * h * _dense(Hf(s + 0.5 * h))) @ y
    else:
        raise DomainError(f"unknown method {method!r}")

    states, drift, tail, nsteps = [], 0.0, 0.0, 0
    for t_start, n, h in _segments(grid, dt):
        for k in range(n):
            psi = step(t_start + k * h, psi, h)
            drift = max(drift, abs(np.linalg.norm(psi) - n0))
        nsteps += n
        states.append(psi.copy())
        if spec is not None:
            tail = max(tail, tail_population(psi, spec))

    ok = tail <= TAIL_THRESHOLD
    if strict and not ok:
        raise TruncationError(_tail_message(tail, spec))
    err = None
    if estimate_error:
        fine = evolve_schrodinger(H, psi0, t, dt / 2.0, method=method, sample_times=grid)
        err = float(np.linalg.norm(fine.state - psi))
    return EvolutionResult(times=grid, states=states, max_drift=drift, tail_population=tail,
                           truncation_ok=ok, steps=nsteps, error_estimate=err)


def _dense(m) -> np.ndarray:
    return m.toarray() if sp.issparse(m) else np.asarray(m)


def _tail_message(tail: float, spec) -> str:
    return (f"Fock truncation violated: population {tail:.3e} in the top two levels exceeds "
            f"{TAIL_THRESHOLD:g} (d1={spec.d1}, d2={spec.d2}); increase the cutoffs")


def lindblad_rhs(rho: np.ndarray, H, c_ops: Sequence, rates: Sequence[float], *,
                 sparse: bool = True, cache: dict | None = None) -> np.ndarray:
    """``-i[H, rho] + sum_k r_k (2 c rho c^+ - c^+ c rho - rho c^+ c)``.

    With ``sparse=False`` all operators are densified first; both paths agree
    to rounding.
    """
    if not sparse:
        H = _dense(H)
        c_ops = [_dense(c) for c in c_ops]
    out = -1j * (H @ rho)
    out = out + out.conj().T  # rho Hermitian: (-i H rho)^+ = i rho H
    for c, r in zip(c_ops, rates):
        if r == 0.0:
            continue
        cd = c.conj().T
        n_op = (cache or {}).get(id(c))
        if n_op is None:
            n_op = cd @ c
            if cache is not None:
                cache[id(c)] = n_op
        n_rho = n_op @ rho
        out = out + r * (2.0 * (c @ (c @ rho).conj().T) - n_rho - n_rho.conj().T)
    return out


class _LadderLindbladian:
    """Master-equation generator specialised to mode-ladder jump operators.

    ``a rho a^+`` becomes a shifted, reweighted slice of the reshaped density
    and ``a^+ a`` a diagonal weight, so only the coherent part needs a
    sparse product.
    """

    def __init__(self, spec: TruncationSpec, rates: tuple[float, float]):
        d1, d2 = spec.d1, spec.d2
        self.shape6 = (3, d1, d2, 3, d1, d2)
        n1 = np.tile(np.repeat(np.arange(d1, dtype=float), d2), 3)
        n2 = np.tile(np.arange(d2, dtype=float), 3 * d1)
        r1, r2 = rates
        occ = r1 * n1 + r2 * n2
        self.number_weight = occ[:, None] + occ[None, :]
        s1 = np.sqrt(np.arange(1, d1, dtype=float))
        s2 = np.sqrt(np.arange(1, d2, dtype=float))
        self.jump1 = 2.0 * r1 * np.outer(s1, s1)[None, :, None, None, :, None]
        self.jump2 = 2.0 * r2 * np.outer(s2, s2)[None, None, :, None, None, :]
        self.rates = rates

    def __call__(self, rho: np.ndarray, H) -> np.ndarray:
        out = -1j * (H @ rho)
        out += out.conj().T
        if self.rates[0] or self.rates[1]:
            out -= self.number_weight * rho
            o6 = out.reshape(self.shape6)
            r6 = rho.reshape(self.shape6)
            if self.rates[0]:
                o6[:, :-1, :, :, :-1, :] += self.jump1 * r6[:, 1:, :, :, 1:, :]
            if self.rates[1]:
                o6[:, :, :-1, :, :, :-1] += self.jump2 * r6[:, :, 1:, :, :, 1:]
        return out


def evolve_lindblad(params: ModelParams, spec: TruncationSpec, t: float, dt: float, *,
                    hamiltonian: str = "eff", rho0: np.ndarray | None = None,
                    sample_times=None, sparse: bool = True, strict: bool = False) -> EvolutionResult:
    """Integrate the cavity-damped master equation with fixed-step RK4.

    The coherent part is the secular Hamiltonian (``hamiltonian="eff"``,
    default) or the full rotating-frame coupling (``"full"``); both modes
    decay at amplitude rate ``params.kappa``.  States are in the frame
    rotating with the drives; see :func:`to_lab_frame`.

    ``sparse=True`` uses the ladder-structured generator; ``sparse=False``
    evaluates :func:`lindblad_rhs` with dense operators (reference path).
    """
    if dt <= 0:
        raise DomainError(f"dt must be positive, got {dt}")
    ops = build_operators(spec)
    if hamiltonian == "eff":
        Hc = build_h_eff(params, ops)
        Hf = lambda s: Hc  # noqa: E731
    elif hamiltonian == "full":
        Hf = InteractionHamiltonian(params, ops)
    else:
        raise DomainError(f"unknown hamiltonian {hamiltonian!r}; expected 'eff' or 'full'")
    if rho0 is None:
        psi = initial_state(spec)
        rho0 = np.outer(psi, psi.conj())
    grid = _sample_grid(t, sample_times)

    if sparse:
        gen = _LadderLindbladian(spec, (params.kappa, params.kappa))
        rhs = lambda s, r: gen(r, Hf(s))  # noqa: E731
    else:
        c_ops = [ops.a1.toarray(), ops.a2.toarray()]
        rates = [params.kappa, params.kappa]
        rhs = lambda s, r: lindblad_rhs(r, _dense(Hf(s)), c_ops, rates, sparse=False)  # noqa: E731

    rho = np.array(rho0, dtype=complex)
    states, drift, tail, nsteps = [], 0.0, 0.0, 0
    for t_start, n, h in _segments(grid, dt):
        for k in range(n):
            rho = _rk4_step(rhs, t_start + k * h, rho, h)
        nsteps += n
        drift = max(drift, abs(np.trace(rho).real - 1.0))
        states.append(rho.copy())
        tail = max(tail, tail_population(rho, spec))
    ok = tail <= TAIL_THRESHOLD
    if strict and not ok:
        raise TruncationError(_tail_message(tail, spec))
    return EvolutionResult(times=grid, states=states, max_drift=drift, tail_population=tail,
                           truncation_ok=ok, steps=nsteps)


def _atom_vector(outcome: str, frame: DressedFrame | None) -> np.ndarray:
    if outcome in ATOM_LABELS:
        v = np.zeros(3, dtype=complex)
        v[ATOM_LABELS.index(outcome)] = 1.0
        return v
    if outcome in DRESSED_LABELS:
        if frame is None:
            raise DomainError("dressed outcomes need a DressedFrame")
        return frame.ket(outcome).astype(complex)
    raise DomainError(f"unknown atomic outcome {outcome!r}")


def project_atom(state: np.ndarray, outcome: str, spec: TruncationSpec,
                 frame: DressedFrame | None = None, min_probability: float = 1e-14):
    """Projective atomic measurement.

    Returns
    -------
    field_state : ndarray
        Normalised conditional state of the two modes (vector or density,
        matching the input).
    probability : float
        Probability of ``outcome``.
    """
    x = _atom_vector(outcome, frame)
    D = spec.field_dim
    if state.ndim == 1:
        f = x.conj() @ state.reshape(3, D)
        p = float(np.vdot(f, f).real)
        if p < min_probability:
            raise ZeroProbabilityError(f"outcome {outcome!r} has probability {p:.3e}")
        return f / math.sqrt(p), p
    r = state.reshape(3, D, 3, D)
    f = np.einsum("i,iajb,j->ab", x.conj(), r, x)
    p = float(np.trace(f).real)
    if p < min_probability:
        raise ZeroProbabilityError(f"outcome {outcome!r} has probability {p:.3e}")
    return f / p, p


def frame_rotation(params: ModelParams, t: float) -> np.ndarray:
    """3x3 atomic propagator ``exp(-i H0 t)`` in the bare basis."""
    fr = dressed_frame(params)
    phases = np.exp(-1j * np.array(fr.eigenvalues) * t)
    return fr.basis_change.T @ np.diag(phases) @ fr.basis_change


def to_lab_frame(state: np.ndarray, params: ModelParams, t: float, spec: TruncationSpec) -> np.ndarray:
    """Undo the drive rotation: ``psi -> e^{-i H0 t} psi`` (or its conjugation of a density)."""
    V = frame_rotation(params, t)
    D = spec.field_dim
    if state.ndim == 1:
        return (V @ state.reshape(3, D)).reshape(-1)
    r = state.reshape(3, D, 3, D)
    r = np.einsum("ij,jakb,lk->ialb", V, r, V.conj())
    return r.reshape(3 * D, 3 * D)


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def state_metrics(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Uhlmann fidelity and trace distance of two states (vectors or densities)."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape[0] != y.shape[0]:
        raise DomainError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if x.ndim == 1 and y.ndim == 1:
        f = abs(np.vdot(x, y)) ** 2
        return float(min(1.0, f)), float(math.sqrt(max(0.0, 1.0 - f)))
    if x.ndim == 1 or y.ndim == 1:
        vec, rho = (x, y) if x.ndim == 1 else (y, x)
        f = float(np.real(vec.conj() @ rho @ vec))
        rv = np.outer(vec, vec.conj())
        td = 0.5 * np.abs(np.linalg.eigvalsh(rv - rho)).sum()
        return float(min(1.0, max(0.0, f))), float(min(1.0, td))
    sx = _psd_sqrt(x)
    m = sx @ y @ sx
    ev = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    f = float(np.sqrt(np.clip(ev, 0.0, None)).sum() ** 2)
    d = x - y
    td = 0.5 * np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T))).sum()
    return float(min(1.0, max(0.0, f))), float(min(1.0, td))


@dataclass(frozen=True)
class OracleConcurrence:
    concurrence: float
    leakage: float
    block: np.ndarray = field(repr=False)
    warning: str | None = None


def _mode_basis(x: complex, d: int) -> np.ndarray:
    v0 = coherent_vector(x, d)
    vm = coherent_vector(-x, d)
    v1 = vm - np.vdot(v0, vm) * v0
    nrm = np.linalg.norm(v1)
    if nrm < 1e-12:
        raise DomainError(f"|{x}> and |{-x}> are indistinguishable at this cutoff")
    return np.stack([v0, v1 / nrm], axis=1)


def oracle_concurrence(field_density: np.ndarray, alpha: complex, beta: complex,
                       spec: TruncationSpec) -> OracleConcurrence:
    """Concurrence of a Fock-space field state compressed onto ``span{|+/-alpha>} x span{|+/-beta>}``.

    The subspace basis is ``|0> = |x>``, ``|1> ~ |-x> - <x|-x>|x>`` per mode,
    orthonormalised in the truncated space.  ``leakage`` is the probability
    outside the subspace.
    """
    from .ecs import wootters_concurrence

    rho = np.asarray(field_density, dtype=complex)
    if rho.ndim == 1:
        rho = np.outer(rho, rho.conj())
    if rho.shape != (spec.field_dim, spec.field_dim):
        raise DomainError(f"field density must be {spec.field_dim}x{spec.field_dim}, got {rho.shape}")
    E = np.kron(_mode_basis(alpha, spec.d1), _mode_basis(beta, spec.d2))
    block = E.conj().T @ rho @ E
    block = 0.5 * (block + block.conj().T)
    inside = float(np.trace(block).real)
    leakage = max(0.0, 1.0 - inside / float(np.trace(rho).real))
    warning = None
    if leakage > LEAKAGE_WARN:
        warning = f"subspace leakage {leakage:.3e} exceeds {LEAKAGE_WARN}; the 4x4 block is unreliable"
        warnings.warn(warning, SubspaceLeakageWarning, stacklevel=2)
    block = block / inside
    return OracleConcurrence(concurrence=wootters_concurrence(block, validate=False), leakage=leakage,
                             block=block, warning=warning)
