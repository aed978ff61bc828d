"""Parameter sweeps, figure data and oracle comparison reports.

Rows are plain dataclasses; :func:`emit_csv` fixes the file format (RFC 4180,
shortest round-trip floats, a ``.meta.json`` sibling holding the config).
Identical configs produce byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DegenerateModeError, DegenerateStateError, DomainError, ECSError, TruncationError
from .fock import (TruncationSpec, atom_field_state, build_operators, coherent_vector, evolve_lindblad,
                   evolve_schrodinger, build_h_eff, InteractionHamiltonian, initial_state, oracle_concurrence,
                   project_atom, required_dim, state_metrics, to_lab_frame)
from .lossless import (coherent_amplitudes, concurrence_lossless, detection_probabilities,
                       mean_photon_numbers, projected_state)
from .lossy import (concurrence_lossy, decoherence_factor, dressed_density, field_amplitudes,
                    lossy_detection_probabilities, lossy_photon_numbers, projected_mixed_state)
from .model import Branch, ModelParams, dressed_frame

logger = logging.getLogger(__name__)

MODES = ("lossless", "lossy", "oracle_compare")

#: CSV columns contributed by each selectable output.
OUTPUT_COLUMNS = {
    "C": ("C",),
    "N1": ("N1",),
    "N2": ("N2",),
    "N": ("N",),
    "q": ("q",),
    "alpha": ("alpha_re", "alpha_im"),
    "beta": ("beta_re", "beta_im"),
    "M_or_S": ("norm",),
    "detection_probs": ("P_a", "P_b", "P_c"),
}
ORACLE_COLUMNS = ("fidelity", "trace_distance", "leakage", "C_oracle", "q_oracle", "N1_oracle", "N2_oracle")
DEFAULT_OUTPUTS = ("C", "N1", "N2", "N", "q", "alpha", "beta", "M_or_S")

#: Pass criteria of :func:`compare_report`.
TOLERANCES = {
    "fidelity_min": 0.99,
    "trace_distance_max": 0.05,
    "concurrence_abs": 1e-2,
    "q_abs": 1e-2,
    "photon_rel": 1e-2,
    "leakage_max": 1e-3,
}

#: Largest step at which the full rotating-frame Hamiltonian is resolved, in units of 1/u.
STIFF_DT = 0.02


class ReportIOError(ECSError, OSError):
    """Writing an output file failed."""


class OracleToleranceError(ECSError):
    """An oracle comparison exceeded its declared tolerances."""


@dataclass(frozen=True)
class SweepConfig:
    params: ModelParams
    t_max: float
    steps: int = 201
    t_min: float = 0.0
    outputs: tuple = DEFAULT_OUTPUTS
    mode: str = "lossless"
    truncation: TruncationSpec | None = None
    dt: float | None = None
    envelope: str | None = None
    hamiltonian: str = "eff"

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)) or self.t_min < 0:
            raise DomainError(f"time window must be finite with t_min >= 0, got [{self.t_min}, {self.t_max}]")
        if not self.t_min < self.t_max:
            raise DomainError(f"t_min must be < t_max, got {self.t_min} >= {self.t_max}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        outputs = tuple(self.outputs)
        unknown = [o for o in outputs if o not in OUTPUT_COLUMNS]
        if unknown:
            raise DomainError(f"unknown outputs {unknown}; choose from {sorted(OUTPUT_COLUMNS)}")
        object.__setattr__(self, "outputs", outputs)
        if self.envelope not in (None, "plus", "minus"):
            raise DomainError(f"envelope must be 'plus' or 'minus', got {self.envelope!r}")
        if self.hamiltonian not in ("eff", "full"):
            raise DomainError(f"hamiltonian must be 'eff' or 'full', got {self.hamiltonian!r}")
        if self.mode == "oracle_compare":
            if self.truncation is None or self.dt is None:
                raise DomainError("oracle_compare needs both a truncation (dim1, dim2) and a time step dt")
            if not self.dt > 0:
                raise DomainError(f"dt must be positive, got {self.dt}")

    @property
    def columns(self) -> list[str]:
        cols = ["t"]
        for o in self.outputs:
            cols.extend(OUTPUT_COLUMNS[o])
        if self.mode == "oracle_compare":
            cols.extend(ORACLE_COLUMNS)
        cols.append("flags")
        return cols

    def times(self) -> np.ndarray:
        grid = np.linspace(self.t_min, self.t_max, self.steps)
        if self.envelope is None:
            return grid
        u = self.params.u
        offset = 0.0 if self.envelope == "plus" else 0.5
        k = np.round(grid * u / math.pi - offset)
        snapped = (k + offset) * math.pi / u
        snapped = snapped[(snapped >= self.t_min) & (snapped <= self.t_max)]
        return np.unique(snapped)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "t_min": self.t_min,
            "t_max": self.t_max,
            "steps": self.steps,
            "outputs": list(self.outputs),
            "mode": self.mode,
            "truncation": None if self.truncation is None else {"d1": self.truncation.d1,
                                                                "d2": self.truncation.d2},
            "dt": self.dt,
            "envelope": self.envelope,
            "hamiltonian": self.hamiltonian,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = dict(data)
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise DomainError(f"unknown config keys {sorted(extra)}")
        params = data.pop("params", {})
        data["params"] = params if isinstance(params, ModelParams) else ModelParams(**params)
        trunc = data.get("truncation")
        if isinstance(trunc, dict):
            data["truncation"] = TruncationSpec(**trunc)
        if "outputs" in data:
            data["outputs"] = tuple(data["outputs"])
        return cls(**data)


@dataclass
class TimeSeriesRow:
    t: float
    C: float = 0.0
    N1: float = 0.0
    N2: float = 0.0
    q: float = 1.0
    alpha: complex = 0j
    beta: complex = 0j
    norm: float = 0.0
    P_a: float = 0.0
    P_b: float = 0.0
    P_c: float = 0.0
    fidelity: float | None = None
    trace_distance: float | None = None
    leakage: float | None = None
    C_oracle: float | None = None
    q_oracle: float | None = None
    N1_oracle: float | None = None
    N2_oracle: float | None = None
    flags: list = field(default_factory=list)

    @property
    def N(self) -> float:
        return self.N1 + self.N2

    def value(self, column: str):
        if column == "flags":
            return ";".join(self.flags)
        if column in ("alpha_re", "alpha_im", "beta_re", "beta_im"):
            z = getattr(self, column[:-3])
            return z.real if column.endswith("re") else z.imag
        return getattr(self, column)


def _lossless_row(params: ModelParams, t: float, sign: Branch) -> TimeSeriesRow:
    pair = coherent_amplitudes(params, t)
    probs = detection_probabilities(params, t)
    row = TimeSeriesRow(t=t, alpha=pair.alpha, beta=pair.beta, q=1.0,
                        P_a=probs["a"], P_b=probs["b"], P_c=probs["c"])
    try:
        state = projected_state(params, t, sign)
    except DegenerateStateError:
        # conditional state undefined at this point; zeros are placeholders
        row.flags.append("degenerate_branch")
        return row
    row.norm = state.norm
    row.C = concurrence_lossless(params, t, sign)
    row.N1, row.N2 = mean_photon_numbers(params, t, sign)
    return row


def _lossy_row(params: ModelParams, t: float) -> TimeSeriesRow:
    state = projected_mixed_state(params, t)
    probs = lossy_detection_probabilities(params, t)
    row = TimeSeriesRow(t=t, alpha=state.pair.alpha, beta=state.pair.beta, q=state.q, norm=state.S,
                        P_a=probs["a"], P_b=probs["b"], P_c=probs["c"])
    row.N1, row.N2 = lossy_photon_numbers(params, t)
    try:
        row.C = concurrence_lossy(params, t)
    except DegenerateModeError:
        # vacuum: product state, but the qubit encoding itself is undefined
        row.flags.append("degenerate_mode")
    return row


def run_sweep(config: SweepConfig) -> list[TimeSeriesRow]:
    """Evaluate the configured quantities on the time grid, in time order."""
    params = config.params
    times = config.times()
    if config.mode == "oracle_compare":
        return _oracle_rows(config, times)
    if config.mode == "lossy" and params.kappa > 0:
        rows = [_lossy_row(params, float(t)) for t in times]
    else:
        # kappa == 0 lossy sweeps are the |a> outcome of the loss-free model
        sign = Branch.PLUS if config.mode == "lossy" else params.sign
        rows = [_lossless_row(params, float(t), sign) for t in times]
    if config.envelope is not None:
        for r in rows:
            r.flags.append(f"envelope_{config.envelope}")
    return rows


def _analytic_state(params: ModelParams, t: float, spec: TruncationSpec) -> np.ndarray:
    """Closed-form atom-field state in the lab frame, realised in Fock space."""
    if params.kappa > 0:
        return dressed_density(params, t).to_fock(params, spec.d1, spec.d2, frame="lab")
    pair = coherent_amplitudes(params, t)
    fr = dressed_frame(params)
    ph = params.u * t
    kb = atom_field_state(fr.ket("B"), coherent_vector(pair.alpha, spec.d1), coherent_vector(pair.beta, spec.d2))
    kc = atom_field_state(fr.ket("C"), coherent_vector(-pair.alpha, spec.d1),
                          coherent_vector(-pair.beta, spec.d2))
    return (np.exp(-1j * ph) * kb - np.exp(1j * ph) * kc) / math.sqrt(2.0)


def _branch_coherence(state: np.ndarray, params: ModelParams, t: float, spec: TruncationSpec) -> float:
    """``2|<B, x, y| rho |C, -x, -y>|`` in the rotating frame: the oracle's decoherence factor."""
    pair = field_amplitudes(params, t)
    fr = dressed_frame(params)
    kb = atom_field_state(fr.ket("B"), coherent_vector(pair.alpha, spec.d1), coherent_vector(pair.beta, spec.d2))
    kc = atom_field_state(fr.ket("C"), coherent_vector(-pair.alpha, spec.d1),
                          coherent_vector(-pair.beta, spec.d2))
    if state.ndim == 1:
        return 2.0 * abs(np.vdot(kb, state) * np.vdot(state, kc))
    return 2.0 * abs(kb.conj() @ state @ kc)


def check_truncation(config: SweepConfig) -> None:
    """Reject cutoffs that cannot hold the largest amplitude reached in the run."""
    params, spec = config.params, config.truncation
    pair = field_amplitudes(params, config.t_max)
    need1, need2 = required_dim(pair.alpha), required_dim(pair.beta)
    if spec.d1 < need1 or spec.d2 < need2:
        raise TruncationError(
            f"Fock cutoffs ({spec.d1}, {spec.d2}) too small for |alpha|={abs(pair.alpha):.3g}, "
            f"|beta|={abs(pair.beta):.3g} at t={config.t_max}; need at least ({need1}, {need2})"
        )


def _oracle_rows(config: SweepConfig, times: np.ndarray) -> list[TimeSeriesRow]:
    params, spec = config.params, config.truncation
    check_truncation(config)
    if config.hamiltonian == "full" and config.dt > STIFF_DT / params.u:
        warnings.warn(f"dt={config.dt:g} exceeds {STIFF_DT}/u={STIFF_DT / params.u:.3g}; the fast "
                      "e^(+-2iut) terms of the full Hamiltonian are under-resolved", RuntimeWarning,
                      stacklevel=3)
    t_end = float(times[-1])
    if params.kappa > 0:
        res = evolve_lindblad(params, spec, t_end, config.dt, hamiltonian=config.hamiltonian,
                              sample_times=times)
    else:
        ops = build_operators(spec)
        H = build_h_eff(params, ops) if config.hamiltonian == "eff" else InteractionHamiltonian(params, ops)
        res = evolve_schrodinger(H, initial_state(spec), t_end, config.dt, sample_times=times, spec=spec)
    if not res.truncation_ok:
        raise TruncationError(
            f"oracle run leaked {res.tail_population:.3e} population into the top two Fock levels "
            f"(d1={spec.d1}, d2={spec.d2}); increase the cutoffs"
        )
    n1 = np.kron(np.diag(np.arange(spec.d1, dtype=float)), np.eye(spec.d2))
    n2 = np.kron(np.eye(spec.d1), np.diag(np.arange(spec.d2, dtype=float)))
    rows = []
    for t, state in zip(times, res.states):
        t = float(t)
        row = _lossy_row(params, t) if params.kappa > 0 else _lossless_row(params, t, Branch.PLUS)
        lab = to_lab_frame(state, params, t, spec)
        row.fidelity, row.trace_distance = state_metrics(lab, _analytic_state(params, t, spec))
        row.q_oracle = _branch_coherence(state, params, t, spec)
        field_state, _ = project_atom(lab, "a", spec)
        rho_f = np.outer(field_state, field_state.conj()) if field_state.ndim == 1 else field_state
        row.N1_oracle = float(np.real(np.trace(n1 @ rho_f)))
        row.N2_oracle = float(np.real(np.trace(n2 @ rho_f)))
        if "degenerate_mode" in row.flags or "degenerate_branch" in row.flags or row.alpha == 0:
            row.C_oracle, row.leakage = 0.0, 0.0
            if "degenerate_mode" not in row.flags:
                row.flags.append("degenerate_mode")
        else:
            oc = oracle_concurrence(rho_f, row.alpha, row.beta, spec)
            row.C_oracle, row.leakage = oc.concurrence, oc.leakage
            if oc.warning:
                row.flags.append("subspace_leakage")
        rows.append(row)
    return rows


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def emit_csv(rows, path, config: SweepConfig | None = None, columns=None) -> Path:
    """Write rows as CSV (plus ``<stem>.meta.json`` when ``config`` is given)."""
    path = Path(path)
    if columns is None:
        columns = config.columns if config is not None else (
            ["t"] + [c for o in DEFAULT_OUTPUTS for c in OUTPUT_COLUMNS[o]] + ["flags"])
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format(row.value(c)) for c in columns])
        if config is not None:
            meta = {"tool": "ecsgen", "version": __version__, "columns": list(columns),
                    "config": config.to_dict()}
            _write_json(metadata_path(path), meta)
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc
    return path


def metadata_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def _write_json(path: Path, payload: dict) -> None:
    try:
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc}") from exc


FIG2_PARAMS = ModelParams(g1=1.0, g2=1.0, omega1=100.0, omega2=200.0, kappa=0.0, sign="plus")
FIG3_KAPPAS = (0.005, 0.05, 0.1)


def figure_configs(which: str) -> list[tuple[str, SweepConfig]]:
    """Preset sweeps behind the two figures: ``(file name, config)`` pairs."""
    outputs = ("C", "N1", "N2", "N")
    if which == "fig2":
        return [("fig2.csv", SweepConfig(FIG2_PARAMS, t_max=100.0, steps=2001, outputs=outputs))]
    if which == "fig3":
        base = ModelParams(g1=1.0, g2=1.0, omega1=200.0, omega2=200.0)
        return [(f"fig3_kappa{k:g}.csv",
                 SweepConfig(base.replace(kappa=k), t_max=100.0, steps=2001, outputs=outputs + ("q",),
                             mode="lossy"))
                for k in FIG3_KAPPAS]
    raise DomainError(f"unknown figure {which!r}; expected 'fig2' or 'fig3'")


def figure_data(which: str, out_dir=".") -> list[Path]:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportIOError(f"cannot create {out_dir}: {exc}") from exc
    return [emit_csv(run_sweep(cfg), out_dir / name, cfg) for name, cfg in figure_configs(which)]


def compare_report(config: SweepConfig, path=None) -> dict:
    """Run the oracle against the closed forms and summarise discrepancies.

    The report's ``passed`` field is the conjunction of all checks in
    :data:`TOLERANCES`; the JSON is written to ``path`` when given.
    """
    if config.mode != "oracle_compare":
        config = dataclasses.replace(config, mode="oracle_compare")
    rows = run_sweep(config)

    def worst(f):
        return max((f(r) for r in rows), default=0.0)

    summary = {k: float(v) for k, v in {
        "min_fidelity": min(r.fidelity for r in rows),
        "max_trace_distance": worst(lambda r: r.trace_distance),
        "max_abs_dC": worst(lambda r: abs(r.C - r.C_oracle)),
        "max_abs_dq": worst(lambda r: abs(r.q - r.q_oracle)),
        "max_rel_dN1": worst(lambda r: abs(r.N1 - r.N1_oracle) / max(1.0, abs(r.N1))),
        "max_rel_dN2": worst(lambda r: abs(r.N2 - r.N2_oracle) / max(1.0, abs(r.N2))),
        "max_leakage": worst(lambda r: r.leakage),
    }.items()}
    checks = {k: bool(v) for k, v in {
        "fidelity": summary["min_fidelity"] >= TOLERANCES["fidelity_min"],
        "trace_distance": summary["max_trace_distance"] <= TOLERANCES["trace_distance_max"],
        "concurrence": summary["max_abs_dC"] <= TOLERANCES["concurrence_abs"],
        "q": summary["max_abs_dq"] <= TOLERANCES["q_abs"],
        "photon_numbers": max(summary["max_rel_dN1"], summary["max_rel_dN2"]) <= TOLERANCES["photon_rel"],
        "leakage": summary["max_leakage"] < TOLERANCES["leakage_max"],
    }.items()}
    report = {
        "tool": "ecsgen",
        "version": __version__,
        "config": config.to_dict(),
        "tolerances": dict(TOLERANCES),
        "summary": summary,
        "checks": checks,
        "passed": all(checks.values()),
        "per_t": [
            {"t": r.t, "fidelity": r.fidelity, "trace_distance": r.trace_distance, "C": r.C,
             "C_oracle": r.C_oracle, "q": r.q, "q_oracle": r.q_oracle, "N1": r.N1, "N1_oracle": r.N1_oracle,
             "N2": r.N2, "N2_oracle": r.N2_oracle, "leakage": r.leakage, "flags": list(r.flags)}
            for r in rows
        ],
    }
    if path is not None:
        _write_json(Path(path), report)
    return report
