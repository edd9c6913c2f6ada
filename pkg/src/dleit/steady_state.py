"""Closed-form steady-state solutions for the double-lambda medium.

The weak probe and signal obey a linear two-field propagation problem once
the atomic coherences are eliminated adiabatically.  This module evaluates
the resulting closed forms: the first-order coherences driven by a frozen
field pair, the general propagation solution for arbitrary drive magnitudes,
the compact balanced-case solution parameterized by the loop phase phi_r,
and transmission/phase extraction from terminal field ratios.

All closed forms here require gamma21 = 0; nonzero ground-state dephasing is
handled numerically by :mod:`dleit.dynamics`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FieldPair, MediumParams

#: Magnitudes below this are treated as a vanished field for phase bookkeeping.
ZERO_FIELD_TOL = 1e-9

#: Default number of zeta samples when tracing a propagation curve.
DEFAULT_CURVE_SAMPLES = 2000


class ZeroFieldError(ValueError):
    """Phase requested at a point where the field has vanished."""


@dataclass(frozen=True)
class CoherenceState:
    """First-order density-matrix coherences at one grid point.

    Magnitudes are bounded by 0.5 for any physical density matrix; values
    beyond that indicate the inputs left the perturbative regime.
    """

    rho21: complex
    rho31: complex
    rho41: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho21", complex(self.rho21))
        object.__setattr__(self, "rho31", complex(self.rho31))
        object.__setattr__(self, "rho41", complex(self.rho41))
        for name in ("rho21", "rho31", "rho41"):
            if abs(getattr(self, name)) > 0.5:
                raise ValueError(
                    f"|{name}| > 0.5: fields are outside the perturbative regime"
                )

    def as_array(self) -> np.ndarray:
        """Coherences ordered (rho41, rho31, rho21), matching the dynamics state."""
        return np.array([self.rho41, self.rho31, self.rho21], dtype=complex)


@dataclass(frozen=True)
class PropagationCurve:
    """Complex field ratios Omega(zeta)/Omega(0) sampled along the medium."""

    zeta_grid: np.ndarray
    probe_ratio: np.ndarray
    signal_ratio: np.ndarray

    def __post_init__(self) -> None:
        zeta = np.asarray(self.zeta_grid, dtype=float)
        probe = np.asarray(self.probe_ratio, dtype=complex)
        signal = np.asarray(self.signal_ratio, dtype=complex)
        if not (zeta.shape == probe.shape == signal.shape) or zeta.ndim != 1:
            raise ValueError("curve arrays must be 1-D and of equal length")
        if zeta.size >= 2 and not np.all(np.diff(zeta) > 0.0):
            raise ValueError("zeta_grid must be strictly increasing")
        if probe[0] != 1.0 or signal[0] != 1.0:
            raise ValueError("field ratios must start at exactly 1")
        object.__setattr__(self, "zeta_grid", zeta)
        object.__setattr__(self, "probe_ratio", probe)
        object.__setattr__(self, "signal_ratio", signal)

    def __len__(self) -> int:
        return self.zeta_grid.size


def steady_denominator(params: MediumParams) -> complex:
    """Common denominator of the steady-state coherences.

    D = -[i*|Omega_d|^2 + (2*delta + i)*|Omega_c|^2] in Gamma units.
    """
    oc2 = abs(params.omega_c) ** 2
    od2 = abs(params.omega_d) ** 2
    return -(1j * od2 + (2.0 * params.delta + 1j) * oc2)


def coherences_steady(params: MediumParams, fields: FieldPair) -> CoherenceState:
    """Steady-state coherences driven by a frozen probe/signal pair.

    Valid for gamma21 = 0 (the dark-state coherence rho21 then has no decay
    of its own and the closed form below applies).
    """
    if params.gamma21 != 0.0:
        raise ValueError(
            "closed-form steady-state coherences require gamma21 = 0; "
            "use dleit.dynamics for dephased media"
        )
    d = steady_denominator(params)
    if d == 0.0:
        raise ValueError("steady-state denominator vanishes")
    oc, od = params.omega_c, params.omega_d
    op, os_ = fields.omega_p, fields.omega_s
    rho21 = (op * np.conj(oc) * (2.0 * params.delta + 1j) + os_ * np.conj(od) * 1j) / d
    rho31 = (op * abs(od) ** 2 - os_ * oc * np.conj(od)) / d
    rho41 = (os_ * abs(oc) ** 2 - op * np.conj(oc) * od) / d
    return CoherenceState(rho21=rho21, rho31=rho31, rho41=rho41)


def exponential_factor(params: MediumParams, zeta):
    """Attenuation/rotation factor exp(-i*zeta/(2*xi)) of the decaying mode.

    `zeta` may be a scalar or an array.
    """
    return np.exp(-0.5j * np.asarray(zeta, dtype=float) / params.xi)


def decay_factor(alpha: float, delta: float) -> complex:
    """Balanced-drive decaying-mode factor after the full medium length.

    Equals exp(-i*alpha/(2*xi)) with xi = i + delta, the balanced special
    case of `exponential_factor`.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return complex(np.exp(-0.5j * alpha / (1j + delta)))


def balanced_components(alpha: float, delta: float) -> tuple[complex, complex]:
    """Non-decaying and decaying mode weights of the balanced terminal ratio.

    The terminal probe ratio is a + c*exp(-i*phi_r) with a = (1+E)/2 and
    c = (1-E)/2 (the signal ratio carries exp(+i*phi_r) instead); both
    weights are returned.
    """
    env = decay_factor(alpha, delta)
    return 0.5 * (1.0 + env), 0.5 * (1.0 - env)


def _general_fields(params: MediumParams, incident: FieldPair, zeta):
    """Absolute probe/signal fields at `zeta` from the general closed form."""
    oc, od = params.omega_c, params.omega_d
    oc2, od2 = abs(oc) ** 2, abs(od) ** 2
    osq = params.omega_sq
    cross = oc * np.conj(od) * incident.omega_s
    cross_rev = od * np.conj(oc) * incident.omega_p
    env = exponential_factor(params, zeta)
    probe = ((oc2 * incident.omega_p + cross) + (od2 * incident.omega_p - cross) * env) / osq
    signal = ((od2 * incident.omega_s + cross_rev) + (oc2 * incident.omega_s - cross_rev) * env) / osq
    return probe, signal


def propagate_general(params: MediumParams, incident: FieldPair, zeta: float) -> FieldPair:
    """Steady-state probe/signal fields after propagating to optical depth zeta.

    Supports arbitrary drive magnitudes and a vanishing incident signal (the
    four-wave-mixing generation case).  Requires gamma21 = 0 and
    0 <= zeta <= alpha.
    """
    if params.gamma21 != 0.0:
        raise ValueError(
            "closed-form propagation requires gamma21 = 0; "
            "use dleit.dynamics for dephased media"
        )
    if not 0.0 <= zeta <= params.alpha:
        raise ValueError(f"zeta = {zeta} outside [0, alpha = {params.alpha}]")
    probe, signal = _general_fields(params, incident, float(zeta))
    return FieldPair(omega_p=complex(probe), omega_s=complex(signal))


def _balanced_ratios(phi_r: float, params: MediumParams, zeta):
    """Probe and signal ratios of the balanced closed form, vectorized in zeta."""
    env = exponential_factor(params, zeta)
    phase = np.exp(-1j * phi_r)
    probe = 0.5 * ((1.0 + phase) + (1.0 - phase) * env)
    signal = 0.5 * ((1.0 + np.conj(phase)) + (1.0 - np.conj(phase)) * env)
    return probe, signal


def propagate_balanced(
    phi_r: float, params: MediumParams, zeta: float
) -> tuple[complex, complex]:
    """Probe and signal field ratios for equal drive and input magnitudes.

    The compact balanced solution depends on the incident fields only through
    the loop phase phi_r, so the ratios are returned directly.  The drive
    phases stored in `params` are ignored: `phi_r` is taken as given.
    Requires |Omega_c| = |Omega_d|, gamma21 = 0, and 0 <= zeta <= alpha;
    the caller is responsible for |Omega_p(0)| = |Omega_s(0)|.
    """
    if params.gamma21 != 0.0:
        raise ValueError(
            "closed-form propagation requires gamma21 = 0; "
            "use dleit.dynamics for dephased media"
        )
    if not params.is_balanced:
        raise ValueError(
            "balanced solution requires |omega_c| = |omega_d|; "
            "use propagate_general for imbalanced drives"
        )
    if not 0.0 <= zeta <= params.alpha:
        raise ValueError(f"zeta = {zeta} outside [0, alpha = {params.alpha}]")
    probe, signal = _balanced_ratios(float(phi_r), params, float(zeta))
    return complex(probe), complex(signal)


def trace_curve(
    phi_r: float,
    params: MediumParams,
    n_samples: int = DEFAULT_CURVE_SAMPLES,
    incident: FieldPair | None = None,
) -> PropagationCurve:
    """Sample the field ratios on a uniform zeta grid from 0 to alpha.

    Without `incident`, the balanced closed form at loop phase `phi_r` is
    used (requires |Omega_c| = |Omega_d|).  With `incident`, the general
    solution is traced and normalized by the incident fields, which must
    both be nonzero for the ratios to exist; `phi_r` is then ignored in
    favor of the phases carried by the fields.

    alpha = 0 yields the single-point identity curve.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    if params.gamma21 != 0.0:
        raise ValueError(
            "closed-form propagation requires gamma21 = 0; "
            "use dleit.dynamics for dephased media"
        )
    if params.alpha == 0.0:
        one = np.array([1.0 + 0.0j])
        return PropagationCurve(np.array([0.0]), one, one.copy())
    zeta = np.linspace(0.0, params.alpha, n_samples)
    if incident is None:
        if not params.is_balanced:
            raise ValueError(
                "phi_r-parameterized tracing requires |omega_c| = |omega_d|; "
                "pass `incident` to trace an imbalanced configuration"
            )
        probe, signal = _balanced_ratios(float(phi_r), params, zeta)
    else:
        if abs(incident.omega_p) == 0.0 or abs(incident.omega_s) == 0.0:
            raise ValueError(
                "curve ratios need nonzero incident fields; evaluate "
                "propagate_general directly for the generation case"
            )
        probe, signal = _general_fields(params, incident, zeta)
        probe = probe / incident.omega_p
        signal = signal / incident.omega_s
    # The analytic ratios at zeta = 0 are identically 1; pin the boundary
    # sample so the curve invariant holds exactly in floating point.
    probe[0] = 1.0
    signal[0] = 1.0
    return PropagationCurve(zeta, probe, signal)


def transmission_and_phase(ratio_end: complex) -> tuple[float, float]:
    """Transmission |ratio|^2 and principal phase shift of a terminal ratio.

    The phase is the principal value in (-pi, pi].  Raises ZeroFieldError
    when the field has vanished (|ratio| below ZERO_FIELD_TOL), where the
    phase is undefined.
    """
    ratio = complex(ratio_end)
    if abs(ratio) < ZERO_FIELD_TOL:
        raise ZeroFieldError(
            f"zero-field point: |ratio| = {abs(ratio):.3e} < {ZERO_FIELD_TOL}"
        )
    return abs(ratio) ** 2, float(np.angle(ratio))


def unwrapped_phase(curve: PropagationCurve) -> tuple[np.ndarray, np.ndarray]:
    """Continuously unwrapped probe and signal phases along the curve.

    Terminal entries give the accumulated phase shift, which distinguishes
    +pi from -pi endpoints that the principal value cannot.
    """
    probe = np.unwrap(np.angle(curve.probe_ratio))
    signal = np.unwrap(np.angle(curve.signal_ratio))
    return probe, signal
