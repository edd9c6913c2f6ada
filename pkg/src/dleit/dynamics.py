"""Time-domain Maxwell-Bloch integrator for slow-light pulse pairs.

The first-order coherences at each grid point obey a linear ODE system with
a constant homogeneous matrix and a source given by the local weak fields;
the weak fields in turn obey propagation equations in zeta sourced by the
coherences (comoving frame, so 1/c time-of-flight terms drop out and never
enter the Gamma-unit formulation).

The integrator splits each time step: fields are frozen while every grid
point's coherences advance by an exact matrix-exponential update, then the
fields are rebuilt by trapezoidal integration in zeta from the incident
boundary values.  The splitting is first order in dt, but the coherence
update itself is exact, so there is no stiffness limit from the detuning
and the CW fixed point is independent of dt (its error comes from the zeta
quadrature alone).

The module also hosts the steady-state amplification analytics: for
balanced drives the terminal ratio of either weak field is the sum of a
non-decaying and a decaying mode weight, and the loop phase aligning the
two maximizes the output energy.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .core import FieldPair, MediumParams, wrap_phase
from .steady_state import CoherenceState, balanced_components

#: Default smoothing time of pulse edges, in 1/Gamma.  Hard discontinuities
#: excite transients that obscure the steady plateau.
DEFAULT_RISE_TIME = 2.0

#: Steps between instability checks inside the main loop.
INSTABILITY_CHECK_STRIDE = 25

#: A field exceeding this multiple of the peak input aborts the run.
FIELD_BLOWUP_FACTOR = 10.0

#: Detuning search window for the amplification optimum, in Gamma units.
DEFAULT_DELTA_RANGE = (0.5, 60.0)

PULSE_KINDS = ("square", "smoothed_square", "gaussian", "cw")


class NumericalInstability(RuntimeError):
    """The integrator state left the physically meaningful range."""


@dataclass(frozen=True)
class SimGrid:
    """Discretization of the simulation box.

    n_z spatial points span zeta in [0, alpha]; time advances in steps of
    dt up to t_final (both in 1/Gamma).
    """

    n_z: int = 200
    dt: float = 0.02
    t_final: float = 400.0

    def __post_init__(self) -> None:
        if self.n_z < 16:
            raise ValueError(f"n_z must be >= 16, got {self.n_z}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.t_final < self.dt:
            raise ValueError("t_final must be >= dt")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    def zeta(self, alpha: float) -> np.ndarray:
        return np.linspace(0.0, alpha, self.n_z)


@dataclass(frozen=True)
class PulseShape:
    """Incident boundary waveform of one weak field.

    Kinds: `square` (hard edges), `smoothed_square` (tanh edges of width
    rise_time), `gaussian` (centered in [t_on, t_off] with sigma a quarter
    of the window), and `cw` (switched on at t_on with an exponential ramp
    of time constant rise_time, never switched off).
    """

    kind: str
    amplitude: complex
    t_on: float = 0.0
    t_off: float = math.inf
    rise_time: float = DEFAULT_RISE_TIME

    def __post_init__(self) -> None:
        if self.kind not in PULSE_KINDS:
            raise ValueError(f"kind must be one of {PULSE_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if self.rise_time < 0.0:
            raise ValueError(f"rise_time must be >= 0, got {self.rise_time}")
        if self.kind != "cw" and not self.t_off > self.t_on:
            raise ValueError("pulses require t_off > t_on")
        if self.kind == "smoothed_square" and self.rise_time == 0.0:
            raise ValueError("smoothed_square requires rise_time > 0")

    @classmethod
    def square(cls, amplitude: complex, t_on: float, t_off: float) -> "PulseShape":
        return cls("square", amplitude, t_on, t_off, rise_time=0.0)

    @classmethod
    def smoothed_square(
        cls,
        amplitude: complex,
        t_on: float,
        t_off: float,
        rise_time: float = DEFAULT_RISE_TIME,
    ) -> "PulseShape":
        return cls("smoothed_square", amplitude, t_on, t_off, rise_time)

    @classmethod
    def gaussian(cls, amplitude: complex, t_on: float, t_off: float) -> "PulseShape":
        return cls("gaussian", amplitude, t_on, t_off, rise_time=0.0)

    @classmethod
    def cw(
        cls,
        amplitude: complex,
        t_on: float = 0.0,
        rise_time: float = DEFAULT_RISE_TIME,
    ) -> "PulseShape":
        return cls("cw", amplitude, t_on, math.inf, rise_time)

    def envelope(self, t) -> np.ndarray:
        """Complex boundary amplitude at the given times (scalar or array)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "square":
            shape = ((t >= self.t_on) & (t < self.t_off)).astype(float)
        elif self.kind == "smoothed_square":
            shape = 0.25 * (1.0 + np.tanh((t - self.t_on) / self.rise_time)) * (
                1.0 + np.tanh((self.t_off - t) / self.rise_time)
            )
        elif self.kind == "gaussian":
            center = 0.5 * (self.t_on + self.t_off)
            sigma = 0.25 * (self.t_off - self.t_on)
            shape = np.exp(-0.5 * ((t - center) / sigma) ** 2)
        else:
            if self.rise_time == 0.0:
                shape = (t >= self.t_on).astype(float)
            else:
                shape = np.where(
                    t >= self.t_on,
                    1.0 - np.exp(-np.maximum(t - self.t_on, 0.0) / self.rise_time),
                    0.0,
                )
        return self.amplitude * shape


@dataclass(frozen=True)
class PulseSimResult:
    """Boundary and terminal waveforms of one run, with energy bookkeeping.

    Energy transmissions are time-integrated |field|^2 at zeta = alpha over
    the same integral at zeta = 0 (0 when the input carries no energy).
    Group delays are center-of-energy shifts between output and input (NaN
    when either waveform carries no energy).  When maps were requested,
    field_map_* have shape (n_saved, n_z) and coherence_map has shape
    (n_saved, 3, n_z) ordered (rho41, rho31, rho21); otherwise they are None.
    """

    time_grid: np.ndarray
    input_probe: np.ndarray
    input_signal: np.ndarray
    output_probe: np.ndarray
    output_signal: np.ndarray
    energy_transmission_probe: float
    energy_transmission_signal: float
    group_delay_probe: float
    group_delay_signal: float
    zeta_grid: np.ndarray
    map_times: np.ndarray | None = None
    field_map_probe: np.ndarray | None = None
    field_map_signal: np.ndarray | None = None
    coherence_map: np.ndarray | None = None


@functools.lru_cache(maxsize=128)
def _propagators(
    delta: float, gamma21: float, omega_c: complex, omega_d: complex, dt: float
) -> tuple[np.ndarray, np.ndarray]:
    """Exact one-step update pair (P, S) for the frozen-field coherence ODE.

    The state (rho41, rho31, rho21) advances as x -> P x + S b with source
    b = (i/2)(Omega_s, Omega_p, 0); both matrices come from one exponential
    of the augmented 6x6 block matrix, which handles a singular homogeneous
    matrix (gamma21 = 0) without special cases.
    """
    hom = np.array(
        [
            [1j * delta - 0.5, 0.0, 0.5j * omega_d],
            [0.0, -0.5, 0.5j * omega_c],
            [0.5j * np.conj(omega_d), 0.5j * np.conj(omega_c), -0.5 * gamma21],
        ],
        dtype=complex,
    )
    aug = np.zeros((6, 6), dtype=complex)
    aug[:3, :3] = hom
    aug[:3, 3:] = np.eye(3)
    exp_aug = expm(aug * dt)
    step = exp_aug[:3, :3].copy()
    source = exp_aug[:3, 3:].copy()
    step.setflags(write=False)
    source.setflags(write=False)
    return step, source


def _obe_matrix(params: MediumParams) -> np.ndarray:
    """Homogeneous matrix of the coherence ODE in (rho41, rho31, rho21) order."""
    return np.array(
        [
            [1j * params.delta - 0.5, 0.0, 0.5j * params.omega_d],
            [0.0, -0.5, 0.5j * params.omega_c],
            [
                0.5j * np.conj(params.omega_d),
                0.5j * np.conj(params.omega_c),
                -0.5 * params.gamma21,
            ],
        ],
        dtype=complex,
    )


def step_coherences(
    state: CoherenceState, fields: FieldPair, params: MediumParams, dt: float
) -> CoherenceState:
    """Advance one grid point's coherences by dt with the fields held fixed."""
    step, source = _propagators(
        params.delta, params.gamma21, params.omega_c, params.omega_d, float(dt)
    )
    x = state.as_array()
    b = 0.5j * np.array([fields.omega_s, fields.omega_p, 0.0], dtype=complex)
    y = step @ x + source @ b
    return CoherenceState(rho41=y[0], rho31=y[1], rho21=y[2])


def step_fields(
    coherences: np.ndarray, boundary: FieldPair, zeta_grid: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Rebuild both weak fields along zeta from the coherence samples.

    `coherences` has shape (3, n_z) ordered (rho41, rho31, rho21); the probe
    gradient is (i/2)rho31 and the signal gradient (i/2)rho41, integrated
    by trapezoid from the incident boundary values.
    """
    coherences = np.asarray(coherences, dtype=complex)
    if coherences.ndim != 2 or coherences.shape[0] != 3:
        raise ValueError(f"coherences must have shape (3, n_z), got {coherences.shape}")
    probe = boundary.omega_p + cumulative_trapezoid(
        0.5j * coherences[1], zeta_grid, initial=0.0
    )
    signal = boundary.omega_s + cumulative_trapezoid(
        0.5j * coherences[0], zeta_grid, initial=0.0
    )
    return probe, signal


def _energy(series: np.ndarray, times: np.ndarray) -> float:
    return float(trapezoid(np.abs(series) ** 2, times))


def _centroid(series: np.ndarray, times: np.ndarray) -> float:
    energy = _energy(series, times)
    if energy <= 0.0:
        return math.nan
    return float(trapezoid(times * np.abs(series) ** 2, times)) / energy


def simulate(
    params: MediumParams,
    probe_pulse: PulseShape,
    signal_pulse: PulseShape,
    grid: SimGrid = SimGrid(),
    store_maps: bool = False,
    map_stride: int = 10,
) -> PulseSimResult:
    """Propagate a probe/signal pulse pair through the medium.

    Per time step the coherences at every grid point advance with the
    fields frozen, then both fields are re-integrated in zeta from the
    boundary waveforms.  Aborts with NumericalInstability when any
    coherence magnitude exceeds 1 or a field grows beyond
    FIELD_BLOWUP_FACTOR times the peak input.
    """
    if map_stride < 1:
        raise ValueError(f"map_stride must be >= 1, got {map_stride}")
    zeta = grid.zeta(params.alpha)
    times = grid.times()
    n_steps = grid.n_steps
    step, source = _propagators(
        params.delta, params.gamma21, params.omega_c, params.omega_d, grid.dt
    )

    input_probe = np.atleast_1d(probe_pulse.envelope(times))
    input_signal = np.atleast_1d(signal_pulse.envelope(times))
    peak_input = max(np.abs(input_probe).max(), np.abs(input_signal).max())
    field_bound = FIELD_BLOWUP_FACTOR * peak_input

    x = np.zeros((3, grid.n_z), dtype=complex)
    boundary = FieldPair(input_probe[0], input_signal[0])
    probe_field, signal_field = step_fields(x, boundary, zeta)

    output_probe = np.empty(n_steps + 1, dtype=complex)
    output_signal = np.empty(n_steps + 1, dtype=complex)
    output_probe[0] = probe_field[-1]
    output_signal[0] = signal_field[-1]

    saved_times: list[float] = []
    saved_probe: list[np.ndarray] = []
    saved_signal: list[np.ndarray] = []
    saved_coh: list[np.ndarray] = []

    def save(k: int) -> None:
        saved_times.append(times[k])
        saved_probe.append(probe_field.copy())
        saved_signal.append(signal_field.copy())
        saved_coh.append(x.copy())

    if store_maps:
        save(0)

    b = np.zeros((3, grid.n_z), dtype=complex)
    for k in range(1, n_steps + 1):
        b[0] = 0.5j * signal_field
        b[1] = 0.5j * probe_field
        x = step @ x + source @ b
        boundary = FieldPair(input_probe[k], input_signal[k])
        probe_field, signal_field = step_fields(x, boundary, zeta)
        output_probe[k] = probe_field[-1]
        output_signal[k] = signal_field[-1]
        if store_maps and (k % map_stride == 0 or k == n_steps):
            save(k)
        if k % INSTABILITY_CHECK_STRIDE == 0 or k == n_steps:
            field_peak = max(
                np.abs(probe_field).max(), np.abs(signal_field).max()
            )
            if np.abs(x).max() > 1.0 or field_peak > field_bound:
                raise NumericalInstability(
                    f"aborted at t = {times[k]:.3f}: max |rho| = "
                    f"{np.abs(x).max():.3g}, max |field| = {field_peak:.3g} "
                    f"(bound {field_bound:.3g})"
                )

    energy_in_probe = _energy(input_probe, times)
    energy_in_signal = _energy(input_signal, times)
    t_probe = _energy(output_probe, times) / energy_in_probe if energy_in_probe > 0 else 0.0
    t_signal = (
        _energy(output_signal, times) / energy_in_signal if energy_in_signal > 0 else 0.0
    )
    delay_probe = _centroid(output_probe, times) - _centroid(input_probe, times)
    delay_signal = _centroid(output_signal, times) - _centroid(input_signal, times)

    return PulseSimResult(
        time_grid=times,
        input_probe=input_probe,
        input_signal=input_signal,
        output_probe=output_probe,
        output_signal=output_signal,
        energy_transmission_probe=t_probe,
        energy_transmission_signal=t_signal,
        group_delay_probe=delay_probe,
        group_delay_signal=delay_signal,
        zeta_grid=zeta,
        map_times=np.array(saved_times) if store_maps else None,
        field_map_probe=np.array(saved_probe) if store_maps else None,
        field_map_signal=np.array(saved_signal) if store_maps else None,
        coherence_map=np.array(saved_coh) if store_maps else None,
    )


def steady_cw_output(params: MediumParams, boundary: FieldPair, zeta: float | None = None) -> FieldPair:
    """Steady CW output fields, valid for any gamma21 >= 0.

    Adiabatically eliminating the coherences (A x + b = 0 pointwise) turns
    the propagation equations into a linear 2-vector ODE in zeta whose
    generator is exponentiated directly.  Independent of the time-domain
    integrator; with gamma21 = 0 it reproduces the closed-form propagation.
    """
    if zeta is None:
        zeta = params.alpha
    if not 0.0 <= zeta <= params.alpha:
        raise ValueError(f"zeta = {zeta} outside [0, alpha = {params.alpha}]")
    hom = _obe_matrix(params)
    # b = (i/2) B (omega_p, omega_s) with B mapping the field vector onto
    # the source slots; x* = -hom^{-1} b, d(fields)/dzeta = (i/2) C x*.
    b_map = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]], dtype=complex)
    c_map = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]], dtype=complex)
    generator = 0.25 * c_map @ np.linalg.solve(hom, b_map)
    fields0 = np.array([boundary.omega_p, boundary.omega_s], dtype=complex)
    fields = expm(generator * zeta) @ fields0
    return FieldPair(omega_p=fields[0], omega_s=fields[1])


@dataclass(frozen=True)
class AmplificationResult:
    """Energy-optimal signal working point at one optical depth."""

    alpha: float
    delta_opt: float
    phi_r_opt: float
    probe_transmission: float
    signal_transmission: float


def peak_transmission(alpha: float, delta: float) -> float:
    """Best steady transmission of either weak field over the loop phase.

    Aligning the non-decaying and decaying mode weights gives
    (|1+E| + |1-E|)^2 / 4, identical for probe and signal.
    """
    dark, bright = balanced_components(alpha, delta)
    return (abs(dark) + abs(bright)) ** 2


def optimal_relative_phase(alpha: float, delta: float, field: str = "signal") -> float:
    """Loop phase maximizing the chosen field's steady transmission.

    The signal optimum aligns the decaying weight's phasor exp(+i*phi_r)
    with the non-decaying weight; the probe carries exp(-i*phi_r), so its
    optimum is the negative of the signal one.
    """
    dark, bright = balanced_components(alpha, delta)
    base = float(np.angle(dark) - np.angle(bright))
    if field == "signal":
        return float(wrap_phase(base))
    if field == "probe":
        return float(wrap_phase(-base))
    raise ValueError(f"field must be 'probe' or 'signal', got {field!r}")


def _terminal_transmissions(alpha: float, delta: float, phi_r: float) -> tuple[float, float]:
    dark, bright = balanced_components(alpha, delta)
    probe = dark + bright * np.exp(-1j * phi_r)
    signal = dark + bright * np.exp(1j * phi_r)
    return abs(probe) ** 2, abs(signal) ** 2


def optimize_amplification(
    alpha: float,
    delta_range: tuple[float, float] = DEFAULT_DELTA_RANGE,
    scan_step: float = 0.05,
    tol: float = 1e-3,
) -> AmplificationResult:
    """Maximize steady signal transmission over detuning and loop phase.

    The loop-phase maximization is analytic; the detuning is located by a
    coarse scan and refined by golden-section search.  alpha = 0 transmits
    both fields unchanged for every detuning, reported with delta_opt NaN.
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        return AmplificationResult(0.0, math.nan, 0.0, 1.0, 1.0)
    lo, hi = float(delta_range[0]), float(delta_range[1])
    if not lo < hi:
        raise ValueError(f"delta_range must satisfy lo < hi, got {delta_range}")
    grid = np.arange(lo, hi + 0.5 * scan_step, scan_step)
    grid[-1] = min(grid[-1], hi)
    scanned = np.array([peak_transmission(alpha, d) for d in grid])
    k = int(np.argmax(scanned))
    best_delta = float(grid[k])
    if 0 < k < grid.size - 1:
        try:
            result = minimize_scalar(
                lambda d: -peak_transmission(alpha, d),
                bracket=(grid[k - 1], grid[k], grid[k + 1]),
                method="golden",
                options={"xtol": tol},
            )
            best_delta = float(result.x)
        except ValueError:
            pass
    phi_opt = optimal_relative_phase(alpha, best_delta, field="signal")
    probe_t, signal_t = _terminal_transmissions(alpha, best_delta, phi_opt)
    return AmplificationResult(
        alpha=float(alpha),
        delta_opt=best_delta,
        phi_r_opt=phi_opt,
        probe_transmission=probe_t,
        signal_transmission=signal_t,
    )


def amplification_sweep(
    alphas,
    delta_range: tuple[float, float] = DEFAULT_DELTA_RANGE,
    scan_step: float = 0.05,
    tol: float = 1e-3,
) -> list[AmplificationResult]:
    """Energy-optimal signal working points for each optical depth."""
    alphas = list(alphas)
    if not alphas:
        raise ValueError("alphas must be non-empty")
    return [
        optimize_amplification(a, delta_range=delta_range, scan_step=scan_step, tol=tol)
        for a in alphas
    ]
