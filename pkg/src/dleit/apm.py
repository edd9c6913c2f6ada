"""Signal-controlled phase modulation of the probe output.

In the balanced configuration the terminal probe ratio traces a circle in
the complex plane as the loop phase phi_r is scanned.  Pinning the terminal
ratio to the negative real axis imprints a pi output phase on the probe;
pinning it to the negative imaginary axis imprints -pi/2.  This module
computes the loop phases that realize those conditions, optimizes the
detuning for maximal probe transmission subject to them, and quantifies the
modulation contrast against the signal-off configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import TWO_PI, wrap_phase, wrap_signed
from .phase_jump import attenuation_rotation
from .steady_state import ZeroFieldError, balanced_components, transmission_and_phase

#: Verification ceiling for the pinned coordinate of a returned operating point.
AXIS_TOL = 1e-9

#: Detuning search window covering the useful dispersive regime, in Gamma units.
DEFAULT_DELTA_RANGE = (0.5, 60.0)

#: Golden-section refinement tolerance; the transmission optimum is flat-topped.
DEFAULT_DELTA_TOL = 1e-3

#: Scan step of the coarse detuning grid, in Gamma units.
DEFAULT_SCAN_STEP = 0.05

#: Initial bracketing resolution for the half-pi root solve on [0, 2*pi).
N_PHASE_BRACKETS = 64


class InfeasibleError(ValueError):
    """No loop phase or detuning satisfies the requested phase-shift target."""


@dataclass(frozen=True)
class ApmOperatingPoint:
    """A phase-modulation working point with its signal-off comparison.

    `apm_contrast` is the absolute wrapped difference between the probe
    output phase with the signal present and with the signal absent.
    `phase_with` and `phase_without` are the underlying principal phases.
    """

    alpha: float
    delta: float
    phi_r: float
    target_shift: str
    transmission_with_signal: float
    transmission_without_signal: float
    apm_contrast: float
    phase_with: float
    phase_without: float

    def __post_init__(self) -> None:
        if self.target_shift not in ("pi", "half_pi"):
            raise ValueError(
                f"target_shift must be 'pi' or 'half_pi', got {self.target_shift!r}"
            )
        if self.transmission_with_signal < 0.0 or self.transmission_without_signal < 0.0:
            raise ValueError("transmissions must be >= 0")
        # NaN marks an extinguished output whose phase (and therefore
        # contrast) is undefined.
        if not (np.isnan(self.apm_contrast) or 0.0 <= self.apm_contrast <= np.pi):
            raise ValueError(f"apm_contrast must lie in [0, pi], got {self.apm_contrast}")


def circle_terms(alpha: float, delta: float) -> tuple[complex, complex]:
    """Center and phasor radius of the terminal probe-ratio circle.

    The balanced terminal probe ratio traces center + radius*exp(-i*phi_r)
    as phi_r is scanned; center and radius are the non-decaying and decaying
    mode weights.
    """
    return balanced_components(alpha, delta)


def terminal_probe_ratio(alpha: float, delta: float, phi_r) -> complex | np.ndarray:
    """Terminal probe field ratio of the balanced medium at loop phase phi_r."""
    center, radius = circle_terms(alpha, delta)
    return center + radius * np.exp(-1j * np.asarray(phi_r, dtype=float))


def no_signal_ratio(alpha: float, delta: float) -> complex:
    """Terminal probe ratio with the signal input switched off."""
    center, _ = circle_terms(alpha, delta)
    return center


def phi_r_for_pi_shift(alpha: float, delta: float) -> float:
    """Loop phase placing the terminal probe ratio on the negative real axis.

    The closed form 2*atan[(cos I - exp(-R))/sin I] makes the terminal ratio
    exactly real by construction; the point is only a pi shift when that real
    value is negative, otherwise the configuration is infeasible.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    r, i = attenuation_rotation(alpha, delta)
    s = np.sin(i)
    if s == 0.0:
        raise InfeasibleError(
            f"no pi solution at alpha={alpha}, delta={delta}: "
            "the decaying mode acquires no rotation"
        )
    phi = float(wrap_phase(2.0 * np.arctan((np.cos(i) - np.exp(-r)) / s)))
    ratio = terminal_probe_ratio(alpha, delta, phi)
    if abs(ratio.imag) > AXIS_TOL or ratio.real >= 0.0:
        raise InfeasibleError(
            f"no pi solution at alpha={alpha}, delta={delta}: "
            f"terminal ratio {ratio:.6g} is not on the negative real axis"
        )
    return phi


def phi_r_for_half_pi_shift(alpha: float, delta: float) -> float:
    """Loop phase placing the terminal probe ratio on the negative imaginary axis.

    Re[ratio] = 0 is solved by bracketed root finding over [0, 2*pi); among
    the roots with Im[ratio] < 0 the one with the highest transmission is
    returned.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    center, radius = circle_terms(alpha, delta)

    def re_ratio(phi: float) -> float:
        return (center + radius * np.exp(-1j * phi)).real

    nodes = np.linspace(0.0, TWO_PI, N_PHASE_BRACKETS + 1)
    values = center.real + (radius * np.exp(-1j * nodes)).real
    roots: list[float] = []
    for k in range(N_PHASE_BRACKETS):
        a, b = values[k], values[k + 1]
        if a == 0.0:
            roots.append(float(nodes[k]))
        elif a * b < 0.0:
            roots.append(float(brentq(re_ratio, nodes[k], nodes[k + 1])))
    best_phi = None
    best_t = -1.0
    for phi in roots:
        ratio = complex(center + radius * np.exp(-1j * phi))
        if ratio.imag >= 0.0:
            continue
        t = abs(ratio) ** 2
        if t > best_t:
            best_t, best_phi = t, float(wrap_phase(phi))
    if best_phi is None:
        raise InfeasibleError(
            f"no half-pi solution at alpha={alpha}, delta={delta}: "
            "the ratio circle does not reach the negative imaginary axis"
        )
    return best_phi


def apm_contrast(alpha: float, delta: float, phi_r: float) -> tuple[float, float, float]:
    """Probe output phases with and without the signal, and their contrast.

    Returns (phase_with, phase_without, contrast); contrast is the absolute
    wrapped phase difference in [0, pi].  Raises ZeroFieldError when either
    terminal field has vanished and its phase is undefined.
    """
    ratio_with = complex(terminal_probe_ratio(alpha, delta, phi_r))
    ratio_without = no_signal_ratio(alpha, delta)
    _, phase_with = transmission_and_phase(ratio_with)
    _, phase_without = transmission_and_phase(ratio_without)
    contrast = abs(float(wrap_signed(phase_with - phase_without)))
    return phase_with, phase_without, contrast


def _phi_solver(target_shift: str):
    if target_shift == "pi":
        return phi_r_for_pi_shift
    if target_shift == "half_pi":
        return phi_r_for_half_pi_shift
    raise ValueError(f"target_shift must be 'pi' or 'half_pi', got {target_shift!r}")


def _transmission_or_nan_phase(ratio: complex) -> tuple[float, float]:
    """Transmission plus principal phase, NaN phase for an extinguished field."""
    try:
        return transmission_and_phase(ratio)
    except ZeroFieldError:
        return abs(ratio) ** 2, np.nan


def operating_point(alpha: float, delta: float, target_shift: str) -> ApmOperatingPoint:
    """Evaluate the constrained modulation point at a fixed detuning.

    Either output can be extinguished (the with-signal one right at a
    critical depth, the signal-off one at resonance); the undefined phases
    and contrast are then reported as NaN.
    """
    phi = _phi_solver(target_shift)(alpha, delta)
    ratio_with = complex(terminal_probe_ratio(alpha, delta, phi))
    ratio_without = no_signal_ratio(alpha, delta)
    t_with, phase_with = _transmission_or_nan_phase(ratio_with)
    t_without, phase_without = _transmission_or_nan_phase(ratio_without)
    if np.isnan(phase_with) or np.isnan(phase_without):
        contrast = np.nan
    else:
        contrast = abs(float(wrap_signed(phase_with - phase_without)))
    return ApmOperatingPoint(
        alpha=float(alpha),
        delta=float(delta),
        phi_r=phi,
        target_shift=target_shift,
        transmission_with_signal=t_with,
        transmission_without_signal=t_without,
        apm_contrast=contrast,
        phase_with=phase_with,
        phase_without=phase_without,
    )


def _constrained_transmission(alpha: float, target_shift: str):
    solver = _phi_solver(target_shift)

    def transmission(delta: float) -> float:
        try:
            phi = solver(alpha, delta)
        except InfeasibleError:
            return np.nan
        return abs(complex(terminal_probe_ratio(alpha, delta, phi))) ** 2

    return transmission


def _refine_candidate(transmission, grid, scanned, k: int, tol: float) -> float:
    """Golden-refine an interior grid maximum, falling back to the node."""
    best_delta = float(grid[k])
    interior = (
        0 < k < grid.size - 1
        and np.isfinite(scanned[k - 1])
        and np.isfinite(scanned[k + 1])
    )
    if interior:
        try:
            result = minimize_scalar(
                lambda d: -transmission(d),
                bracket=(grid[k - 1], grid[k], grid[k + 1]),
                method="golden",
                options={"xtol": tol},
            )
            if np.isfinite(result.fun):
                best_delta = float(result.x)
        except ValueError:
            # Flat-topped bracket: the grid candidate already sits within tol.
            pass
    return best_delta


def scan_local_maxima(
    alpha: float,
    target_shift: str,
    delta_range: tuple[float, float] = DEFAULT_DELTA_RANGE,
    tol: float = DEFAULT_DELTA_TOL,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> list[ApmOperatingPoint]:
    """All local transmission maxima of the constrained detuning scan.

    The feasible set can split into several bands; every band contributes
    its local maxima (band edges included), each refined by golden-section
    search when it sits strictly inside the feasible region.  Points are
    returned in increasing detuning order.  Raises InfeasibleError when the
    whole range is infeasible.
    """
    lo, hi = float(delta_range[0]), float(delta_range[1])
    if not lo < hi:
        raise ValueError(f"delta_range must satisfy lo < hi, got {delta_range}")
    if scan_step <= 0.0 or tol <= 0.0:
        raise ValueError("scan_step and tol must be > 0")
    transmission = _constrained_transmission(alpha, target_shift)
    grid = np.arange(lo, hi + 0.5 * scan_step, scan_step)
    grid[-1] = min(grid[-1], hi)
    scanned = np.array([transmission(d) for d in grid])
    if not np.any(np.isfinite(scanned)):
        raise InfeasibleError(
            f"no feasible detuning for target {target_shift!r} in "
            f"[{lo}, {hi}] at alpha={alpha}"
        )
    points: list[ApmOperatingPoint] = []
    for k in range(grid.size):
        value = scanned[k]
        if not np.isfinite(value):
            continue
        left = scanned[k - 1] if k > 0 else np.nan
        right = scanned[k + 1] if k < grid.size - 1 else np.nan
        # An infeasible or missing neighbor makes this a band edge, which
        # still counts; >= on the left and > on the right breaks plateau ties.
        if not (np.isfinite(left) and value < left) and not (
            np.isfinite(right) and value <= right
        ):
            delta = _refine_candidate(transmission, grid, scanned, k, tol)
            points.append(operating_point(alpha, delta, target_shift))
    return points


def optimize_detuning(
    alpha: float,
    target_shift: str,
    delta_range: tuple[float, float] = DEFAULT_DELTA_RANGE,
    tol: float = DEFAULT_DELTA_TOL,
    scan_step: float = DEFAULT_SCAN_STEP,
) -> ApmOperatingPoint:
    """Detuning maximizing constrained probe transmission over `delta_range`.

    The best of the scan's local maxima (see scan_local_maxima).  Raises
    InfeasibleError when no detuning in the range admits the requested
    phase shift.
    """
    points = scan_local_maxima(alpha, target_shift, delta_range, tol, scan_step)
    return max(points, key=lambda point: point.transmission_with_signal)
