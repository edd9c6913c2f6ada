"""Critical optical depths and the discontinuous output-phase jump.

At special combinations of optical depth and detuning the balanced medium
drives one output field exactly through zero, and the output phase of that
field jumps discontinuously as the loop phase phi_r is scanned.  This module
evaluates the critical depths, the loop phases at which the jumps sit, and
locates field zeros numerically along sampled curves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MediumParams, wrap_phase
from .steady_state import PropagationCurve

#: |ratio| below this at the refined minimum counts as an exact field zero.
ZERO_MAGNITUDE_TOL = 1e-9

#: Fraction of one grid step: refined minima closer to zero than the field
#: travels over this fraction of a step are classified as zero crossings.
GRID_WINDOW_FRACTION = 0.1


@dataclass(frozen=True)
class JumpSolution:
    """A critical depth with the loop phases of both output-phase jumps."""

    order: int
    delta: float
    critical_depth: float
    probe_jump_phase: float
    signal_jump_phase: float


def attenuation_rotation(alpha: float, delta: float) -> tuple[float, float]:
    """Log-magnitude R and rotation angle I of the decaying-mode factor.

    The balanced-drive factor is exp(R - i*I) with
    R = -(alpha/2)/(delta^2 + 1) and I = -(alpha/2)*delta/(delta^2 + 1)
    negated, i.e. I = (alpha/2)*delta/(delta^2 + 1).
    """
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    denom = delta * delta + 1.0
    r = -0.5 * alpha / denom
    i = 0.5 * alpha * delta / denom
    return r, i


def critical_depth(delta: float, n: int = 1) -> float:
    """Optical depth at which the n-th field zero becomes reachable.

    alpha_c = n*pi*(delta^2 + 1)/|delta| for odd positive n.  At delta = 0
    the decaying mode only attenuates and never rotates, so no zero exists
    at any depth.
    """
    if delta == 0.0:
        raise ValueError("no critical depth exists at delta = 0")
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jump order must be a positive odd integer, got {n}")
    return n * np.pi * (delta * delta + 1.0) / abs(delta)


def _jump_phase(delta: float, n: int, branch_sign: float) -> float:
    """Shared closed form for the two jump phases, wrapped to [0, 2*pi).

    Negative detuning reverses the rotation sense of the decaying mode,
    which is equivalent to negating the order n; that swaps the roles of
    the two output fields.  The swap is absorbed into the sign of x.
    """
    if delta == 0.0:
        raise ValueError("jump phases are undefined at delta = 0")
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jump order must be a positive odd integer, got {n}")
    x = branch_sign * np.sign(delta) * np.sin(0.5 * np.pi * n) * np.exp(
        0.5 * np.pi * n / abs(delta)
    )
    return float(wrap_phase(2.0 * np.arctan(x)))


def jump_phase_probe(delta: float, n: int = 1) -> float:
    """Loop phase at which the probe output phase jumps, at the critical depth."""
    return _jump_phase(delta, n, -1.0)


def jump_phase_signal(delta: float, n: int = 1) -> float:
    """Loop phase at which the signal output phase jumps, at the critical depth."""
    return _jump_phase(delta, n, +1.0)


def solve_jump(delta: float, n: int = 1) -> JumpSolution:
    """Critical depth and both jump phases for the n-th zero at detuning delta."""
    return JumpSolution(
        order=n,
        delta=delta,
        critical_depth=critical_depth(delta, n),
        probe_jump_phase=jump_phase_probe(delta, n),
        signal_jump_phase=jump_phase_signal(delta, n),
    )


def _refine_minimum(zeta: np.ndarray, mag_sq: np.ndarray, k: int) -> tuple[float, float]:
    """Vertex of the parabola through samples k-1, k, k+1 of |ratio|^2.

    Returns (zeta*, value*) with the vertex clamped to the bracketing
    interval; value* is clamped at 0 since |ratio|^2 cannot be negative.
    """
    z0, z1, z2 = zeta[k - 1], zeta[k], zeta[k + 1]
    v0, v1, v2 = mag_sq[k - 1], mag_sq[k], mag_sq[k + 1]
    h = z1 - z0
    # Uniform-grid parabola: v(z1 + s*h) = a*s^2 + b*s + v1.
    a = 0.5 * (v0 + v2) - v1
    b = 0.5 * (v2 - v0)
    if a <= 0.0:
        return float(z1), float(v1)
    s = np.clip(-b / (2.0 * a), -1.0, 1.0)
    value = a * s * s + b * s + v1
    return float(z1 + s * h), float(max(value, 0.0))


def _curvature_scale(mag_sq: np.ndarray, k: int) -> float:
    """Quadratic coefficient a of |ratio|^2 around sample k, in grid units."""
    return 0.5 * (mag_sq[k - 1] + mag_sq[k + 1]) - mag_sq[k]


def zero_crossings(
    curve: PropagationCurve,
    which: str = "probe",
    magnitude_tol: float = ZERO_MAGNITUDE_TOL,
) -> list[float]:
    """All zeta positions where the chosen field ratio passes through zero.

    Local minima of |ratio|^2 are refined by a three-point parabola.  A
    minimum counts as a zero when the refined magnitude is below
    `magnitude_tol`, or when the refined minimum value is smaller than the
    change of |ratio|^2 over a small fraction of one grid step (the sampled
    curve cannot distinguish such a near-miss from an exact zero).
    """
    if which == "probe":
        ratio = curve.probe_ratio
    elif which == "signal":
        ratio = curve.signal_ratio
    else:
        raise ValueError(f"which must be 'probe' or 'signal', got {which!r}")
    mag_sq = np.abs(ratio) ** 2
    zeta = curve.zeta_grid
    if mag_sq.size < 3:
        return []
    found: list[float] = []

    def classify(k: int) -> None:
        z_star, v_star = _refine_minimum(zeta, mag_sq, k)
        if np.sqrt(v_star) < magnitude_tol:
            found.append(z_star)
            return
        a = _curvature_scale(mag_sq, k)
        if a > 0.0 and v_star < (GRID_WINDOW_FRACTION**2) * a:
            found.append(z_star)

    for k in range(1, len(mag_sq) - 1):
        if mag_sq[k] <= mag_sq[k - 1] and mag_sq[k] < mag_sq[k + 1]:
            classify(k)
    # A zero can sit at the far boundary (e.g. a curve traced exactly to a
    # critical depth); refine it through the window centered one step in.
    if mag_sq[-1] < mag_sq[-2]:
        classify(len(mag_sq) - 2)
    return found


def detect_zero_crossing(
    curve: PropagationCurve,
    which: str = "probe",
    magnitude_tol: float = ZERO_MAGNITUDE_TOL,
) -> float | None:
    """First zero of the chosen field ratio along the curve, or None."""
    zeros = zero_crossings(curve, which, magnitude_tol)
    return zeros[0] if zeros else None
