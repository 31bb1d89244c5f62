"""
sim/cycles.py - Détection de cycle limite

Analyse la fenêtre post-transitoire d'une trajectoire:
- convergence vers un point (amplitudes négligeables)
- oscillation entretenue (amplitudes stables d'une demi-fenêtre à l'autre)
- divergence (norme au-delà de 10× la borne ultime)
Les extrema sont repérés par comparaison à trois points puis raffinés
par interpolation quadratique.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import find_peaks

from errors import TooShort
from model.params import State
from model.core import ultimate_bound

logger = logging.getLogger(__name__)

MIN_WINDOW_SAMPLES = 16
CONVERGED_TOL = 1e-4
AMPLITUDE_AGREEMENT = 0.01
DIVERGENCE_FACTOR = 10.0


@dataclass
class CycleReport:
    verdict: str
    amplitude_x: float
    amplitude_y: float
    period_estimate: Optional[float] = None
    attractor_point: Optional[State] = None
    peak_count: int = 0

    def to_dict(self) -> dict:
        return {
            'verdict': self.verdict,
            'amplitude_x': self.amplitude_x,
            'amplitude_y': self.amplitude_y,
            'period_estimate': self.period_estimate,
            'attractor_x': self.attractor_point.x if self.attractor_point else None,
            'attractor_y': self.attractor_point.y if self.attractor_point else None,
            'peak_count': self.peak_count,
        }


def refine_extremum(t: np.ndarray, v: np.ndarray, i: int) -> tuple:
    """
    Sommet de la parabole passant par les points i−1, i, i+1.

    Returns:
        Tuple (temps, valeur); le point brut si la parabole est dégénérée
    """
    ts = t[i - 1:i + 2] - t[i]
    coeffs = np.polyfit(ts, v[i - 1:i + 2], 2)
    if coeffs[0] == 0:
        return float(t[i]), float(v[i])
    offset = -coeffs[1] / (2.0 * coeffs[0])
    if not ts[0] <= offset <= ts[2]:
        return float(t[i]), float(v[i])
    return float(t[i] + offset), float(np.polyval(coeffs, offset))


def _extrema(t: np.ndarray, v: np.ndarray) -> tuple:
    """Maxima et minima raffinés: (temps des pics, valeurs des pics, valeurs des creux)."""
    peaks, _ = find_peaks(v)
    troughs, _ = find_peaks(-v)
    refined_peaks = [refine_extremum(t, v, i) for i in peaks]
    refined_troughs = [refine_extremum(t, v, i) for i in troughs]
    return (
        np.array([p[0] for p in refined_peaks]),
        np.array([p[1] for p in refined_peaks]),
        np.array([q[1] for q in refined_troughs]),
    )


def _amplitude(t: np.ndarray, v: np.ndarray) -> float:
    _, highs, lows = _extrema(t, v)
    if len(highs) and len(lows):
        return float(max(highs.max(), v.max()) - min(lows.min(), v.min()))
    return float(np.ptp(v))


def _agree(first: float, second: float) -> bool:
    return abs(first - second) <= AMPLITUDE_AGREEMENT * max(first, second)


def detect_limit_cycle(traj, config) -> CycleReport:
    """
    Verdict Converged / Oscillating / Diverged / Inconclusive.

    Args:
        traj: Trajectory
        config: SimConfig (t_end et transient_fraction)

    Returns:
        CycleReport

    Raises:
        TooShort: durée < 2× la fenêtre transitoire ou moins de 16
            échantillons après la fenêtre transitoire
    """
    times = np.asarray(traj.times, dtype=float)
    states = np.asarray(traj.states, dtype=float).reshape(-1, 2)
    transient = config.transient_fraction * config.t_end
    if len(times) == 0:
        raise TooShort("Trajectoire vide")
    span = times[-1] - times[0]
    if span < 2.0 * transient:
        raise TooShort(f"Durée {span:.6g} < 2× fenêtre transitoire ({transient:.6g})")

    window = times >= times[0] + transient
    if window.sum() < MIN_WINDOW_SAMPLES:
        raise TooShort(f"{int(window.sum())} échantillons après le transitoire (minimum {MIN_WINDOW_SAMPLES})")

    t = times[window]
    x = states[window, 0]
    y = states[window, 1]
    last = State(float(x[-1]), float(y[-1]))

    bound = ultimate_bound(traj.params_used).ultimate
    if np.max(np.abs(states[window])) > DIVERGENCE_FACTOR * bound:
        return CycleReport(verdict="Diverged", amplitude_x=float(np.ptp(x)), amplitude_y=float(np.ptp(y)))

    amp_x, amp_y = _amplitude(t, x), _amplitude(t, y)
    threshold = CONVERGED_TOL * (1.0 + last.norm_inf())
    if amp_x <= threshold and amp_y <= threshold:
        return CycleReport(verdict="Converged", amplitude_x=amp_x, amplitude_y=amp_y, attractor_point=last)

    peak_times, _, _ = _extrema(t, x)
    if len(peak_times) >= 4:
        half = t[0] + (t[-1] - t[0]) / 2.0
        first, second = t <= half, t >= half
        stable = (
            _agree(_amplitude(t[first], x[first]), _amplitude(t[second], x[second]))
            and _agree(_amplitude(t[first], y[first]), _amplitude(t[second], y[second]))
        )
        if stable:
            return CycleReport(
                verdict="Oscillating",
                amplitude_x=amp_x,
                amplitude_y=amp_y,
                period_estimate=float(np.mean(np.diff(peak_times))),
                peak_count=len(peak_times),
            )
        logger.info(f"Amplitudes non stabilisées entre demi-fenêtres ({len(peak_times)} pics)")

    return CycleReport(verdict="Inconclusive", amplitude_x=amp_x, amplitude_y=amp_y, peak_count=len(peak_times))
