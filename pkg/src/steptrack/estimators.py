"""Peak estimation from beacon samples.

With the quadratic coefficients known a priori, the beacon surface is
linear in the remaining parameters. Moving the squared terms to the
left side, each sample (az_i, el_i, L_i) yields one linear equation

    L_i - k_az*az_i**2 - k_el*el_i**2 = b1*az_i + b2*el_i + b3

whose coefficient vector b encodes the peak:

    b = [-2*k_az*peak_az, -2*k_el*peak_el,
         peak_level + k_az*peak_az**2 + k_el*peak_el**2]

``ls_fit`` solves the whole batch at once; the recursive variant keeps
only a 3-vector and a 3x3 gain matrix, optionally down-weighting old
samples through a forgetting factor, which both bounds memory and lets
the fit follow a slowly moving peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

import numpy as np

from .antenna import BeaconSample
from .beacon import QuadraticCoefficients

# Reciprocal-condition threshold below which the regressor matrix is
# treated as rank deficient. Rectangle patterns sit far above this, so
# any trip indicates a broken displacement pattern.
RCOND_LIMIT = 1e-12

# Smallest usable quadratic-coefficient magnitude, dB/deg^2. Below it
# the peak recovery divides by a near-zero curvature.
DEFAULT_COEFF_FLOOR = 0.01

DEFAULT_RLS_DELTA = 1e4


class EstimationError(Exception):
    """Base class for estimator failures."""


class InsufficientDataError(EstimationError):
    """Fewer samples than unknowns."""


class RankDeficientError(EstimationError):
    """Sample positions do not span the regressor space."""


class DegenerateCoefficientsError(EstimationError):
    """Quadratic coefficient magnitude below the configured floor."""


@dataclass(frozen=True)
class RegressionRow:
    """One sample mapped into the linear regression."""

    regressors: np.ndarray  # [azimuth, elevation, 1.0]
    response: float


@dataclass(frozen=True)
class PeakEstimate:
    azimuth: float  # deg
    elevation: float  # deg
    level: float  # dB


@dataclass(frozen=True)
class RlsState:
    """Recursive filter memory: coefficients, gain matrix, forgetting factor.

    ``cov`` stays symmetric positive-definite; updates re-symmetrize it
    to keep finite-precision drift out.
    """

    coeffs: np.ndarray  # shape (3,)
    cov: np.ndarray  # shape (3, 3)
    forgetting: float


def regression_row(sample: BeaconSample, k: QuadraticCoefficients) -> RegressionRow:
    """Map a beacon sample to its linear-regression row."""
    az, el = sample.azimuth, sample.elevation
    response = sample.level - k.k_az * az * az - k.k_el * el * el
    return RegressionRow(
        regressors=np.array([az, el, 1.0]), response=float(response)
    )


def ls_fit(rows: Sequence[RegressionRow]) -> np.ndarray:
    """Least-squares coefficient vector for a batch of rows.

    Solved through an orthogonal factorization with the angle columns
    shifted to their means, which is the same minimizer as the normal
    equations but keeps the solve well conditioned at large absolute
    pointing angles.

    Raises InsufficientDataError for fewer than 3 rows and
    RankDeficientError when the positions are collinear (reciprocal
    condition estimate below RCOND_LIMIT).
    """
    n = len(rows)
    if n < 3:
        raise InsufficientDataError(f"need at least 3 samples, got {n}")
    x = np.array([row.regressors for row in rows])
    y = np.array([row.response for row in rows])
    mean_az = x[:, 0].mean()
    mean_el = x[:, 1].mean()
    shifted = np.column_stack([x[:, 0] - mean_az, x[:, 1] - mean_el, np.ones(n)])
    solution, _, rank, sv = np.linalg.lstsq(shifted, y, rcond=None)
    rcond = sv[-1] / sv[0] if sv[0] > 0 else 0.0
    if rank < 3 or rcond < RCOND_LIMIT:
        raise RankDeficientError(
            f"sample positions are rank deficient "
            f"(rank {rank}, reciprocal condition {rcond:.3e})"
        )
    return np.array(
        [
            solution[0],
            solution[1],
            solution[2] - solution[0] * mean_az - solution[1] * mean_el,
        ]
    )


def recover_peak(
    beta: np.ndarray,
    k: QuadraticCoefficients,
    coeff_floor: float = DEFAULT_COEFF_FLOOR,
) -> PeakEstimate:
    """Invert the coefficient vector back to (peak_az, peak_el, peak_level)."""
    if abs(k.k_az) < coeff_floor or abs(k.k_el) < coeff_floor:
        raise DegenerateCoefficientsError(
            f"|k_az|={abs(k.k_az):.3g}, |k_el|={abs(k.k_el):.3g} "
            f"below floor {coeff_floor}"
        )
    az = -beta[0] / (2.0 * k.k_az)
    el = -beta[1] / (2.0 * k.k_el)
    level = beta[2] - k.k_az * az * az - k.k_el * el * el
    return PeakEstimate(azimuth=float(az), elevation=float(el), level=float(level))


def rls_init(forgetting: float, delta: float = DEFAULT_RLS_DELTA) -> RlsState:
    """Fresh filter state: zero coefficients, delta-scaled identity gain."""
    if not 0.0 < forgetting <= 1.0:
        raise ValueError(f"forgetting factor must be in (0, 1], got {forgetting}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return RlsState(
        coeffs=np.zeros(3), cov=delta * np.eye(3), forgetting=forgetting
    )


def rls_update(state: RlsState, row: RegressionRow) -> tuple[RlsState, float]:
    """One recursion step; returns the new state and the prediction residual.

    Applies, in order: normalized gain matrix, gain vector, prediction,
    residual, coefficient correction, and the forgetting-scaled
    downdate of the gain matrix, which is then re-symmetrized.
    """
    x = row.regressors
    if not (np.isfinite(x).all() and math.isfinite(row.response)):
        raise ValueError(f"non-finite regression row: {row}")
    p = state.cov
    lam = state.forgetting
    px = p @ x
    q = p / (lam + float(x @ px))
    gain = q @ x
    predicted = float(x @ state.coeffs)
    residual = row.response - predicted
    coeffs = state.coeffs + gain * residual
    new_p = (np.eye(3) - np.outer(gain, x)) @ p / lam
    new_p = 0.5 * (new_p + new_p.T)
    return RlsState(coeffs=coeffs, cov=new_p, forgetting=lam), residual


def memory_horizon(forgetting: float) -> float:
    """Effective sample memory 1/(1 - forgetting); inf for forgetting = 1.

    Computed in decimal arithmetic so that decimal-specified factors
    give exact horizons (0.98 -> 50, not 49.999...96).
    """
    if not 0.0 < forgetting <= 1.0:
        raise ValueError(f"forgetting factor must be in (0, 1], got {forgetting}")
    if forgetting == 1.0:
        return math.inf
    return float(Decimal(1) / (Decimal(1) - Decimal(repr(forgetting))))


def rls_recover(
    state: RlsState,
    k: QuadraticCoefficients,
    coeff_floor: float = DEFAULT_COEFF_FLOOR,
) -> PeakEstimate:
    """Peak implied by the current filter coefficients."""
    return recover_peak(state.coeffs, k, coeff_floor)
