import numpy as np

from bcs_gap_service.src.core.constants import HEAT_WEIGHT_SERIES_THRESHOLD, TANH_OVER_SERIES_THRESHOLD

# Maclaurin coefficients of g(eta) = 1/(eta^2 cosh^2 eta) - tanh(eta)/eta^3 in powers of eta^2
_HEAT_WEIGHT_SERIES = (
    -2.0 / 3.0,
    8.0 / 15.0,
    -34.0 / 105.0,
    496.0 / 2835.0,
    -2764.0 / 31185.0,
    12.0 * 21844.0 / 6081075.0,
)


def _as_output(values: np.ndarray, scalar: bool) -> float | np.ndarray:
    return float(values.reshape(-1)[0]) if scalar else values


def tanh_over(z: float | np.ndarray) -> float | np.ndarray:
    """tanh(z)/z for z >= 0, equal to 1 at the origin."""
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)

    out = np.empty_like(z)
    small = z <= TANH_OVER_SERIES_THRESHOLD
    z_small = z[small]
    out[small] = 1.0 - z_small**2 / 3.0 + 2.0 * z_small**4 / 15.0
    z_large = z[~small]
    out[~small] = np.tanh(z_large) / z_large

    return _as_output(out, scalar)


def sech_squared(z: float | np.ndarray) -> float | np.ndarray:
    """1/cosh^2(z) without overflow for large |z|."""
    z = np.asarray(z, dtype=float)
    decay = np.exp(-2.0 * np.abs(z))
    out = 4.0 * decay / (1.0 + decay) ** 2
    return _as_output(out, z.ndim == 0)


def heat_jump_weight(eta: float | np.ndarray) -> float | np.ndarray:
    """g(eta) = 1/(eta^2 cosh^2 eta) - tanh(eta)/eta^3, negative on [0, inf) with g(0) = -2/3."""
    eta = np.asarray(eta, dtype=float)
    scalar = eta.ndim == 0
    eta = np.atleast_1d(eta)

    out = np.empty_like(eta)
    small = eta <= HEAT_WEIGHT_SERIES_THRESHOLD
    eta_squared = eta[small] ** 2
    out[small] = np.polynomial.polynomial.polyval(eta_squared, _HEAT_WEIGHT_SERIES)

    eta_large = eta[~small]
    out[~small] = sech_squared(eta_large) / eta_large**2 - np.tanh(eta_large) / eta_large**3

    return _as_output(out, scalar)
