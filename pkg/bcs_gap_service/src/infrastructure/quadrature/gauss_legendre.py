from functools import lru_cache

import numpy as np

from bcs_gap_service.src.core.constants import MAX_POINTS_PER_PANEL, MIN_POINTS_PER_PANEL
from bcs_gap_service.src.core.exceptions import DegenerateInterval, InvalidParameter
from bcs_gap_service.src.domain.models.quadrature import QuadratureRule


@lru_cache(maxsize=MAX_POINTS_PER_PANEL)
def _reference_rule(points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(points)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def build_interval_rule(lower: float, upper: float, panels: int, points_per_panel: int) -> QuadratureRule:
    """Composite Gauss-Legendre rule with ``panels`` equal panels on [lower, upper]."""
    if not lower < upper:
        raise DegenerateInterval(f"Interval [{lower}, {upper}] is empty", lower=lower, upper=upper)
    if panels < 1:
        raise InvalidParameter(f"panels must be >= 1, got {panels}")
    if not MIN_POINTS_PER_PANEL <= points_per_panel <= MAX_POINTS_PER_PANEL:
        raise InvalidParameter(
            f"points_per_panel must lie in [{MIN_POINTS_PER_PANEL}, {MAX_POINTS_PER_PANEL}], got {points_per_panel}"
        )

    reference_nodes, reference_weights = _reference_rule(points_per_panel)
    edges = np.linspace(lower, upper, panels + 1)
    half_widths = 0.5 * np.diff(edges)
    midpoints = 0.5 * (edges[:-1] + edges[1:])

    nodes = (midpoints[:, None] + half_widths[:, None] * reference_nodes[None, :]).ravel()
    weights = (half_widths[:, None] * reference_weights[None, :]).ravel()

    return QuadratureRule(
        lower=float(lower),
        upper=float(upper),
        panels=panels,
        points_per_panel=points_per_panel,
        nodes=nodes,
        weights=weights
    )


def build_rule(epsilon: float, hbar_omega_d: float, panels: int, points_per_panel: int) -> QuadratureRule:
    """Rule on the energy interval [epsilon, hbar_omega_d]."""
    return build_interval_rule(epsilon, hbar_omega_d, panels, points_per_panel)
