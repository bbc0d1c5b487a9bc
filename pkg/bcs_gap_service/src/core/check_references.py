# Statement each verification check exercises, keyed by check id
CHECK_REFERENCES = {
    "model.validation": "pinched kernel U1 < U < U2",
    "model.kernel_pinched": "pinched kernel U1 < U < U2",
    "quadrature.weight_sum": "band quadrature on [epsilon, hbar_omega_d]",
    "quadrature.polynomial_exactness": "band quadrature on [epsilon, hbar_omega_d]",
    "quadrature.tanh_over_monotone": "tanh(z)/z strictly decreasing",
    "quadrature.sech_bound": "z sech^2 z <= tanh z",
    "quadrature.heat_weight_negative": "heat-jump weight g(eta) < 0",
    "quadrature.heat_weight_flat_origin": "heat-jump weight is C1 with g'(0) = 0",
    "quadrature.panel_convergence": "band quadrature on [epsilon, hbar_omega_d]",
    "simple.tau_order": "constant-coupling gap ordering",
    "simple.gap_order": "constant-coupling gap ordering",
    "simple.root_residuals": "constant-coupling gap equation",
    "simple.closed_form": "zero-temperature constant-coupling gap",
    "simple.oracle_scan": "constant-coupling gap equation",
    "simple.flat_origin": "smoothness of the constant-coupling gap at T = 0",
    "simple.curve_decreasing": "constant-coupling gap decreasing and vanishing at tau",
    "simple.slope_blowup": "square-root onset of the constant-coupling gap",
    "operator.critical_bracket": "tau_1 <= T_c <= tau_2",
    "operator.critical_rho": "T_c as the unit spectral radius of the linearized operator",
    "operator.spectral_bracket": "T_c as the unit spectral radius of the linearized operator",
    "operator.zero_row": "gap operator on the invariant box",
    "operator.envelope": "gap operator on the invariant box",
    "operator.temperature_monotone": "gap operator nonincreasing in T",
    "operator.lipschitz_bound": "contraction constant of the gap operator",
    "operator.alpha_dominates_perron": "contraction constant of the gap operator",
    "operator.critical_rank_one": "constant kernel reduces to the constant-coupling gap",
    "operator.constant_kernel_fixed_point": "constant kernel reduces to the constant-coupling gap",
    "operator.solver_bracket_above": "gap vanishes for T >= T_c",
    "operator.solver_bracket_below": "positive gap below T_c",
    "window.certified": "contraction constant of the gap operator",
    "operator.empirical_ratio": "contraction constant of the gap operator",
    "operator.monotone_iterates": "monotone iteration from the upper envelope",
    "operator.fixed_point_residual": "a-posteriori fixed-point error bound",
    "surface.sandwich": "gap sandwiched between the constant-coupling gaps",
    "surface.temperature_monotone": "gap nonincreasing in T",
    "surface.critical_row_zero": "gap vanishes for T >= T_c",
    "expansion.v_positive": "squared-gap expansion near T_c",
    "expansion.half_window_stability": "squared-gap expansion near T_c",
    "expansion.slope_consistency": "slope equation for v",
    "expansion.curvature_consistency": "curvature equation for w",
    "expansion.eigenfunction_shape": "slope equation for v",
    "expansion.weak_coupling": "weak-coupling limit of the slope",
    "thermo.psi_at_critical": "potential difference vanishes at T_c",
    "thermo.first_derivative_vanishes": "second-order transition at T_c",
    "thermo.curvature_negative": "second-order transition at T_c",
    "thermo.curvature_forms_agree": "specific-heat jump formula",
    "thermo.jump_positive": "specific-heat jump formula",
    "thermo.jump_triangle": "specific-heat jump formula",
    "thermo.jump_triangle_refined": "specific-heat jump formula",
    "thermo.psi_nonpositive": "superconducting state below the normal state",
    "thermo.entropy_sign": "superconducting state below the normal state",
    "thermo.psi_monotone_upper": "superconducting state below the normal state",
    "thermo.error_bound_informative": "potential error bound",
    "thermo.homogeneity": "linearity in the density of states",
    "thermo.cutoff_divergence": "lower cutoff epsilon keeps dPsi/dT finite at T_c",
    "thermo.cutoff_curvature_finite": "lower cutoff epsilon keeps dPsi/dT finite at T_c",
    "thermo.weak_coupling_jump": "weak-coupling limit of the specific-heat jump",
}

STAGE_REFERENCES = {
    "grid_resolution": "temperature grid requirements",
    "completed": "solver stage preconditions",
}
