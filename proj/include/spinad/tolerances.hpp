/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

/// Central numerical tolerances. Every check in the library and in the
/// acceptance suite reads its threshold from here; nothing is tuned locally.
namespace spinad::tol {

/// Relative residual for asserting a polynomial relation G^(2m+1) = sum c_j G^(2j+1),
/// measured as max-abs(residual) / max-abs(G^(2m+1)).
inline constexpr double relation_relative = 1e-12;

/// Acceptance threshold used by find_minimal_polynomial when scanning degrees.
inline constexpr double relation_discovery_relative = 1e-10;

/// Residual threshold for the dense brute-force minimal polynomial search.
inline constexpr double bruteforce_residual_relative = 1e-10;

/// Agreement between rediscovered and reference relation coefficients.
inline constexpr double bruteforce_coefficient_abs = 1e-9;

/// Entry-wise agreement between synthesized and tabulated closed-form
/// coefficients (amplitudes and frequencies alike).
inline constexpr double coefficient_match_abs = 1e-12;

/// 2-norm agreement between the closed-form exponential applied to a unit
/// vector and the dense scaling-and-squaring oracle.
inline constexpr double oracle_vector_2norm = 1e-12;

/// Max-abs of exp(tG)^T exp(tG) - I, matrix assembled column by column.
inline constexpr double unitarity_max_abs = 1e-12;

/// Group property exp(t1 G) exp(t2 G) v = exp((t1+t2) G) v, 2-norm.
inline constexpr double group_property_2norm = 1e-12;

/// Max-abs of the commutator of a spin-adapted generator with S^2 or S_z.
inline constexpr double spin_commutator_max_abs = 1e-12;

/// Residual norm ||S^2 psi - s(s+1) psi|| for spin-sector preservation.
inline constexpr double spin_state_residual = 1e-10;

/// A generic mixed-spin fermionic double must break S^2 symmetry at least
/// this much on some configuration (motivating contrast, not a tolerance).
inline constexpr double symmetry_break_floor = 1e-3;

/// Skew-symmetry of generator matrices, max-abs of M + M^T.
inline constexpr double skew_symmetry_max_abs = 1e-14;

/// Trace-orthogonality of singlet- vs triplet-intermediate doubles.
inline constexpr double trace_orthogonality = 1e-12;

/// Relative agreement between adjoint-sweep gradients and central finite
/// differences (step 1e-5).
inline constexpr double gradient_fd_relative = 1e-6;

/// Agreement between the adjoint sweep and the naive quadratic-cost gradient.
inline constexpr double gradient_naive_abs = 1e-10;

/// Max-abs of [H, S^2] and [H, S_z] for assembled spin-free Hamiltonians.
inline constexpr double hamiltonian_spin_commutator = 1e-11;

/// Norm deviation of a product-ansatz state from 1.
inline constexpr double state_norm_deviation = 1e-12;

/// Characteristic-root diagnostics inside derive_closed_form: imaginary
/// parts, sign margins and pairwise separations are measured against
/// max(1, |root|) with these factors.
inline constexpr double root_imaginary = 1e-10;
inline constexpr double root_negative_margin = 1e-10;
inline constexpr double root_separation = 1e-8;

} // namespace spinad::tol
