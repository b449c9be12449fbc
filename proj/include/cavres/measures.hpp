// measures.hpp: entanglement quantifiers for the four-qubit cavity-reservoir
// state and its subsystems.
//
// All results that are non-negative in exact arithmetic are clamped to 0 when
// they land in (-1e-10, 0); more negative values raise InvariantViolation.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "cavres/qmath.hpp"
#include "cavres/states.hpp"

namespace cavres {

/// Every entanglement quantity of one four-qubit state.
struct EntanglementReport {
    double c2_c1c2 = 0.0;
    double c2_r1r2 = 0.0;
    double c2_c1r1 = 0.0;
    double c2_c2r2 = 0.0;
    double c2_c1r2 = 0.0;
    double c2_c2r1 = 0.0;
    double c2_block = 0.0;  ///< C^2 across c1r1 | c2r2
    double e_bb = 0.0;
    double e_qb_c1 = 0.0;  ///< E_qB(c1 | c2 r2)
    double e_qb_r1 = 0.0;  ///< E_qB(r1 | c2 r2)
    double e_ms = 0.0;

    /// Field values in declaration order, for fieldwise comparisons.
    std::array<double, 11> values() const;
    static const std::array<const char*, 11>& field_names();
};

/// Largest fieldwise |a - b|.
double max_field_diff(const EntanglementReport& a, const EntanglementReport& b);

using ThreeQubitState = std::array<Complex, 8>;

struct ThreeTangleComponent {
    double weight = 0.0;
    ThreeQubitState state{};  ///< normalized
    double tangle = 0.0;
};

struct ThreeTangleDecomposition {
    std::array<std::size_t, 3> triple{};
    std::vector<ThreeTangleComponent> components;
    double reconstruction_error = 0.0;  ///< max |sum p_x phi_x - rho_triple|
    double max_tangle = 0.0;
};

/// Wootters concurrence of a two-qubit density matrix. Throws
/// std::invalid_argument for a non-unit trace and std::domain_error for a
/// matrix that is not positive semidefinite.
double concurrence(const DensityMatrix& rho);

/// Wootters concurrence of rho = W W^dagger for a 4 x k factor W. The values
/// sqrt(lambda_i) are the singular values of W^T (sigma_y x sigma_y) W.
double concurrence_from_factor(const ComplexMatrix& w);

/// sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4) before clamping at zero. Negative
/// values measure how far inside the separable region a state sits.
double wootters_margin_from_factor(const ComplexMatrix& w);

/// Squared concurrence of the (i, j) pair of a four-qubit pure state.
double pair_concurrence_squared(const FourQubitState& state, Qubit i, Qubit j);

/// tau = 2 (1 - tr rho^2) for a single-qubit density matrix.
double linear_entropy_tangle(const DensityMatrix& rho);

/// 2 (1 - tr rho_A^2) for the pure four-qubit state cut into `side` and its
/// complement.
double block_concurrence_squared(const FourQubitState& state, std::span<const Qubit> side);
double block_concurrence_squared(const FourQubitState& state);  ///< c1r1 | c2r2

/// C^2 between `qubit` and the two-qubit `block`, obtained by mapping the
/// block's (at most two-dimensional) support onto a logical qubit. Throws
/// std::domain_error when the block support is larger.
double qubit_to_block_concurrence_squared(const FourQubitState& state, Qubit qubit, std::array<Qubit, 2> block);

/// E_qB(i | jk) = C^2_{i|jk} - C^2_{ij} - C^2_{ik}.
double qubit_block_entanglement(const FourQubitState& state, Qubit qubit, std::array<Qubit, 2> block);

/// M_{c1r1} = C^2_{c1r1|c2r2} - (C^2_{c1c2} + C^2_{c1r2} + C^2_{r1c2} + C^2_{r1r2}).
double residual_entanglement(const FourQubitState& state);

/// E_ms = [sum_i tau_i - 2 sum_{i>j} C^2_ij] / 4.
double average_multipartite(const FourQubitState& state);

/// E_BB = M_{c1r1}. For states produced by the state builders this also
/// checks M = 2 E_ms and throws InvariantViolation when they disagree by
/// more than 1e-8.
double block_block_entanglement(const FourQubitState& state);

/// tau_i - C^2_ij - C^2_ik for a normalized three-qubit pure state, with i
/// chosen by `pivot`.
double pure_three_tangle(const ThreeQubitState& psi, std::size_t pivot = 0);

/// Two-branch pure-state decomposition of the reduced state on `triple`,
/// split by the basis value of the traced-out qubit. Throws
/// InvariantViolation if the mixture fails to reconstruct the reduced state to
/// 1e-10.
ThreeTangleDecomposition three_tangle_decomposition_check(const FourQubitState& state, std::array<Qubit, 3> triple);

/// Computes every report field from the state vector alone.
EntanglementReport full_report(const FourQubitState& state);

}  // namespace cavres
