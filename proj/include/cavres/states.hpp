// states.hpp: initial and evolved states of two cavity-reservoir pairs.
//
// Four-qubit states are indexed |c1 r1 c2 r2>, with c1 the most significant
// bit. Each cavity-reservoir pair evolves under the single-excitation
// isometry |00> -> |00>, |10> -> xi|10> + chi|01>.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "cavres/qmath.hpp"

namespace cavres {

enum class Qubit : std::size_t { c1 = 0, r1 = 1, c2 = 2, r2 = 3 };

constexpr std::size_t index_of(Qubit q) { return static_cast<std::size_t>(q); }

/// Symmetric initial state alpha|00> + beta|11> on (c1, c2), the R_y angle
/// gamma applied to c1, and the dissipation rate kappa.
struct EffectiveParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double kappa = 1.0;

    /// alpha = 1/sqrt(10), beta = 3/sqrt(10), kappa = 1.
    static EffectiveParams running_example(double gamma = 0.0);

    /// Throws std::invalid_argument unless alpha, beta >= 0 with
    /// alpha^2 + beta^2 = 1 (1e-12), gamma in [0, pi], kappa > 0.
    void validate() const;
};

/// U = e^{i zeta} R_z(eta) R_y(gamma) R_z(delta).
struct LUParams {
    double zeta = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;

    ComplexMatrix unitary() const;
};

struct DissipationAmplitudes {
    double xi = 1.0;
    double chi = 0.0;

    DissipationAmplitudes swapped() const { return {chi, xi}; }
};

/// xi = exp(-kappa t / 2), chi = sqrt(1 - exp(-kappa t)).
DissipationAmplitudes dissipation_amplitudes(double kappa, double t);

/// Same amplitudes as a function of the dimensionless time kappa*t.
DissipationAmplitudes dissipation_at(double kappa_t);

/// Which builder produced a state. Identities that hold only for the
/// cavity-reservoir family (e.g. E_BB = 2 E_ms) are asserted on builder output.
enum class StateOrigin { external, effective, general };

class FourQubitState {
  public:
    static constexpr std::size_t kDim = 16;
    using Amplitudes = std::array<Complex, kDim>;

    /// Throws std::invalid_argument if the norm differs from 1 by more than 1e-12.
    explicit FourQubitState(const Amplitudes& amps, StateOrigin origin = StateOrigin::external);

    /// |0000>
    static FourQubitState vacuum();

    Complex amplitude(int c1, int r1, int c2, int r2) const;
    std::span<const Complex> amplitudes() const { return amps_; }
    StateOrigin origin() const { return origin_; }
    double norm() const;

  private:
    Amplitudes amps_{};
    StateOrigin origin_ = StateOrigin::external;
};

/// a1|00> + a2|01> + a3|10> + a4|11> on (c1, c2); reservoirs in vacuum.
struct GeneralInitialState {
    std::array<Complex, 4> a{Complex{1.0, 0.0}, 0.0, 0.0, 0.0};

    /// Throws std::invalid_argument if not normalized within 1e-12.
    void validate() const;
};

/// The per-pair isometry applied to a (c1, c2) amplitude vector.
FourQubitState apply_pair_isometry(const std::array<Complex, 4>& cavities, DissipationAmplitudes amp,
                                   StateOrigin origin);

FourQubitState effective_output_state(const EffectiveParams& p, double t);
FourQubitState effective_output_state(const EffectiveParams& p, DissipationAmplitudes amp);

FourQubitState general_output_state(const GeneralInitialState& init, double kappa, double t);
FourQubitState general_output_state(const GeneralInitialState& init, DissipationAmplitudes amp);

/// Exact output for the full LU operation on c1 (no reduction to R_y).
FourQubitState lu_modulated_output(const LUParams& lu, double alpha, double beta, double kappa, double t);

DensityMatrix reduced_density(const FourQubitState& state, std::span<const std::size_t> subsystems);
DensityMatrix reduced_density(const FourQubitState& state, std::initializer_list<Qubit> subsystems);

/// Branch factor W with reduced_density = W W^dagger (see branch_factor()).
ComplexMatrix reduced_factor(const FourQubitState& state, std::initializer_list<Qubit> subsystems);

using StateFamily = std::function<FourQubitState(DissipationAmplitudes)>;

/// max |rho_c1c2(xi, chi) - rho_r1r2(chi, xi)| entrywise over the kappa*t grid.
double xi_chi_swap_check(const StateFamily& family, std::span<const double> kappa_t_grid);

}  // namespace cavres
