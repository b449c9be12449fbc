// reservoir.hpp: exact single-excitation dynamics of one cavity coupled to N
// discrete reservoir modes, used to check the exponential-decay amplitudes.
//
// Work is done in the frame rotating at the cavity frequency, so the
// Hamiltonian diagonal is (0, omega_1 - omega, ..., omega_N - omega).

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "cavres/qmath.hpp"

namespace cavres {

/// Requested time lies beyond the recurrence horizon 2 pi / Delta.
class HorizonError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct ReservoirSpec {
    std::size_t n_modes = 400;
    double center_frequency = 0.0;
    double bandwidth = 40.0;  ///< W, in the same units as kappa
    double kappa = 1.0;

    /// N = 400, W = 40 kappa.
    static ReservoirSpec defaults(double kappa = 1.0);

    /// Throws std::invalid_argument unless N >= 2, W > 0, kappa > 0.
    void validate() const;

    double spacing() const { return bandwidth / static_cast<double>(n_modes); }
    /// g = sqrt(kappa Delta / 2 pi), so that kappa = 2 pi g^2 / Delta.
    double coupling() const;
    /// omega_k = omega + (k - (N + 1) / 2) Delta for k = 1..N.
    std::vector<double> mode_frequencies() const;
    double recurrence_horizon() const;
    /// Throws HorizonError when t is negative or not below the horizon.
    void require_within_horizon(double t) const;
};

struct SingleExcitationState {
    Complex cavity_amplitude{1.0, 0.0};
    std::vector<Complex> mode_amplitudes;

    double mode_population() const;
    double norm() const;
};

/// (N+1) x (N+1) Hamiltonian in the basis (cavity, mode 1, ..., mode N), with
/// coupling g_k between the cavity and mode k at (0, k) and conj(g_k) at (k, 0).
ComplexMatrix build_hamiltonian(double cavity_frequency, std::span<const double> mode_frequencies,
                                std::span<const Complex> couplings);

/// Rotating-frame Hamiltonian of a spec with uniform real couplings.
ComplexMatrix build_hamiltonian(const ReservoirSpec& spec);

/// Same spec with every coupling multiplied by e^{i eta}: the cavity phase
/// rotation R_z(eta) conjugated into the interaction.
ComplexMatrix build_phase_rotated_hamiltonian(const ReservoirSpec& spec, double eta);

/// exp(-i H t) applied to the cavity-excited state. The eigendecomposition is
/// computed once and shared by copies.
class SingleExcitationPropagator {
  public:
    explicit SingleExcitationPropagator(const ComplexMatrix& hamiltonian);

    /// Throws InvariantViolation if the norm drifts from 1 by more than 1e-10.
    SingleExcitationState evolve(double t) const;

  private:
    struct Cache;
    std::shared_ptr<const Cache> cache_;
};

/// Throws HorizonError if t is outside [0, 2 pi / Delta).
SingleExcitationState evolve_single_excitation(const ReservoirSpec& spec, double t);

struct FlatSpectrumReport {
    double amplitude_deviation = 0.0;   ///< max | |c(t)| - exp(-kappa t / 2) |
    double population_deviation = 0.0;  ///< max | sum_k |b_k(t)|^2 - (1 - exp(-kappa t)) |
};

FlatSpectrumReport flat_spectrum_report(const ReservoirSpec& spec, std::span<const double> t_samples);

/// The amplitude part of flat_spectrum_report().
double validate_flat_spectrum(const ReservoirSpec& spec, std::span<const double> t_samples);

/// Largest difference of |cavity| and of each |mode_k| between evolution
/// under H and under the phase-rotated H'.
double phase_rotation_equivalence(const ReservoirSpec& spec, double eta, double t);

}  // namespace cavres
