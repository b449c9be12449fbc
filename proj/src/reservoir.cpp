#include "cavres/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cavres {

namespace {

constexpr double kNormTol = 1e-10;

SingleExcitationPropagator propagator_for(const ComplexMatrix& h) { return SingleExcitationPropagator(h); }

}  // namespace

ReservoirSpec ReservoirSpec::defaults(double kappa) { return {400, 0.0, 40.0 * kappa, kappa}; }

void ReservoirSpec::validate() const {
    if (n_modes < 2) {
        throw std::invalid_argument("reservoir needs at least 2 modes");
    }
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw std::invalid_argument("reservoir bandwidth must be positive");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("kappa must be positive");
    }
    if (!std::isfinite(center_frequency)) {
        throw std::invalid_argument("center frequency must be finite");
    }
}

double ReservoirSpec::coupling() const { return std::sqrt(kappa * spacing() / (2.0 * std::numbers::pi)); }

std::vector<double> ReservoirSpec::mode_frequencies() const {
    std::vector<double> w(n_modes);
    const double mid = (static_cast<double>(n_modes) + 1.0) / 2.0;
    for (std::size_t k = 1; k <= n_modes; ++k) {
        w[k - 1] = center_frequency + (static_cast<double>(k) - mid) * spacing();
    }
    return w;
}

double ReservoirSpec::recurrence_horizon() const { return 2.0 * std::numbers::pi / spacing(); }

void ReservoirSpec::require_within_horizon(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("time must be non-negative");
    }
    if (t >= recurrence_horizon()) {
        throw HorizonError("t = " + std::to_string(t) + " is beyond the recurrence horizon " +
                           std::to_string(recurrence_horizon()));
    }
}

double SingleExcitationState::mode_population() const {
    double s = 0.0;
    for (const auto& b : mode_amplitudes) {
        s += std::norm(b);
    }
    return s;
}

double SingleExcitationState::norm() const { return std::sqrt(std::norm(cavity_amplitude) + mode_population()); }

ComplexMatrix build_hamiltonian(double cavity_frequency, std::span<const double> mode_frequencies,
                                std::span<const Complex> couplings) {
    if (mode_frequencies.size() != couplings.size()) {
        throw std::invalid_argument("one coupling per mode is required");
    }
    const std::size_t n = mode_frequencies.size();
    ComplexMatrix h(n + 1, n + 1);
    h(0, 0) = cavity_frequency;
    for (std::size_t k = 0; k < n; ++k) {
        h(k + 1, k + 1) = mode_frequencies[k];
        h(0, k + 1) = couplings[k];
        h(k + 1, 0) = std::conj(couplings[k]);
    }
    return h;
}

ComplexMatrix build_phase_rotated_hamiltonian(const ReservoirSpec& spec, double eta) {
    spec.validate();
    auto freqs = spec.mode_frequencies();
    for (auto& w : freqs) {
        w -= spec.center_frequency;
    }
    const std::vector<Complex> g(spec.n_modes, std::polar(spec.coupling(), eta));
    return build_hamiltonian(0.0, freqs, g);
}

ComplexMatrix build_hamiltonian(const ReservoirSpec& spec) { return build_phase_rotated_hamiltonian(spec, 0.0); }

struct SingleExcitationPropagator::Cache {
    std::vector<double> energies;
    ComplexMatrix vectors;
    std::vector<Complex> overlap;  // <v_j | cavity> = conj(V(0, j))
};

SingleExcitationPropagator::SingleExcitationPropagator(const ComplexMatrix& hamiltonian) {
    auto eig = hermitian_eigen(hamiltonian);
    auto cache = std::make_shared<Cache>();
    cache->overlap.resize(eig.values.size());
    for (std::size_t j = 0; j < eig.values.size(); ++j) {
        cache->overlap[j] = std::conj(eig.vectors(0, j));
    }
    cache->energies = std::move(eig.values);
    cache->vectors = std::move(eig.vectors);
    cache_ = std::move(cache);
}

SingleExcitationState SingleExcitationPropagator::evolve(double t) const {
    const auto& c = *cache_;
    const std::size_t n = c.energies.size();
    std::vector<Complex> coeff(n);
    for (std::size_t j = 0; j < n; ++j) {
        coeff[j] = std::polar(1.0, -c.energies[j] * t) * c.overlap[j];
    }
    std::vector<Complex> psi(n);
    for (std::size_t r = 0; r < n; ++r) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += c.vectors(r, j) * coeff[j];
        }
        psi[r] = s;
    }
    SingleExcitationState out{psi[0], std::vector<Complex>(psi.begin() + 1, psi.end())};
    if (std::abs(out.norm() - 1.0) > kNormTol) {
        throw InvariantViolation("single-excitation norm drifted to " + std::to_string(out.norm()));
    }
    return out;
}

SingleExcitationState evolve_single_excitation(const ReservoirSpec& spec, double t) {
    spec.validate();
    spec.require_within_horizon(t);
    return propagator_for(build_hamiltonian(spec)).evolve(t);
}

FlatSpectrumReport flat_spectrum_report(const ReservoirSpec& spec, std::span<const double> t_samples) {
    spec.validate();
    for (double t : t_samples) {
        spec.require_within_horizon(t);
    }
    const auto prop = propagator_for(build_hamiltonian(spec));
    FlatSpectrumReport rep;
    for (double t : t_samples) {
        const auto s = prop.evolve(t);
        const double x = spec.kappa * t;
        rep.amplitude_deviation = std::max(rep.amplitude_deviation, std::abs(std::abs(s.cavity_amplitude) - std::exp(-x / 2.0)));
        rep.population_deviation = std::max(rep.population_deviation, std::abs(s.mode_population() + std::expm1(-x)));
    }
    return rep;
}

double validate_flat_spectrum(const ReservoirSpec& spec, std::span<const double> t_samples) {
    return flat_spectrum_report(spec, t_samples).amplitude_deviation;
}

double phase_rotation_equivalence(const ReservoirSpec& spec, double eta, double t) {
    spec.validate();
    spec.require_within_horizon(t);
    const auto plain = propagator_for(build_hamiltonian(spec)).evolve(t);
    const auto rotated = propagator_for(build_phase_rotated_hamiltonian(spec, eta)).evolve(t);
    double d = std::abs(std::abs(plain.cavity_amplitude) - std::abs(rotated.cavity_amplitude));
    for (std::size_t k = 0; k < plain.mode_amplitudes.size(); ++k) {
        d = std::max(d, std::abs(std::abs(plain.mode_amplitudes[k]) - std::abs(rotated.mode_amplitudes[k])));
    }
    return d;
}

}  // namespace cavres
