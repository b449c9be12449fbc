#include "cavres/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cavres {

namespace {

constexpr double kNormTol = 1e-12;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

// Per-pair branch amplitudes: cavity photon absent stays |00>, present decays
// into xi|10> + chi|01>. Pair basis index is 2*c + r.
struct PairBranch {
    std::size_t index;
    double weight;
};

std::array<PairBranch, 2> excited_branches(DissipationAmplitudes amp) {
    return {PairBranch{0b10, amp.xi}, PairBranch{0b01, amp.chi}};
}

}  // namespace

EffectiveParams EffectiveParams::running_example(double gamma) {
    return {1.0 / std::sqrt(10.0), 3.0 / std::sqrt(10.0), gamma, 1.0};
}

void EffectiveParams::validate() const {
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_finite(gamma, "gamma");
    require_finite(kappa, "kappa");
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) {
        throw std::invalid_argument("alpha and beta must lie in [0, 1]");
    }
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol) {
        throw std::invalid_argument("alpha^2 + beta^2 must equal 1");
    }
    if (gamma < 0.0 || gamma > std::numbers::pi) {
        throw std::invalid_argument("gamma must lie in [0, pi]");
    }
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("kappa must be positive");
    }
}

ComplexMatrix LUParams::unitary() const {
    return std::polar(1.0, zeta) * (rotation_z(eta) * rotation_y(gamma) * rotation_z(delta));
}

DissipationAmplitudes dissipation_amplitudes(double kappa, double t) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("kappa must be positive");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("t must be non-negative");
    }
    return dissipation_at(kappa * t);
}

DissipationAmplitudes dissipation_at(double kappa_t) {
    if (!(kappa_t >= 0.0)) {
        throw std::invalid_argument("kappa*t must be non-negative");
    }
    return {std::exp(-kappa_t / 2.0), std::sqrt(-std::expm1(-kappa_t))};
}

FourQubitState::FourQubitState(const Amplitudes& amps, StateOrigin origin) : amps_(amps), origin_(origin) {
    if (std::abs(norm() - 1.0) > kNormTol) {
        throw std::invalid_argument("four-qubit state is not normalized (norm " + std::to_string(norm()) + ")");
    }
}

FourQubitState FourQubitState::vacuum() {
    Amplitudes a{};
    a[0] = 1.0;
    return FourQubitState(a);
}

Complex FourQubitState::amplitude(int c1, int r1, int c2, int r2) const {
    return amps_[static_cast<std::size_t>((c1 << 3) | (r1 << 2) | (c2 << 1) | r2)];
}

double FourQubitState::norm() const {
    double s = 0.0;
    for (const auto& v : amps_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

void GeneralInitialState::validate() const {
    double s = 0.0;
    for (const auto& v : a) {
        s += std::norm(v);
    }
    if (std::abs(std::sqrt(s) - 1.0) > kNormTol) {
        throw std::invalid_argument("general initial state is not normalized");
    }
}

FourQubitState apply_pair_isometry(const std::array<Complex, 4>& cavities, DissipationAmplitudes amp,
                                   StateOrigin origin) {
    FourQubitState::Amplitudes out{};
    const auto excited = excited_branches(amp);
    const std::array<PairBranch, 1> ground{PairBranch{0b00, 1.0}};
    auto branches = [&](int photon) -> std::span<const PairBranch> {
        return photon ? std::span<const PairBranch>(excited) : std::span<const PairBranch>(ground);
    };
    for (int n1 = 0; n1 < 2; ++n1) {
        for (int n2 = 0; n2 < 2; ++n2) {
            const Complex a = cavities[static_cast<std::size_t>(2 * n1 + n2)];
            if (a == Complex{0.0, 0.0}) {
                continue;
            }
            for (const auto& b1 : branches(n1)) {
                for (const auto& b2 : branches(n2)) {
                    out[(b1.index << 2) | b2.index] += a * b1.weight * b2.weight;
                }
            }
        }
    }
    return FourQubitState(out, origin);
}

FourQubitState effective_output_state(const EffectiveParams& p, double t) {
    p.validate();
    return effective_output_state(p, dissipation_amplitudes(p.kappa, t));
}

FourQubitState effective_output_state(const EffectiveParams& p, DissipationAmplitudes amp) {
    p.validate();
    // R_y(gamma) on c1 of alpha|00> + beta|11>.
    const double c = std::cos(p.gamma / 2.0);
    const double s = std::sin(p.gamma / 2.0);
    const std::array<Complex, 4> cavities{p.alpha * c, -p.beta * s, p.alpha * s, p.beta * c};
    return apply_pair_isometry(cavities, amp, StateOrigin::effective);
}

FourQubitState general_output_state(const GeneralInitialState& init, double kappa, double t) {
    return general_output_state(init, dissipation_amplitudes(kappa, t));
}

FourQubitState general_output_state(const GeneralInitialState& init, DissipationAmplitudes amp) {
    init.validate();
    return apply_pair_isometry(init.a, amp, StateOrigin::general);
}

FourQubitState lu_modulated_output(const LUParams& lu, double alpha, double beta, double kappa, double t) {
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kNormTol) {
        throw std::invalid_argument("alpha^2 + beta^2 must equal 1");
    }
    const ComplexMatrix u = lu.unitary();
    // (U (x) I)(alpha|00> + beta|11>): index 2*c1 + c2.
    const std::array<Complex, 4> cavities{u(0, 0) * alpha, u(0, 1) * beta, u(1, 0) * alpha, u(1, 1) * beta};
    return apply_pair_isometry(cavities, dissipation_amplitudes(kappa, t), StateOrigin::effective);
}

DensityMatrix reduced_density(const FourQubitState& state, std::span<const std::size_t> subsystems) {
    const ComplexMatrix w = branch_factor(state.amplitudes(), subsystems);
    return DensityMatrix(w * w.adjoint());
}

namespace {
std::vector<std::size_t> to_indices(std::initializer_list<Qubit> qs) {
    std::vector<std::size_t> out;
    out.reserve(qs.size());
    std::transform(qs.begin(), qs.end(), std::back_inserter(out), index_of);
    return out;
}
}  // namespace

DensityMatrix reduced_density(const FourQubitState& state, std::initializer_list<Qubit> subsystems) {
    const auto idx = to_indices(subsystems);
    return reduced_density(state, idx);
}

ComplexMatrix reduced_factor(const FourQubitState& state, std::initializer_list<Qubit> subsystems) {
    const auto idx = to_indices(subsystems);
    return branch_factor(state.amplitudes(), idx);
}

double xi_chi_swap_check(const StateFamily& family, std::span<const double> kappa_t_grid) {
    double worst = 0.0;
    for (double x : kappa_t_grid) {
        const auto amp = dissipation_at(x);
        const auto cav = reduced_density(family(amp), {Qubit::c1, Qubit::c2});
        const auto res = reduced_density(family(amp.swapped()), {Qubit::r1, Qubit::r2});
        worst = std::max(worst, max_abs_diff(cav.matrix(), res.matrix()));
    }
    return worst;
}

}  // namespace cavres
