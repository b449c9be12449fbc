#include "cavres/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "cavres/dynamics.hpp"
#include "cavres/measures.hpp"
#include "cavres/reservoir.hpp"
#include "cavres/states.hpp"

namespace cavres {

namespace {

constexpr double kPi = std::numbers::pi;

class Suite {
  public:
    Suite(std::string name, double scale) : scale_(scale) { result_.name = std::move(name); }

    void le(double value, double tol, const std::string& label) {
        ++result_.checks;
        const double ratio = value / tol;
        if (!(value <= tol * scale_)) {
            if (result_.passed) {
                char buf[96];
                std::snprintf(buf, sizeof buf, " (value %.3e, tolerance %.3e)", value, tol * scale_);
                result_.failure = label + buf;
            }
            result_.passed = false;
        }
        if (std::isnan(ratio)) {
            result_.worst_ratio = ratio;
        } else if (!std::isnan(result_.worst_ratio)) {
            result_.worst_ratio = std::max(result_.worst_ratio, ratio);
        }
    }

    void expect(bool ok, const std::string& label) { le(ok ? 0.0 : 1.0, 0.5, label); }

    SuiteResult finish() { return std::move(result_); }

  private:
    double scale_;
    SuiteResult result_;
};

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    Complex gaussian() {
        std::normal_distribution<double> n;
        const double re = n(eng_);
        return {re, n(eng_)};
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

    EffectiveParams effective() {
        const double a = uniform(0.0, 1.0);
        return {a, std::sqrt(1.0 - a * a), uniform(0.0, kPi), 1.0};
    }

    GeneralInitialState general() {
        GeneralInitialState s;
        double n = 0.0;
        for (auto& v : s.a) {
            v = gaussian();
            n += std::norm(v);
        }
        for (auto& v : s.a) {
            v /= std::sqrt(n);
        }
        return s;
    }

    std::vector<Complex> pure(std::size_t dim) {
        std::vector<Complex> psi(dim);
        double n = 0.0;
        for (auto& v : psi) {
            v = gaussian();
            n += std::norm(v);
        }
        for (auto& v : psi) {
            v /= std::sqrt(n);
        }
        return psi;
    }

    ComplexMatrix hermitian(std::size_t n) {
        ComplexMatrix x(n, n);
        for (auto& v : x.data()) {
            v = gaussian();
        }
        return x + x.adjoint();
    }

    ComplexMatrix unitary2() {
        return std::polar(1.0, uniform(0.0, 2 * kPi)) *
               (rotation_z(uniform(0.0, 2 * kPi)) * rotation_y(uniform(0.0, kPi)) * rotation_z(uniform(0.0, 2 * kPi)));
    }

  private:
    std::mt19937_64 eng_;
};

Complex determinant(ComplexMatrix m) {
    const std::size_t n = m.rows();
    Complex det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) {
                piv = r;
            }
        }
        if (m(piv, c) == Complex{}) {
            return 0.0;
        }
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(m(piv, k), m(c, k));
            }
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = m(r, c) / m(c, c);
            for (std::size_t k = c; k < n; ++k) {
                m(r, k) -= f * m(c, k);
            }
        }
    }
    return det;
}

SuiteResult qmath_suite(Sampler& rng, std::size_t samples, double scale) {
    Suite s("qmath", scale);
    for (std::size_t i = 0; i < samples; ++i) {
        const ComplexMatrix h = rng.hermitian(4);
        const auto eig = hermitian_eigen(h);
        double sum = 0.0;
        Complex prod = 1.0;
        for (double v : eig.values) {
            sum += v;
            prod *= v;
        }
        s.le(std::abs(sum - h.trace()), 1e-10, "eigenvalue sum vs trace");
        s.le(std::abs(prod - determinant(h)), 1e-8, "eigenvalue product vs determinant");
        const ComplexMatrix hv = h * eig.vectors;
        double residual = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            for (std::size_t r = 0; r < 4; ++r) {
                residual = std::max(residual, std::abs(hv(r, j) - eig.values[j] * eig.vectors(r, j)));
            }
        }
        s.le(residual, 1e-10, "eigenpair residual");
        s.le(max_abs_diff(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::identity(4)), 1e-10,
             "eigenvector orthonormality");

        const auto psi = rng.pure(8);
        const auto rho = DensityMatrix::from_pure(psi);
        std::vector<std::size_t> keep{0, 1, 2};
        std::shuffle(keep.begin(), keep.end(), std::mt19937_64(i));
        keep.resize(static_cast<std::size_t>(rng.integer(1, 3)));
        const auto reduced = partial_trace(rho, keep);
        s.le(std::abs(reduced.matrix().trace() - 1.0), 1e-12, "partial trace preserves trace");
        s.le(reduced.matrix().hermiticity_error(), 1e-12, "partial trace preserves Hermiticity");

        // Integer entries keep every product exact, so associativity is bitwise.
        std::array<ComplexMatrix, 3> m{ComplexMatrix(2, 2), ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
        for (auto& x : m) {
            for (auto& v : x.data()) {
                v = Complex(rng.integer(-4, 4), rng.integer(-4, 4));
            }
        }
        s.expect(max_abs_diff(kron(kron(m[0], m[1]), m[2]), kron(m[0], kron(m[1], m[2]))) == 0.0,
                 "kron associativity");
    }
    return s.finish();
}

SuiteResult states_suite(Sampler& rng, std::size_t samples, double scale) {
    Suite s("states", scale);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = rng.effective();
        const double t = rng.uniform(0.0, 6.0);
        const auto state = effective_output_state(p, t);
        s.le(std::abs(state.norm() - 1.0), 1e-12, "effective state norm");
        s.le(std::abs(block_concurrence_squared(state) - 4.0 * p.alpha * p.alpha * p.beta * p.beta), 1e-10,
             "block concurrence is 4 alpha^2 beta^2");

        const LUParams lu{rng.uniform(0.0, 2 * kPi), rng.uniform(0.0, 2 * kPi), p.gamma, rng.uniform(0.0, 2 * kPi)};
        const auto modulated = lu_modulated_output(lu, p.alpha, p.beta, p.kappa, t);
        s.le(max_field_diff(full_report(modulated), full_report(state)), 1e-10, "LU reduction to R_y(gamma)");

        const auto init = rng.general();
        const auto general = general_output_state(init, 1.0, t);
        s.le(std::abs(general.norm() - 1.0), 1e-12, "general state norm");
        const std::array<double, 1> grid{t};
        s.le(xi_chi_swap_check([&](DissipationAmplitudes amp) { return general_output_state(init, amp); }, grid),
             1e-12, "xi <-> chi swap");
    }
    return s.finish();
}

SuiteResult measures_suite(Sampler& rng, std::size_t samples, double scale) {
    Suite s("measures", scale);
    auto monogamy_slack = [](const EntanglementReport& r) {
        return r.c2_c1c2 + r.c2_r1r2 + r.c2_c1r2 + r.c2_c2r1 - r.c2_block;
    };
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = rng.effective();
        const auto r = full_report(effective_output_state(p, rng.uniform(0.0, 6.0)));
        s.le(std::abs(r.e_bb - 2.0 * r.e_ms), 1e-10, "E_BB = 2 E_ms");
        s.le(std::abs(r.e_bb - r.e_qb_c1 - r.e_qb_r1), 1e-10, "E_BB = sum of qubit-block values");
        s.le(monogamy_slack(r), 1e-10, "monogamy (effective)");
        s.le(std::abs(r.c2_c1r2 - r.c2_c2r1), 1e-10, "C2_c1r2 = C2_c2r1");

        const auto g = full_report(general_output_state(rng.general(), 1.0, rng.uniform(0.0, 6.0)));
        s.le(monogamy_slack(g), 1e-10, "monogamy (general)");

        const auto rank = static_cast<std::size_t>(rng.integer(1, 4));
        ComplexMatrix w(4, rank);
        for (auto& v : w.data()) {
            v = rng.gaussian();
        }
        ComplexMatrix rho = w * w.adjoint();
        rho *= 1.0 / rho.trace().real();
        const ComplexMatrix u = kron(rng.unitary2(), rng.unitary2());
        const double c0 = concurrence(DensityMatrix(rho));
        const double c1 = concurrence(DensityMatrix(u * rho * u.adjoint()));
        s.le(std::abs(c0 - c1), 1e-10, "concurrence LU invariance");

        const auto psi = rng.pure(8);
        ThreeQubitState three{};
        std::copy(psi.begin(), psi.end(), three.begin());
        const double t0 = pure_three_tangle(three, 0);
        s.le(std::max(std::abs(t0 - pure_three_tangle(three, 1)), std::abs(t0 - pure_three_tangle(three, 2))), 1e-10,
             "three-tangle pivot independence");
    }
    return s.finish();
}

SuiteResult dynamics_suite(Sampler& rng, std::size_t samples, double scale) {
    Suite s("dynamics", scale);
    constexpr double kMonotoneSlack = 1e-14;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = rng.effective();
        const double t = rng.uniform(0.0, 6.0);
        const auto oracle = full_report(effective_output_state(p, t));
        s.le(max_field_diff(analytic_report(p, t), oracle), 1e-10, "closed forms vs state vector");
        const double total = oracle.e_bb + oracle.c2_c1c2 + oracle.c2_c1r2 + oracle.c2_c2r1 + oracle.c2_r1r2;
        s.le(std::abs(total - 4.0 * p.alpha * p.alpha * p.beta * p.beta), 1e-10, "conservation");

        const auto ev = event_times(p);
        s.expect(ev.esd_c1c2.has_value() == ev.esb_r1r2.has_value(), "ESD iff ESB");
        if (ev.esd_c1c2) {
            s.expect(c2_cc(p, *ev.esd_c1c2 + 1e-3) == 0.0, "C2_cc is zero after ESD");
            s.expect(c2_rr(p, *ev.esb_r1r2 / 2.0) == 0.0, "C2_rr is zero before ESB");
        } else if (p.alpha > 0.0 && p.beta > 0.0) {
            s.expect(c2_cc(p, 6.0) > 0.0, "C2_cc stays positive without ESD");
            s.expect(c2_rr(p, 1e-3) > 0.0, "C2_rr is born immediately without ESB");
        }
    }

    const std::size_t curves = std::min<std::size_t>(samples, 25);
    for (std::size_t i = 0; i < curves; ++i) {
        const auto p = rng.effective();
        double rise_cc = 0.0;
        double drop_rr = 0.0;
        double above_ln2 = 0.0;
        const double peak = c2_c1r1(p, std::numbers::ln2);
        for (int k = 0; k < 600; ++k) {
            const double t0 = 0.01 * k;
            const double t1 = 0.01 * (k + 1);
            rise_cc = std::max(rise_cc, c2_cc(p, t1) - c2_cc(p, t0));
            drop_rr = std::max(drop_rr, c2_rr(p, t0) - c2_rr(p, t1));
            above_ln2 = std::max(above_ln2, c2_c1r1(p, t1) - peak);
        }
        s.le(rise_cc, kMonotoneSlack, "C2_cc non-increasing in t");
        s.le(drop_rr, kMonotoneSlack, "C2_rr non-decreasing in t");
        s.le(above_ln2, kMonotoneSlack, "C2_c1r1 peaks at kappa t = ln 2");

        double drop_gamma = 0.0;
        const double t = rng.uniform(0.0, 6.0);
        for (int k = 0; k < 100; ++k) {
            EffectiveParams a = p;
            EffectiveParams b = p;
            a.gamma = kPi * k / 100.0;
            b.gamma = kPi * (k + 1) / 100.0;
            drop_gamma = std::max(drop_gamma, c2_cc(a, t) - c2_cc(b, t));
        }
        s.le(drop_gamma, kMonotoneSlack, "C2_cc non-decreasing in gamma");
    }
    return s.finish();
}

SuiteResult reservoir_suite(Sampler& rng, std::size_t samples, double scale) {
    Suite s("reservoir", scale);
    const ReservoirSpec spec{100, 0.0, 40.0, 1.0};
    const SingleExcitationPropagator prop(build_hamiltonian(spec));
    for (int k = 0; k <= 60; ++k) {
        s.le(std::abs(prop.evolve(0.1 * k).norm() - 1.0), 1e-10, "norm conservation");
    }
    // 1 - |c|^2 ~ (sum_k g^2) t^2, so its ratio to kappa t shrinks linearly.
    auto ratio = [&](double x) { return (1.0 - std::norm(prop.evolve(x / spec.kappa).cavity_amplitude)) / x; };
    s.le(ratio(1e-3), 1e-2, "short-time loss ratio at kappa t = 1e-3");
    s.le(ratio(1e-4) / ratio(1e-3), 0.2, "short-time loss ratio shrinks");
    const std::size_t phases = std::min<std::size_t>(samples, 3);
    for (std::size_t i = 0; i < phases; ++i) {
        s.le(phase_rotation_equivalence(spec, rng.uniform(0.0, 2 * kPi), rng.uniform(0.0, 6.0)), 1e-10,
             "phase-rotated couplings preserve moduli");
    }
    return s.finish();
}

}  // namespace

std::vector<SuiteResult> run_invariant_suites(std::uint64_t seed, std::size_t samples, double tolerance_scale) {
    if (samples == 0) {
        throw std::invalid_argument("samples must be at least 1");
    }
    Sampler rng(seed);
    std::vector<SuiteResult> out;
    out.push_back(qmath_suite(rng, samples, tolerance_scale));
    out.push_back(states_suite(rng, samples, tolerance_scale));
    out.push_back(measures_suite(rng, samples, tolerance_scale));
    out.push_back(dynamics_suite(rng, samples, tolerance_scale));
    out.push_back(reservoir_suite(rng, samples, tolerance_scale));
    return out;
}

}  // namespace cavres
