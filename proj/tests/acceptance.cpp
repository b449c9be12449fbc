// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance --only N   run criterion N
//
// Exit status is 0 iff every selected criterion passes.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cavres/cli.hpp"
#include "cavres/dynamics.hpp"
#include "cavres/reservoir.hpp"
#include "support.hpp"

using namespace cavres;

namespace {

const double kAlpha = 1.0 / std::sqrt(10.0);
const double kBeta = 3.0 / std::sqrt(10.0);
constexpr std::uint64_t kSeed = 20240601;

EffectiveParams running(double gamma = 0.0) { return EffectiveParams::running_example(gamma); }

// Collects the worst observed value against a bound, plus free-form notes.
struct Tally {
    bool ok = true;
    std::string detail;

    void bound(const char* what, double value, double limit) {
        if (!(value <= limit)) ok = false;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s=%.3e (<= %.0e)", detail.empty() ? "" : ", ", what, value, limit);
        detail += buf;
    }
    void require(const char* what, bool cond) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : ", ") + std::string(what) + " FAILED";
        }
    }
};

Tally event_times_criterion() {
    Tally t;
    const auto p = running();
    const auto ev = event_times(p);
    t.require("events present", ev.esd_c1c2 && ev.esb_r1r2);
    if (!t.ok) return t;
    t.bound("|esd-ln(3/2)|", std::abs(*ev.esd_c1c2 - std::log(1.5)), 1e-9);
    t.bound("|esb-ln3|", std::abs(*ev.esb_r1r2 - std::log(3.0)), 1e-9);
    const double h = 1e-9;
    t.require("cc sign change", c2_cc(p, *ev.esd_c1c2 - h) > 0.0 && c2_cc(p, *ev.esd_c1c2 + h) == 0.0);
    t.require("rr sign change", c2_rr(p, *ev.esb_r1r2 - h) == 0.0 && c2_rr(p, *ev.esb_r1r2 + h) > 0.0);
    return t;
}

Tally critical_angles_criterion() {
    Tally t;
    const auto ca = critical_angles(running());
    t.require("angles present", ca.gamma_window && ca.gamma_route);
    if (!t.ok) return t;
    t.bound("|window-1.23096|", std::abs(*ca.gamma_window - 1.23096), 1e-4);
    t.bound("|route-1.91063|", std::abs(*ca.gamma_route - 1.91063), 1e-4);
    t.bound("window closed form", std::abs(*ca.gamma_window - 2 * std::acos(std::sqrt(2.0 / 3.0))), 1e-12);
    t.bound("route closed form", std::abs(*ca.gamma_route - 2 * std::acos(std::sqrt(1.0 / 3.0))), 1e-12);
    return t;
}

Tally plateau_criterion() {
    Tally t;
    const auto pl = plateau(running());
    t.require("plateau at gamma=0", pl.has_value());
    if (!t.ok) return t;
    const double mid = 0.5 * (pl->start + pl->end);
    t.bound("|E_BB-0.36| state", std::abs(full_report(effective_output_state(running(), mid)).e_bb - 0.36), 1e-9);
    t.bound("|E_BB-0.36| closed", std::abs(analytic_report(running(), mid).e_bb - 0.36), 1e-9);
    t.bound("|width-ln2|", std::abs(pl->width - std::numbers::ln2), 1e-9);

    const double gw = *critical_angles(running()).gamma_window;
    const auto point = plateau(running(gw));
    t.require("plateau at gamma_window", point.has_value());
    if (point) t.bound("width at window", point->width, 1e-9);

    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double g = gw * i / 50.0;
        const auto p = plateau(running(g));
        if (!p) {
            t.require("plateau below window", false);
            break;
        }
        worst = std::max(worst, std::abs(p->width - std::log(3 * std::pow(std::cos(g / 2), 2) - 1)));
    }
    t.bound("width formula (50 gammas)", worst, 1e-9);
    return t;
}

Tally window_criterion() {
    Tally t;
    const auto ev = event_times(running());
    t.require("window present", ev.esd_c1r2 && ev.esb_c1r2);
    if (!t.ok) return t;
    t.bound("|esd-ln[3(3-r5)/2]|", std::abs(*ev.esd_c1r2 - std::log(3 * (3 - std::sqrt(5.0)) / 2)), 1e-9);
    t.bound("|esb-ln[3(3+r5)/2]|", std::abs(*ev.esb_c1r2 - std::log(3 * (3 + std::sqrt(5.0)) / 2)), 1e-9);
    return t;
}

Tally oracle_criterion() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double curves = 0.0;
    double ms = 0.0;
    double qb = 0.0;
    double cons = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng);
        const EffectiveParams p{a, std::sqrt(1 - a * a), std::numbers::pi * u(rng), 1.0};
        const double kt = 6.0 * u(rng);
        const auto s = effective_output_state(p, kt);
        const oracle::Vec v = support::to_eigen(s);
        const double pairs[6][3] = {{c2_cc(p, kt), 0, 2},   {c2_rr(p, kt), 1, 3},   {c2_c1r1(p, kt), 0, 1},
                                    {c2_c2r2(p, kt), 2, 3}, {c2_c1r2(p, kt), 0, 3}, {c2_c1r2(p, kt), 1, 2}};
        for (const auto& c : pairs) {
            curves = std::max(curves, std::abs(c[0] - oracle::pair_c2(v, 4, int(c[1]), int(c[2]))));
        }
        const auto r = full_report(s);
        ms = std::max(ms, std::abs(r.e_bb - 2 * r.e_ms));
        qb = std::max(qb, std::abs(r.e_bb - r.e_qb_c1 - r.e_qb_r1));
        const double total = r.e_bb + r.c2_c1c2 + r.c2_c1r2 + r.c2_c2r1 + r.c2_r1r2;
        cons = std::max(cons, std::abs(total - 4 * p.alpha * p.alpha * p.beta * p.beta));
    }
    Tally t;
    t.bound("closed form vs Wootters", curves, 1e-10);
    t.bound("E_BB-2E_ms", ms, 1e-10);
    t.bound("E_BB-sum E_qB", qb, 1e-10);
    t.bound("conservation", cons, 1e-10);
    return t;
}

Tally lu_criterion() {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    const double gamma = 0.9;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const LUParams lu{ang(rng), ang(rng), gamma, ang(rng)};
        const double t = 6.0 * (i + 0.5) / 200.0;
        const auto full = full_report(lu_modulated_output(lu, kAlpha, kBeta, 1.0, t));
        const auto ry = full_report(effective_output_state(running(gamma), t));
        worst = std::max(worst, max_field_diff(full, ry));
    }
    double phase = 0.0;
    const ReservoirSpec spec{200, 0.0, 40.0, 1.0};
    for (double eta : {0.4, 1.3, std::numbers::pi}) {
        for (double kt : {1.0, 4.0}) phase = std::max(phase, phase_rotation_equivalence(spec, eta, kt));
    }
    Tally t;
    t.bound("LU report diff (200)", worst, 1e-10);
    t.bound("phase conjugation", phase, 1e-10);
    return t;
}

// tau_i - C^2_ij - C^2_ik of a three-qubit pure state, via the Eigen oracles.
double oracle_three_tangle(const oracle::Vec& psi) {
    return oracle::block_tangle(psi, 3, {0}) - oracle::pair_c2(psi, 3, 0, 1) - oracle::pair_c2(psi, 3, 0, 2);
}

Tally three_tangle_criterion() {
    std::mt19937_64 rng(kSeed + 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::array<std::array<Qubit, 3>, 4> triples{{{Qubit::c1, Qubit::r1, Qubit::c2},
                                                       {Qubit::c1, Qubit::r1, Qubit::r2},
                                                       {Qubit::c1, Qubit::c2, Qubit::r2},
                                                       {Qubit::r1, Qubit::c2, Qubit::r2}}};
    double recon = 0.0;
    double tangle = 0.0;
    double weights = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double g = std::numbers::pi * u(rng);
        const double kt = 6.0 * u(rng);
        const auto s = effective_output_state(running(g), kt);
        const oracle::Mat rho = oracle::projector(support::to_eigen(s));
        for (const auto& tr : triples) {
            const auto d = three_tangle_decomposition_check(s, tr);
            const oracle::Mat target = oracle::brute_partial_trace(
                rho, 4, {int(index_of(tr[0])), int(index_of(tr[1])), int(index_of(tr[2]))});
            oracle::Mat mix = oracle::Mat::Zero(8, 8);
            double wsum = 0.0;
            for (const auto& c : d.components) {
                oracle::Vec v(8);
                for (int k = 0; k < 8; ++k) v(k) = c.state[k];
                mix += c.weight * oracle::projector(v);
                wsum += c.weight;
                tangle = std::max({tangle, c.tangle, oracle_three_tangle(v)});
            }
            weights = std::max(weights, std::abs(wsum - 1.0));
            recon = std::max({recon, d.reconstruction_error, support::max_diff(mix, target)});
        }
    }
    Tally t;
    t.bound("reconstruction", recon, 1e-10);
    t.bound("max component tangle", tangle, 1e-10);
    t.bound("weight sum", weights, 1e-12);
    return t;
}

Tally monogamy_criterion() {
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    std::vector<double> grid;
    for (int k = 0; k <= 60; ++k) grid.push_back(0.1 * k);
    double slack = 0.0;
    double swap = 0.0;
    double relation = 0.0;
    int with_esd = 0;
    bool relation_ok = true;
    for (int i = 0; i < 1000; ++i) {
        auto init = support::random_general(rng);
        if (i % 2 == 0) {
            // Keep only |00> and |11> so that sudden death is common.
            init.a[1] = init.a[2] = 0.0;
            const double n = std::hypot(std::abs(init.a[0]), std::abs(init.a[3]));
            init.a[0] /= n;
            init.a[3] /= n;
        }
        const auto r = full_report(general_output_state(init, 1.0, u(rng)));
        slack = std::min(slack, r.c2_block - (r.c2_c1c2 + r.c2_r1r2 + r.c2_c1r2 + r.c2_c2r1));
        swap = std::max(swap, xi_chi_swap_check([&](DissipationAmplitudes a) { return general_output_state(init, a); },
                                                grid));
        try {
            const auto ev = general_event_times(init, 1.0);
            if (ev.esd_c1c2) {
                ++with_esd;
                if (!ev.esb_r1r2) {
                    relation_ok = false;
                    continue;
                }
                relation = std::max(relation, std::abs(*ev.esb_r1r2 + std::log(-std::expm1(-*ev.esd_c1c2))));
            }
        } catch (const InvariantViolation&) {
            relation_ok = false;
        }
    }
    Tally t;
    t.bound("-min monogamy slack", -slack, 1e-10);
    t.bound("xi<->chi swap", swap, 1e-12);
    t.require("ESB found for every ESD", relation_ok);
    t.bound("ESB relation", relation, 1e-6);
    t.detail += ", states with ESD=" + std::to_string(with_esd);
    return t;
}

Tally flat_spectrum_criterion() {
    std::vector<double> ts;
    for (int k = 0; k <= 60; ++k) ts.push_back(0.1 * k);
    Tally t;
    const ReservoirSpec base{400, 0.0, 40.0, 1.0};
    t.bound("N=400 W=40k deviation", validate_flat_spectrum(base, ts), 5e-3);
    double prev = INFINITY;
    std::string trend;
    bool monotone = true;
    for (std::size_t n : {50, 100, 200, 400}) {
        const double d = validate_flat_spectrum({n, 0.0, 40.0, 1.0}, ts);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%sN=%zu:%.6g", trend.empty() ? "" : " ", n, d);
        trend += buf;
        monotone = monotone && d < prev;
        prev = d;
    }
    t.require("decreasing in N", monotone);
    t.detail += ", [" + trend + "]";
    return t;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Tally figure_criterion() {
    Tally t;
    int matched = 0;
    for (const auto& id : cli::figure_ids()) {
        std::ostringstream a, b, err;
        const int ca = cli::run({"figure", id}, a, err);
        const int cb = cli::run({"figure", id}, b, err);
        const bool ok = ca == 0 && cb == 0 && a.str() == b.str() &&
                        a.str() == slurp(std::filesystem::path(CAVRES_GOLDEN_DIR) / ("fig_" + id + ".csv"));
        if (ok) {
            ++matched;
        } else {
            t.require(("figure " + id).c_str(), false);
        }
    }
    t.detail += (t.detail.empty() ? "" : ", ") + std::to_string(matched) + "/" +
                std::to_string(cli::figure_ids().size()) + " figures byte-identical to golden";
    return t;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Tally()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "event times", event_times_criterion},
        {2, "critical angles", critical_angles_criterion},
        {3, "plateau", plateau_criterion},
        {4, "c1r2 window", window_criterion},
        {5, "oracle equivalence", oracle_criterion},
        {6, "LU reduction", lu_criterion},
        {7, "three-tangle decompositions", three_tangle_criterion},
        {8, "monogamy and symmetry", monogamy_criterion},
        {9, "flat-spectrum validation", flat_spectrum_criterion},
        {10, "figure regression", figure_criterion},
    };
    int only = 0;
    if (argc == 3 && std::strcmp(argv[1], "--only") == 0) {
        only = std::atoi(argv[2]);
    } else if (argc != 1) {
        std::cerr << "usage: acceptance [--only N]\n";
        return 2;
    }
    bool all_ok = true;
    int ran = 0;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        ++ran;
        Tally t;
        try {
            t = c.run();
        } catch (const std::exception& e) {
            t.ok = false;
            t.detail = std::string("exception: ") + e.what();
        }
        all_ok = all_ok && t.ok;
        std::cout << (t.ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << t.detail << std::endl;
    }
    if (ran == 0) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    return all_ok ? 0 : 1;
}
