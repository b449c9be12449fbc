#include "cavres/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

namespace cavres {

namespace {

constexpr double kSignProbe = 1e-9;
constexpr double kSignSlack = 1e-15;
constexpr double kWindowTol = 1e-12;
constexpr double kPlateauTol = 1e-12;
constexpr double kScanStep = 0.1;
constexpr double kDeadMargin = 1e-12;
constexpr double kRelationTol = 1e-6;
constexpr int kLogDecades = 13;
constexpr int kLogPerDecade = 10;

double sq(double v) { return v * v; }

double half_cos2(double gamma) { return sq(std::cos(gamma / 2.0)); }

double kappa_time(const EffectiveParams& p, double t) {
    p.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("t must be non-negative");
    }
    return p.kappa * t;
}

// Signs of the bracketed terms inside C^2_cc, C^2_rr and C^2_c1r2, divided by
// positive prefactors so they stay resolvable deep into the decay.
double cc_sign_term(const EffectiveParams& p, double x) {
    return p.alpha - p.beta * half_cos2(p.gamma) * (-std::expm1(-x));
}
double rr_sign_term(const EffectiveParams& p, double x) { return p.alpha - p.beta * half_cos2(p.gamma) * std::exp(-x); }
double cross_sign_term(const EffectiveParams& p, double x) {
    const auto amp = dissipation_at(x);
    return p.alpha - p.beta * half_cos2(p.gamma) * amp.xi * amp.chi;
}

// `before` is the sign expected just before the event (+1 alive, -1 dead).
void verify_sign_change(const std::function<double(double)>& term, double x, int before, const char* what) {
    const double lo = term(std::max(0.0, x - kSignProbe));
    const double hi = term(x + kSignProbe);
    const bool ok = before > 0 ? (lo >= -kSignSlack && hi <= kSignSlack) : (lo <= kSignSlack && hi >= -kSignSlack);
    if (!ok) {
        throw InvariantViolation(std::string(what) + " at kappa*t = " + std::to_string(x) +
                                 " is not bracketed by a sign change");
    }
}

double clamp_small(double v) { return (v < 0.0 && v > -1e-10) ? 0.0 : v; }

// Wootters margins of the cavity and reservoir pairs, divided by xi^2 and
// chi^2 respectively. The margin is quadratic in the factor, and these are the
// scales on which the pairs fade (cavities) or appear (reservoirs), so the
// fixed dead/alive threshold stays meaningful at both ends of the horizon.
double cc_margin(const GeneralInitialState& init, double x) {
    const auto s = general_output_state(init, dissipation_at(x));
    return wootters_margin_from_factor(reduced_factor(s, {Qubit::c1, Qubit::c2})) / std::exp(-x);
}

double rr_margin(const GeneralInitialState& init, double x) {
    if (x <= 0.0) {
        return 0.0;
    }
    const auto s = general_output_state(init, dissipation_at(x));
    return wootters_margin_from_factor(reduced_factor(s, {Qubit::r1, Qubit::r2})) / -std::expm1(-x);
}

// Bisects [lo, hi] where pred(lo) is false and pred(hi) is true.
double bisect(const std::function<bool(double)>& pred, double lo, double hi) {
    while (hi - lo > kEventTolerance * 0.01) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Linear in kappa*t, plus log-spaced points below the first step: an event
// near the far end of the horizon pairs with its partner near zero.
std::vector<double> event_grid() {
    std::vector<double> xs{0.0};
    for (int k = kLogDecades * kLogPerDecade; k > 0; --k) {
        xs.push_back(kScanStep * std::pow(10.0, -static_cast<double>(k) / kLogPerDecade));
    }
    const auto n = static_cast<std::size_t>(std::llround(kEventHorizon / kScanStep));
    for (std::size_t i = 1; i <= n; ++i) {
        xs.push_back(static_cast<double>(i) * kScanStep);
    }
    return xs;
}

}  // namespace

double c2_cc(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    const double x2 = sq(amp.xi);
    const double bracket = p.alpha * p.beta * x2 - sq(p.beta) * x2 * sq(amp.chi) * half_cos2(p.gamma);
    return 4.0 * sq(std::max(bracket, 0.0));
}

double c2_rr(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    const double c2 = sq(amp.chi);
    const double bracket = p.alpha * p.beta * c2 - sq(p.beta) * sq(amp.xi) * c2 * half_cos2(p.gamma);
    return 4.0 * sq(std::max(bracket, 0.0));
}

double c2_c1r1(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    return sq(amp.xi * amp.chi) * sq(1.0 + (sq(p.beta) - sq(p.alpha)) * std::cos(p.gamma));
}

double c2_c2r2(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    return 4.0 * sq(sq(p.beta)) * sq(amp.xi * amp.chi);
}

double c2_c1r2(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    const double xc = amp.xi * amp.chi;
    const double bracket = p.alpha * p.beta * xc - sq(p.beta) * sq(xc) * half_cos2(p.gamma);
    return 4.0 * sq(std::max(bracket, 0.0));
}

EntanglementReport analytic_report(const EffectiveParams& p, double t) {
    const auto amp = dissipation_at(kappa_time(p, t));
    const double ab2 = 4.0 * sq(p.alpha * p.beta);
    EntanglementReport r;
    r.c2_c1c2 = c2_cc(p, t);
    r.c2_r1r2 = c2_rr(p, t);
    r.c2_c1r1 = c2_c1r1(p, t);
    r.c2_c2r2 = c2_c2r2(p, t);
    r.c2_c1r2 = c2_c1r2(p, t);
    r.c2_c2r1 = r.c2_c1r2;
    r.c2_block = ab2;
    r.e_bb = clamp_small(ab2 - (r.c2_c1c2 + r.c2_r1r2 + 2.0 * r.c2_c1r2));
    r.e_qb_c1 = clamp_small(ab2 * sq(amp.xi) - r.c2_c1c2 - r.c2_c1r2);
    r.e_qb_r1 = clamp_small(ab2 * sq(amp.chi) - r.c2_r1r2 - r.c2_c2r1);
    r.e_ms = r.e_bb / 2.0;
    return r;
}

EventTimes event_times(const EffectiveParams& p) {
    p.validate();
    EventTimes ev;
    const double b = p.beta * half_cos2(p.gamma);
    // alpha = 0 is the product state |11>: nothing to die or be born.
    if (p.alpha <= 0.0 || b <= 0.0) {
        return ev;
    }
    const double a = p.alpha / b;
    if (a < 1.0) {
        const double esd = -std::log1p(-a);
        const double esb = std::log(1.0 / a);
        verify_sign_change([&](double x) { return cc_sign_term(p, x); }, esd, +1, "cavity ESD");
        verify_sign_change([&](double x) { return rr_sign_term(p, x); }, esb, -1, "reservoir ESB");
        ev.esd_c1c2 = esd;
        ev.esb_r1r2 = esb;
    }
    // xi chi = sqrt(u (1 - u)) with u = exp(-kappa t); the cross pair is dead
    // where u (1 - u) >= a^2.
    const double disc = 1.0 - 4.0 * a * a;
    if (disc >= -kWindowTol) {
        const double root = std::sqrt(std::max(disc, 0.0));
        const double u_plus = 0.5 * (1.0 + root);
        const double u_minus = a * a / u_plus;
        const double death = -std::log(u_plus);
        const double birth = -std::log(u_minus);
        if (disc > kWindowTol) {
            verify_sign_change([&](double x) { return cross_sign_term(p, x); }, death, +1, "c1r2 ESD");
            verify_sign_change([&](double x) { return cross_sign_term(p, x); }, birth, -1, "c1r2 ESB");
        }
        ev.esd_c1r2 = death;
        ev.esb_c1r2 = birth;
    }
    return ev;
}

CriticalAngles critical_angles(const EffectiveParams& p) {
    p.validate();
    if (!(p.beta > 0.0)) {
        throw std::invalid_argument("critical angles require beta > 0");
    }
    CriticalAngles out;
    const double route = p.alpha / p.beta;
    const double window = 2.0 * p.alpha / p.beta;
    if (route <= 1.0) {
        out.gamma_route = 2.0 * std::acos(std::sqrt(route));
    }
    if (window <= 1.0) {
        out.gamma_window = 2.0 * std::acos(std::sqrt(window));
    }
    return out;
}

std::optional<Plateau> plateau(const EffectiveParams& p) {
    const auto ev = event_times(p);
    if (!ev.esd_c1c2 || !ev.esb_r1r2 || !ev.esd_c1r2 || !ev.esb_c1r2) {
        return std::nullopt;
    }
    const double start = std::max(*ev.esd_c1c2, *ev.esd_c1r2);
    const double end = std::min(*ev.esb_r1r2, *ev.esb_c1r2);
    if (start > end + kPlateauTol) {
        return std::nullopt;
    }
    return Plateau{start, std::max(start, end), std::max(0.0, end - start)};
}

EventTimes general_event_times(const GeneralInitialState& init, double kappa) {
    init.validate();
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("kappa must be positive");
    }
    const auto xs = event_grid();
    EventTimes ev;

    // Cavity ESD: alive at 0, first clearly dead grid point, bisect on margin <= 0.
    std::vector<double> cc(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cc[i] = cc_margin(init, xs[i]);
    }
    if (cc[0] > kDeadMargin) {
        for (std::size_t k = 1; k < xs.size(); ++k) {
            if (cc[k] < -kDeadMargin) {
                std::size_t j = k - 1;
                while (j > 0 && cc[j] <= 0.0) {
                    --j;
                }
                ev.esd_c1c2 = bisect([&](double x) { return cc_margin(init, x) <= 0.0; }, xs[j], xs[k]);
                break;
            }
        }
    }

    // Reservoir ESB: a clearly dead stretch followed by a clearly alive point.
    std::vector<double> rr(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rr[i] = rr_margin(init, xs[i]);
    }
    const auto dead = std::find_if(rr.begin(), rr.end(), [](double m) { return m < -kDeadMargin; });
    if (dead != rr.end()) {
        const auto born = std::find_if(dead, rr.end(), [](double m) { return m > kDeadMargin; });
        if (born != rr.end()) {
            auto k = static_cast<std::size_t>(born - rr.begin());
            std::size_t j = k - 1;
            while (j > 0 && rr[j] > 0.0) {
                --j;
            }
            ev.esb_r1r2 = bisect([&](double x) { return rr_margin(init, x) > 0.0; }, xs[j], xs[k]);
        }
    }

    if (ev.esd_c1c2) {
        if (!ev.esb_r1r2) {
            throw InvariantViolation("cavity ESD found without a matching reservoir ESB");
        }
        const double expected = -std::log(-std::expm1(-*ev.esd_c1c2));
        if (std::abs(expected - *ev.esb_r1r2) > kRelationTol) {
            throw InvariantViolation("reservoir ESB " + std::to_string(*ev.esb_r1r2) + " does not match " +
                                     std::to_string(expected));
        }
    }
    return ev;
}

std::vector<ScanRow> scan_grid(const EffectiveParams& p, std::span<const double> t_values,
                               std::span<const double> gamma_values) {
    p.validate();
    if (t_values.empty() || gamma_values.empty()) {
        throw std::invalid_argument("scan_grid needs non-empty grids");
    }
    for (double g : gamma_values) {
        EffectiveParams q = p;
        q.gamma = g;
        q.validate();
    }
    for (double t : t_values) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("scan_grid times must be non-negative");
        }
    }

    const std::size_t nt = t_values.size();
    std::vector<ScanRow> rows(gamma_values.size() * nt);
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            EffectiveParams q = p;
            q.gamma = gamma_values[i / nt];
            const double t = t_values[i % nt];
            ScanRow& row = rows[i];
            row.kappa_t = q.kappa * t;
            row.gamma = q.gamma;
            row.report = full_report(effective_output_state(q, t));
            row.analytic = analytic_report(q, t);
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || rows.size() < 64) {
        fill(0, rows.size());
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (rows.size() + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t b = std::min(rows.size(), w * chunk);
                const std::size_t e = std::min(rows.size(), b + chunk);
                pool.emplace_back([&, w, b, e] {
                    try {
                        fill(b, e);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& err : errors) {
            if (err) {
                std::rethrow_exception(err);
            }
        }
    }

    for (const auto& row : rows) {
        const double d = max_field_diff(row.report, row.analytic);
        if (d > kOracleTolerance) {
            throw InvariantViolation("closed form disagrees with state-vector value by " + std::to_string(d) +
                                     " at gamma = " + std::to_string(row.gamma) +
                                     ", kappa*t = " + std::to_string(row.kappa_t));
        }
    }
    return rows;
}

}  // namespace cavres
