#include "cavres/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "cavres/dynamics.hpp"
#include "cavres/invariants.hpp"
#include "cavres/reservoir.hpp"

namespace cavres::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultSpan = 6.0;  // kappa*t axis of every figure
constexpr std::size_t kCurveSteps = 601;
constexpr std::size_t kSurfaceTimeSteps = 61;
constexpr std::size_t kSurfaceGammaSteps = 31;

struct RunConfig {
    std::optional<double> alpha;
    std::optional<double> beta;
    double gamma = 0.0;
    double kappa = 1.0;
    double t_min = 0.0;
    std::optional<double> t_max;
    std::optional<std::size_t> t_steps;
    std::optional<double> gamma_min;
    std::optional<double> gamma_max;
    std::optional<std::size_t> gamma_steps;
    std::vector<double> gamma_list;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 42;
    std::size_t samples = 1000;
    double tolerance_scale = 1.0;
    std::string figure;
    std::size_t n_modes = 400;
    double bandwidth_over_kappa = 40.0;
    double eta = 1.3;
    double amplitude_bound = 5e-3;
    double population_bound = 5e-3;
    double phase_bound = 1e-10;
};

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json optional_number(const std::optional<double>& v, double divisor = 1.0) {
    return v ? Json(*v / divisor) : Json(nullptr);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os, const std::string& format) const {
        if (format == "json") {
            Json arr = Json::array();
            for (const auto& row : rows) {
                Json obj = Json::object();
                for (std::size_t i = 0; i < header.size(); ++i) {
                    obj[header[i]] = row[i];
                }
                arr.push_back(std::move(obj));
            }
            os << arr.dump(2) << '\n';
            return;
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            os << (i ? "," : "") << header[i];
        }
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << number(row[i]);
            }
            os << '\n';
        }
    }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) {
        v.back() = hi;
    }
    return v;
}

EffectiveParams effective_params(const RunConfig& c) {
    const EffectiveParams ex = EffectiveParams::running_example();
    EffectiveParams p{ex.alpha, ex.beta, c.gamma, c.kappa};
    if (c.alpha && c.beta) {
        p.alpha = *c.alpha;
        p.beta = *c.beta;
    } else if (c.alpha) {
        p.alpha = *c.alpha;
        p.beta = std::sqrt(std::max(0.0, 1.0 - p.alpha * p.alpha));
    } else if (c.beta) {
        p.beta = *c.beta;
        p.alpha = std::sqrt(std::max(0.0, 1.0 - p.beta * p.beta));
    }
    p.validate();
    return p;
}

std::vector<double> time_grid(const RunConfig& c, std::size_t default_steps) {
    const double t_max = c.t_max.value_or(kDefaultSpan / c.kappa);
    const std::size_t steps = c.t_steps.value_or(default_steps);
    if (!(c.t_min >= 0.0) || !(t_max >= c.t_min) || !std::isfinite(t_max)) {
        throw std::invalid_argument("time grid needs 0 <= t-min <= t-max");
    }
    if (steps == 0) {
        throw std::invalid_argument("t-steps must be at least 1");
    }
    return linspace(c.t_min, t_max, steps);
}

std::vector<double> gamma_grid(const RunConfig& c, double lo, double hi, std::size_t default_steps) {
    std::vector<double> g;
    if (!c.gamma_list.empty()) {
        g = c.gamma_list;
    } else {
        const std::size_t steps = c.gamma_steps.value_or(default_steps);
        if (steps == 0) {
            throw std::invalid_argument("gamma-steps must be at least 1");
        }
        g = linspace(c.gamma_min.value_or(lo), c.gamma_max.value_or(hi), steps);
    }
    for (double v : g) {
        if (!(v >= 0.0 && v <= kPi)) {
            throw std::invalid_argument("gamma values must lie in [0, pi]");
        }
    }
    return g;
}

int cmd_evolve(const RunConfig& c, std::ostream& os) {
    const auto p = effective_params(c);
    const auto ts = time_grid(c, kCurveSteps);
    const auto gs = gamma_grid(c, p.gamma, p.gamma, 1);
    const auto rows = scan_grid(p, ts, gs);
    Table table{{"gamma", "kappa_t", "c2_c1c2", "c2_r1r2", "c2_c1r1", "c2_c2r2", "c2_c1r2", "c2_c2r1", "e_bb",
                 "e_qb_c1", "e_qb_r1", "e_ms", "c2_block"},
                {}};
    for (const auto& row : rows) {
        const auto& r = row.report;
        table.rows.push_back({row.gamma, row.kappa_t, r.c2_c1c2, r.c2_r1r2, r.c2_c1r1, r.c2_c2r2, r.c2_c1r2, r.c2_c2r1,
                              r.e_bb, r.e_qb_c1, r.e_qb_r1, r.e_ms, r.c2_block});
    }
    table.write(os, c.format);
    return kOk;
}

int cmd_times(const RunConfig& c, std::ostream& os) {
    const auto p = effective_params(c);
    const auto ev = event_times(p);
    const auto angles = critical_angles(p);
    const auto pl = plateau(p);
    Json j = Json::object();
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["kappa"] = p.kappa;
    j["esd_c1c2"] = optional_number(ev.esd_c1c2, p.kappa);
    j["esb_r1r2"] = optional_number(ev.esb_r1r2, p.kappa);
    j["esd_c1r2"] = optional_number(ev.esd_c1r2, p.kappa);
    j["esb_c1r2"] = optional_number(ev.esb_c1r2, p.kappa);
    j["gamma_window"] = optional_number(angles.gamma_window);
    j["gamma_route"] = optional_number(angles.gamma_route);
    if (pl) {
        j["plateau"] = Json{{"start", pl->start / p.kappa}, {"end", pl->end / p.kappa}, {"width", pl->width / p.kappa}};
    } else {
        j["plateau"] = nullptr;
    }
    os << j.dump(2) << '\n';
    return kOk;
}

using Field = std::function<double(const EntanglementReport&)>;

const std::map<std::string, std::pair<std::string, Field>>& surface_figures() {
    static const std::map<std::string, std::pair<std::string, Field>> figs{
        {"1a", {"c2_c1c2", [](const EntanglementReport& r) { return r.c2_c1c2; }}},
        {"1b", {"c2_r1r2", [](const EntanglementReport& r) { return r.c2_r1r2; }}},
        {"1c", {"c2_c1r1", [](const EntanglementReport& r) { return r.c2_c1r1; }}},
        {"1d", {"c2_c1r2", [](const EntanglementReport& r) { return r.c2_c1r2; }}},
        {"2", {"e_bb", [](const EntanglementReport& r) { return r.e_bb; }}},
        {"3a", {"e_qb_c1", [](const EntanglementReport& r) { return r.e_qb_c1; }}},
        {"3b", {"e_qb_r1", [](const EntanglementReport& r) { return r.e_qb_r1; }}},
    };
    return figs;
}

double curve_gamma(const std::string& id, const EffectiveParams& p) {
    if (id == "4a") {
        return 0.0;
    }
    if (id == "4d") {
        return kPi;
    }
    const auto angles = critical_angles(p);
    const auto& g = id == "4b" ? angles.gamma_window : angles.gamma_route;
    if (!g) {
        throw std::invalid_argument("figure " + id + ": the critical angle does not exist for these alpha, beta");
    }
    return *g;
}

int cmd_figure(const RunConfig& c, std::ostream& os) {
    const auto p = effective_params(c);
    if (const auto it = surface_figures().find(c.figure); it != surface_figures().end()) {
        const auto ts = time_grid(c, kSurfaceTimeSteps);
        const auto gs = gamma_grid(c, 0.0, kPi, kSurfaceGammaSteps);
        Table table{{"gamma", "kappa_t", it->second.first}, {}};
        for (const auto& row : scan_grid(p, ts, gs)) {
            table.rows.push_back({row.gamma, row.kappa_t, it->second.second(row.report)});
        }
        table.write(os, c.format);
        return kOk;
    }
    const std::array<double, 1> gamma{curve_gamma(c.figure, p)};
    const auto ts = time_grid(c, kCurveSteps);
    Table table{{"kappa_t", "c2_c1c2", "c2_r1r2", "c2_c1r2_plus_c2r1", "sum_times_5", "e_bb"}, {}};
    for (const auto& row : scan_grid(p, ts, gamma)) {
        const auto& r = row.report;
        const double sum = r.c2_c1r2 + r.c2_c2r1;
        table.rows.push_back({row.kappa_t, r.c2_c1c2, r.c2_r1r2, sum, 5.0 * sum, r.e_bb});
    }
    table.write(os, c.format);
    return kOk;
}

int cmd_check(const RunConfig& c, std::ostream& os) {
    if (c.samples == 0) {
        throw std::invalid_argument("samples must be at least 1");
    }
    const auto results = run_invariant_suites(c.seed, c.samples, c.tolerance_scale);
    std::size_t failed = 0;
    for (const auto& r : results) {
        os << (r.passed ? "PASS " : "FAIL ") << r.name << "  checks=" << r.checks
           << "  worst/tol=" << number(r.worst_ratio);
        if (!r.passed) {
            ++failed;
            os << "  first failure: " << r.failure;
        }
        os << '\n';
    }
    os << (failed == 0 ? "all suites passed" : std::to_string(failed) + " suite(s) failed") << '\n';
    return failed == 0 ? kOk : kFailure;
}

int cmd_reservoir_validate(const RunConfig& c, std::ostream& os) {
    if (!(c.kappa > 0.0)) {
        throw std::invalid_argument("kappa must be positive");
    }
    const ReservoirSpec spec{c.n_modes, 0.0, c.bandwidth_over_kappa * c.kappa, c.kappa};
    spec.validate();
    RunConfig grid = c;
    if (!grid.t_steps) {
        grid.t_steps = kSurfaceTimeSteps;
    }
    const auto ts = time_grid(grid, kSurfaceTimeSteps);
    for (double t : ts) {
        spec.require_within_horizon(t);
    }
    const auto flat = flat_spectrum_report(spec, ts);
    const double phase = phase_rotation_equivalence(spec, c.eta, ts.back());

    struct Line {
        const char* name;
        double value;
        double bound;
    };
    const std::array<Line, 3> lines{Line{"amplitude_deviation", flat.amplitude_deviation, c.amplitude_bound},
                                    Line{"population_deviation", flat.population_deviation, c.population_bound},
                                    Line{"phase_rotation_deviation", phase, c.phase_bound}};
    bool ok = true;
    for (const auto& l : lines) {
        ok = ok && l.value <= l.bound;
    }
    if (c.format == "json") {
        Json j = Json::object();
        j["n_modes"] = spec.n_modes;
        j["bandwidth_over_kappa"] = c.bandwidth_over_kappa;
        j["kappa_t_max"] = c.kappa * ts.back();
        for (const auto& l : lines) {
            j[l.name] = Json{{"value", l.value}, {"bound", l.bound}, {"pass", l.value <= l.bound}};
        }
        j["pass"] = ok;
        os << j.dump(2) << '\n';
    } else {
        os << "quantity,value,bound,pass\n";
        for (const auto& l : lines) {
            os << l.name << ',' << number(l.value) << ',' << number(l.bound) << ',' << (l.value <= l.bound ? 1 : 0)
               << '\n';
        }
    }
    return ok ? kOk : kFailure;
}

void add_common_options(CLI::App& app, RunConfig& c) {
    auto non_negative = CLI::NonNegativeNumber;
    app.add_option("--alpha", c.alpha, "amplitude of |00> (beta derived if omitted)")->check(CLI::Range(0.0, 1.0));
    app.add_option("--beta", c.beta, "amplitude of |11> (alpha derived if omitted)")->check(CLI::Range(0.0, 1.0));
    app.add_option("--gamma", c.gamma, "R_y rotation angle on cavity 1")->check(CLI::Range(0.0, kPi));
    app.add_option("--kappa", c.kappa, "dissipation rate")->check(CLI::PositiveNumber);
    app.add_option("--t-min", c.t_min, "first time sample")->check(non_negative);
    app.add_option("--t-max", c.t_max, "last time sample (default 6 / kappa)")->check(non_negative);
    app.add_option("--t-steps", c.t_steps, "number of time samples");
    app.add_option("--gamma-min", c.gamma_min, "first gamma sample")->check(CLI::Range(0.0, kPi));
    app.add_option("--gamma-max", c.gamma_max, "last gamma sample")->check(CLI::Range(0.0, kPi));
    app.add_option("--gamma-steps", c.gamma_steps, "number of gamma samples");
    app.add_option("--gamma-list", c.gamma_list, "explicit comma-separated gamma values")->delimiter(',');
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "write output to this file instead of stdout");
    app.add_option("--seed", c.seed, "random seed for check");
    app.add_option("--samples", c.samples, "random samples per property for check");
    app.add_option("--n-modes", c.n_modes, "reservoir modes for reservoir-validate");
    app.add_option("--bandwidth-over-kappa", c.bandwidth_over_kappa, "reservoir bandwidth W / kappa")
        ->check(CLI::PositiveNumber);
    app.add_option("--eta", c.eta, "phase used by the phase-rotation check");
    app.add_option("--amplitude-bound", c.amplitude_bound, "bound on | |c(t)| - exp(-kappa t / 2) |");
    app.add_option("--population-bound", c.population_bound, "bound on | sum |b_k|^2 - (1 - exp(-kappa t)) |");
    app.add_option("--phase-bound", c.phase_bound, "bound on the phase-rotation deviation");
    // Internal: scales every check tolerance so the failure path can be exercised.
    app.add_option("--tolerance-scale", c.tolerance_scale)->group("");
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"1a", "1b", "1c", "1d", "2", "3a", "3b", "4a", "4b", "4c", "4d"};
    return ids;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app("Entanglement dynamics of two cavity photons leaking into two reservoirs", "cavres");
    add_common_options(app, c);
    app.require_subcommand(1);

    std::function<int(const RunConfig&, std::ostream&)> handler;
    auto sub = [&](const char* name, const char* help, int (*fn)(const RunConfig&, std::ostream&)) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&handler, fn] { handler = fn; });
        return s;
    };
    sub("evolve", "entanglement report on a (gamma, t) grid", cmd_evolve);
    sub("times", "sudden death / birth times, critical angles and plateau as JSON", cmd_times);
    sub("figure", "data behind one figure panel", cmd_figure)
        ->add_option("id", c.figure, "figure id")
        ->required()
        ->check(CLI::IsMember(figure_ids()));
    sub("check", "run the seeded invariant suites", cmd_check);
    sub("reservoir-validate", "compare the finite-N reservoir with exponential decay", cmd_reservoir_validate);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::ostringstream buffer;
    int code = kOk;
    try {
        code = handler(c, buffer);
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kFailure;
    }

    if (c.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(c.out, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << c.out << " for writing\n";
            return kUsage;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace cavres::cli
