#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cavres/dynamics.hpp"
#include "support.hpp"

using namespace cavres;

namespace {

const double kAlpha = 1.0 / std::sqrt(10.0);
const double kBeta = 3.0 / std::sqrt(10.0);
const double kLn2 = std::numbers::ln2;

EffectiveParams running(double gamma = 0.0) { return EffectiveParams::running_example(gamma); }

EffectiveParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = u(rng);
    return {a, std::sqrt(1 - a * a), std::numbers::pi * u(rng), 1.0};
}

}  // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("cavity pair curve") {
        CHECK(c2_cc(running(), 0.0) == doctest::Approx(0.36).epsilon(1e-14));
        CHECK(c2_cc(running(), std::log(1.5)) < 1e-14);
        for (double t : {0.0, 0.5, 2.0, 10.0}) {
            const double xi2 = std::exp(-t);
            CHECK(c2_cc(running(std::numbers::pi), t) == doctest::Approx(0.36 * xi2 * xi2).epsilon(1e-12));
            CHECK(c2_cc(running(std::numbers::pi), t) > 0.0);
        }
        // Physical time scales with kappa.
        EffectiveParams fast = running(0.4);
        fast.kappa = 2.5;
        CHECK(c2_cc(fast, 0.1) == doctest::Approx(c2_cc(running(0.4), 0.25)).epsilon(1e-14));
    }

    TEST_CASE("reservoir pair curve") {
        CHECK(c2_rr(running(), std::log(3.0)) < 1e-14);
        CHECK(c2_rr(running(), 0.0) == 0.0);
        CHECK(c2_rr(running(), 40.0) == doctest::Approx(0.36).epsilon(1e-12));
    }

    TEST_CASE("cavity-reservoir curves") {
        CHECK(c2_c1r1(running(), kLn2) == doctest::Approx(0.81).epsilon(1e-14));
        for (double t : {0.2, 0.6, 0.69, 0.7, 1.0, 2.0}) CHECK(c2_c1r1(running(), t) <= c2_c1r1(running(), kLn2));
        const double xi2chi2 = std::exp(-0.9) * (1 - std::exp(-0.9));
        CHECK(c2_c1r1(running(std::numbers::pi / 2), 0.9) == doctest::Approx(xi2chi2).epsilon(1e-12));
        CHECK(c2_c1r1(running(), 0.0) == 0.0);

        CHECK(c2_c2r2(running(), kLn2) == doctest::Approx(0.81).epsilon(1e-14));
        CHECK(c2_c2r2(running(), 0.0) == 0.0);
        for (double g : {0.0, 1.0, 2.0, std::numbers::pi}) {
            CHECK(std::abs(c2_c2r2(running(g), 1.3) - c2_c2r2(running(), 1.3)) < 1e-10);
            const auto s = effective_output_state(running(g), 1.3);
            CHECK(std::abs(oracle::pair_c2(support::to_eigen(s), 4, 2, 3) - c2_c2r2(running(), 1.3)) < 1e-10);
        }
    }

    TEST_CASE("cross pair curve") {
        const double lo = std::log(3 * (3 - std::sqrt(5.0)) / 2);
        const double hi = std::log(3 * (3 + std::sqrt(5.0)) / 2);
        CHECK(c2_c1r2(running(), lo + 1e-3) == 0.0);
        CHECK(c2_c1r2(running(), 1.0) == 0.0);
        CHECK(c2_c1r2(running(), hi - 1e-3) == 0.0);
        CHECK(c2_c1r2(running(), lo - 1e-3) > 0.0);
        CHECK(c2_c1r2(running(), hi + 1e-3) > 0.0);
        CHECK(c2_c1r2(running(), 0.0) == 0.0);
        const double gw = 2 * std::acos(std::sqrt(2.0 / 3.0));
        for (double g : {gw + 1e-6, 1.5, 2.5, std::numbers::pi})
            for (double t = 0.01; t < 10.0; t += 0.01) CHECK(c2_c1r2(running(g), t) > 0.0);
    }

    TEST_CASE("closed forms agree with Wootters on the state vector") {
        std::mt19937_64 rng(51);
        std::uniform_real_distribution<double> u(0.0, 6.0);
        for (int i = 0; i < 1000; ++i) {
            const auto p = random_params(rng);
            const double t = u(rng);
            const oracle::Vec v = support::to_eigen(effective_output_state(p, t));
            CHECK(std::abs(c2_cc(p, t) - oracle::pair_c2(v, 4, 0, 2)) < 1e-10);
            CHECK(std::abs(c2_rr(p, t) - oracle::pair_c2(v, 4, 1, 3)) < 1e-10);
            CHECK(std::abs(c2_c1r1(p, t) - oracle::pair_c2(v, 4, 0, 1)) < 1e-10);
            CHECK(std::abs(c2_c2r2(p, t) - oracle::pair_c2(v, 4, 2, 3)) < 1e-10);
            CHECK(std::abs(c2_c1r2(p, t) - oracle::pair_c2(v, 4, 0, 3)) < 1e-10);
            CHECK(std::abs(c2_c1r2(p, t) - oracle::pair_c2(v, 4, 1, 2)) < 1e-10);
            const auto r = analytic_report(p, t);
            const double total = r.e_bb + r.c2_c1c2 + r.c2_c1r2 + r.c2_c2r1 + r.c2_r1r2;
            CHECK(std::abs(total - 4 * p.alpha * p.alpha * p.beta * p.beta) < 1e-10);
            CHECK(max_field_diff(r, full_report(effective_output_state(p, t))) < 1e-10);
        }
    }

    TEST_CASE("monotone trends") {
        for (double g : {0.0, 0.5, 1.2, 2.0, 3.0}) {
            double prev_cc = c2_cc(running(g), 0.0);
            double prev_rr = c2_rr(running(g), 0.0);
            for (int k = 1; k <= 600; ++k) {
                const double t = 0.01 * k;
                CHECK(c2_cc(running(g), t) <= prev_cc + 1e-15);
                CHECK(c2_rr(running(g), t) >= prev_rr - 1e-15);
                prev_cc = c2_cc(running(g), t);
                prev_rr = c2_rr(running(g), t);
                if (g < 3.0) CHECK(c2_cc(running(g + 0.1), t) >= c2_cc(running(g), t) - 1e-15);
            }
        }
    }

    TEST_CASE("cavity-reservoir maximum sits at ln 2 for every angle") {
        for (double g = 0.0; g <= std::numbers::pi; g += 0.1) {
            const double peak = c2_c1r1(running(g), kLn2);
            for (int k = 0; k <= 600; ++k) CHECK(c2_c1r1(running(g), 0.01 * k) <= peak + 1e-15);
        }
    }

    TEST_CASE("event times for the running example") {
        const auto ev = event_times(running());
        REQUIRE(ev.esd_c1c2);
        REQUIRE(ev.esb_r1r2);
        CHECK(*ev.esd_c1c2 == doctest::Approx(std::log(1.5)).epsilon(1e-12));
        CHECK(*ev.esb_r1r2 == doctest::Approx(std::log(3.0)).epsilon(1e-12));
        CHECK(*ev.esd_c1c2 == doctest::Approx(0.405465).epsilon(1e-6));
        CHECK(*ev.esb_r1r2 == doctest::Approx(1.098612).epsilon(1e-6));
        REQUIRE(ev.esd_c1r2);
        CHECK(*ev.esd_c1r2 == doctest::Approx(std::log(3 * (3 - std::sqrt(5.0)) / 2)).epsilon(1e-12));
        CHECK(*ev.esb_c1r2 == doctest::Approx(std::log(3 * (3 + std::sqrt(5.0)) / 2)).epsilon(1e-12));

        const auto route = event_times(running(2 * std::acos(std::sqrt(1.0 / 3.0))));
        CHECK_FALSE(route.esd_c1c2);
        CHECK_FALSE(event_times(running(3.0)).esd_c1c2);
        CHECK_FALSE(event_times({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.0, 1.0}).esd_c1c2);
        CHECK_FALSE(event_times({0.0, 1.0, 0.0, 1.0}).esd_c1c2);
    }

    TEST_CASE("event time relation over random parameters") {
        std::mt19937_64 rng(53);
        int found = 0;
        while (found < 100) {
            const auto p = random_params(rng);
            const auto ev = event_times(p);
            if (!ev.esd_c1c2) {
                CHECK_FALSE(ev.esb_r1r2);
                continue;
            }
            ++found;
            REQUIRE(ev.esb_r1r2);
            CHECK(std::abs(*ev.esb_r1r2 + std::log(1 - std::exp(-*ev.esd_c1c2))) < 1e-9);
            // Death of the cavity pair goes with an initial dead stretch of the reservoirs.
            CHECK(c2_rr(p, 0.5 * *ev.esb_r1r2) == 0.0);
            CHECK(c2_cc(p, *ev.esd_c1c2 - 1e-6) > 0.0);
            CHECK(c2_cc(p, *ev.esd_c1c2 + 1e-6) == 0.0);
        }
    }

    TEST_CASE("cavity death and reservoir dead stretch come together") {
        std::mt19937_64 rng(57);
        for (int i = 0; i < 300; ++i) {
            const auto p = random_params(rng);
            bool cc_dies = false;
            for (int k = 1; k <= 3000 && !cc_dies; ++k) cc_dies = c2_cc(p, 0.01 * k) == 0.0;
            const bool rr_dead_early = c2_rr(p, 1e-4) == 0.0;
            CHECK(cc_dies == rr_dead_early);
        }
    }

    TEST_CASE("critical angles") {
        const auto c = critical_angles(running());
        REQUIRE(c.gamma_route);
        REQUIRE(c.gamma_window);
        CHECK(*c.gamma_route == doctest::Approx(1.91063).epsilon(1e-5));
        CHECK(*c.gamma_window == doctest::Approx(1.23096).epsilon(1e-5));
        CHECK(*c.gamma_route == doctest::Approx(2 * std::acos(std::sqrt(1.0 / 3.0))).epsilon(1e-14));

        const auto eq = critical_angles({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.0, 1.0});
        REQUIRE(eq.gamma_route);
        CHECK(*eq.gamma_route == doctest::Approx(0.0));
        CHECK_FALSE(eq.gamma_window);
        CHECK_FALSE(event_times({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0.1, 1.0}).esd_c1c2);

        std::mt19937_64 rng(59);
        for (int i = 0; i < 200; ++i) {
            const auto ca = critical_angles(random_params(rng));
            if (ca.gamma_window && ca.gamma_route) {
                CHECK(0.0 <= *ca.gamma_window);
                CHECK(*ca.gamma_window <= *ca.gamma_route);
                CHECK(*ca.gamma_route <= std::numbers::pi);
            }
        }
        CHECK_THROWS_AS(critical_angles({1.0, 0.0, 0.0, 1.0}), std::invalid_argument);
    }

    TEST_CASE("plateau") {
        const auto pl = plateau(running());
        REQUIRE(pl);
        CHECK(pl->start == doctest::Approx(std::log(1.5)).epsilon(1e-12));
        CHECK(pl->end == doctest::Approx(std::log(3.0)).epsilon(1e-12));
        CHECK(pl->width == doctest::Approx(kLn2).epsilon(1e-12));

        const double gw = 2 * std::acos(std::sqrt(2.0 / 3.0));
        const auto point = plateau(running(gw));
        REQUIRE(point);
        CHECK(point->width < 1e-7);
        CHECK(point->start == doctest::Approx(kLn2).epsilon(1e-7));
        CHECK_FALSE(plateau(running(gw + 0.01)));
        CHECK_FALSE(plateau(running(2.5)));

        // Closed-form width for the running example, across the window.
        for (double g = 0.0; g < gw; g += 0.05) {
            const double c2 = std::pow(std::cos(g / 2), 2);
            const auto p = plateau(running(g));
            REQUIRE(p);
            CHECK(p->width == doctest::Approx(std::log(3 * c2 - 1)).epsilon(1e-10));
            for (double t = p->start; t <= p->end; t += p->width / 20 + 1e-9) {
                const auto r = analytic_report(running(g), t);
                CHECK(r.e_bb == doctest::Approx(0.36).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("general event times") {
        GeneralInitialState sym;
        sym.a = {kAlpha, 0.0, 0.0, kBeta};
        const auto g = general_event_times(sym, 1.0);
        const auto e = event_times(running());
        REQUIRE(g.esd_c1c2);
        REQUIRE(g.esb_r1r2);
        CHECK(std::abs(*g.esd_c1c2 - *e.esd_c1c2) < 1e-9);
        CHECK(std::abs(*g.esb_r1r2 - *e.esb_r1r2) < 1e-9);

        GeneralInitialState bell;
        bell.a = {1 / std::sqrt(2.0), 0.0, 0.0, 1 / std::sqrt(2.0)};
        CHECK_FALSE(general_event_times(bell, 1.0).esd_c1c2);

        // Phases and the single-excitation admixture move the events but keep the relation.
        std::mt19937_64 rng(61);
        int with_esd = 0;
        for (int i = 0; i < 200; ++i) {
            auto init = support::random_general(rng);
            if (i % 2 == 0) init.a[1] = init.a[2] = 0.0;
            const double n = std::sqrt(std::norm(init.a[0]) + std::norm(init.a[1]) + std::norm(init.a[2]) +
                                       std::norm(init.a[3]));
            for (auto& x : init.a) x /= n;
            const auto ev = general_event_times(init, 1.0);
            if (ev.esd_c1c2) {
                ++with_esd;
                REQUIRE(ev.esb_r1r2);
                CHECK(std::abs(*ev.esb_r1r2 + std::log(1 - std::exp(-*ev.esd_c1c2))) < 1e-6);
            }
        }
        CHECK(with_esd > 10);
        CHECK_THROWS_AS(general_event_times(sym, 0.0), std::invalid_argument);
    }

    TEST_CASE("scan grid") {
        const std::array<double, 1> one_t{0.7};
        const std::array<double, 1> one_g{0.3};
        const auto single = scan_grid(running(), one_t, one_g);
        REQUIRE(single.size() == 1);
        CHECK(single[0].kappa_t == 0.7);
        CHECK(single[0].gamma == 0.3);

        std::vector<double> ts;
        for (int k = 0; k <= 600; ++k) ts.push_back(0.01 * k);
        const std::array<double, 1> zero{0.0};
        const auto rows = scan_grid(running(), ts, zero);
        REQUIRE(rows.size() == ts.size());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].analytic.c2_c1c2 <= rows[i - 1].analytic.c2_c1c2 + 1e-15);
            CHECK(rows[i].analytic.c2_r1r2 >= rows[i - 1].analytic.c2_r1r2 - 1e-15);
        }
        for (const auto& r : rows) {
            CHECK(std::abs(r.report.c2_c1r2 + r.report.c2_c2r1 - 2 * c2_c1r2(running(), r.kappa_t)) < 1e-10);
        }

        const std::array<double, 3> gs{0.0, 1.0, 2.0};
        const std::array<double, 2> two_t{0.0, 1.0};
        const auto grid = scan_grid(running(), two_t, gs);
        REQUIRE(grid.size() == 6);
        CHECK(grid[1].gamma == 0.0);
        CHECK(grid[1].kappa_t == 1.0);
        CHECK(grid[2].gamma == 1.0);

        CHECK_THROWS_AS(scan_grid(running(), std::span<const double>{}, gs), std::invalid_argument);
        const std::array<double, 1> bad_g{4.0};
        CHECK_THROWS_AS(scan_grid(running(), two_t, bad_g), std::invalid_argument);
    }
}
