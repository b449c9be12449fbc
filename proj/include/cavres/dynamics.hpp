// dynamics.hpp: closed-form entanglement curves of the effective output state,
// sudden death / birth times, critical rotation angles, the block-block
// plateau, and oracle-checked parameter scans.
//
// Curve functions take the physical time t and use p.kappa. Event times,
// plateaus and scan rows are expressed in the dimensionless kappa*t.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cavres/measures.hpp"
#include "cavres/states.hpp"

namespace cavres {

double c2_cc(const EffectiveParams& p, double t);
double c2_rr(const EffectiveParams& p, double t);
double c2_c1r1(const EffectiveParams& p, double t);
double c2_c2r2(const EffectiveParams& p, double t);
double c2_c1r2(const EffectiveParams& p, double t);

/// Every EntanglementReport field from the closed forms.
EntanglementReport analytic_report(const EffectiveParams& p, double t);

/// All values in units of 1/kappa.
struct EventTimes {
    std::optional<double> esd_c1c2;
    std::optional<double> esb_r1r2;
    std::optional<double> esd_c1r2;
    std::optional<double> esb_c1r2;
};

/// Cavity ESD and reservoir ESB exist iff beta cos^2(gamma/2) > alpha; the
/// c1r2 window exists iff beta cos^2(gamma/2) >= 2 alpha (a single point at
/// equality). Each time is checked against a sign change of its curve.
EventTimes event_times(const EffectiveParams& p);

struct CriticalAngles {
    std::optional<double> gamma_window;  ///< 2 arccos sqrt(2 alpha / beta)
    std::optional<double> gamma_route;   ///< 2 arccos sqrt(alpha / beta)
};

CriticalAngles critical_angles(const EffectiveParams& p);

struct Plateau {
    double start = 0.0;
    double end = 0.0;
    double width = 0.0;
};

/// Maximal kappa*t interval on which the four cross-pair concurrences all
/// vanish; E_BB = 4 alpha^2 beta^2 there.
std::optional<Plateau> plateau(const EffectiveParams& p);

/// Locates cavity ESD and reservoir ESB numerically by bisection on the
/// Wootters margin over kappa*t in [0, 30]. Only the c1c2 / r1r2 fields are
/// filled. Throws InvariantViolation if an ESD is found without the matching
/// ESB at -ln(1 - exp(-t0)) (1e-6).
EventTimes general_event_times(const GeneralInitialState& init, double kappa);

/// Horizon and tolerance of general_event_times, in kappa*t.
inline constexpr double kEventHorizon = 30.0;
inline constexpr double kEventTolerance = 1e-9;

struct ScanRow {
    double kappa_t = 0.0;
    double gamma = 0.0;
    EntanglementReport report;    ///< from the state vector
    EntanglementReport analytic;  ///< from the closed forms
};

/// One row per (gamma, t), gamma-major. p.gamma is ignored. Throws
/// InvariantViolation when a row's analytic and numerical values differ by
/// more than 1e-10.
std::vector<ScanRow> scan_grid(const EffectiveParams& p, std::span<const double> t_values,
                               std::span<const double> gamma_values);

inline constexpr double kOracleTolerance = 1e-10;

}  // namespace cavres
