#pragma once

// Two-diode equivalent circuit of a single cell.
//
//   I = Iph - Isat1 (exp((V + I Rs)/(n1 Vt)) - 1)
//           - Isat2 (exp((V + I Rs)/(n2 Vt)) - 1) - (V + I Rs)/Rsh
//
// Datasheet values describe the whole module; a module is treated as
// cells_in_series identical cells, so per-cell voltages, temperature
// coefficients and resistances are the module values divided by the cell
// count while currents are shared.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pvhires/constants.hpp"
#include "pvhires/error.hpp"
#include "pvhires/iv_curve.hpp"
#include "pvhires/module_db.hpp"

namespace pvhires {

inline double thermal_voltage(double tc) {
    if (!(tc > 0)) throw DataError("thermal_voltage: cell temperature must be positive");
    return constants::boltzmann * tc / constants::electron_charge;
}

struct CalibrationOptions {
    /// Relative STC maximum-power mismatch at which the Rs sweep stops.
    double tolerance = 0.02;
    /// Rs increment per iteration as a fraction of voc_stc / isc_stc.
    double rs_step_fraction = 1e-4;
    /// Fraction of the Isc-referenced dark current assigned to the second
    /// (recombination) diode; the first diode carries the rest.
    double recombination_share = 0.2;
};

/// Calibrated module-level equivalent-circuit parameters.
struct TwoDiodeParams {
    double rs = 0;    // ohm, whole module
    double rsh = 0;   // ohm, whole module
    double n1 = 1;
    double n2 = 2;
    double isat1_stc = 0;  // A
    double isat2_stc = 0;  // A
    double calibration_mpp_error = 0;  // signed relative error of the model STC MPP
    int iterations = 0;
    int cells_in_series = 1;
    double recombination_share = 0.2;
};

/// Per-cell parameters at one operating condition.
struct OperatingDiodeParams {
    double iph = 0;    // A
    double isat1 = 0;  // A
    double isat2 = 0;  // A
    double vt = 0;     // V
    double rs = 0;     // ohm, per cell
    double rsh = 0;    // ohm, per cell
    double n1 = 1;
    double n2 = 2;
    double tc = constants::t_stc;      // K
    double e_eff = constants::e_stc;   // W/m^2

    /// Terminal current as an explicit function of the junction voltage
    /// u = V + I Rs.
    double current_at_junction(double u) const {
        return iph - isat1 * std::expm1(u / (n1 * vt)) - isat2 * std::expm1(u / (n2 * vt)) - u / rsh;
    }
    double di_du(double u) const {
        return -isat1 * std::exp(u / (n1 * vt)) / (n1 * vt) - isat2 * std::exp(u / (n2 * vt)) / (n2 * vt) - 1.0 / rsh;
    }
    IVPoint point_at_junction(double u) const {
        const double i = current_at_junction(u);
        return {u - i * rs, i};
    }
};

namespace detail {

/// Saturation current of one diode at cell temperature tc, referenced to the
/// temperature-corrected open-circuit point and scaled by the diode's share.
inline double saturation_current(const ModuleSpec& spec, double n, double tc, double share) {
    const double dt = tc - constants::t_stc;
    const double voc_cell = (spec.voc_stc + spec.beta_voc * dt) / spec.cells_in_series;
    const double isc = spec.isc_stc + spec.alpha_isc * dt;
    return share * isc / std::expm1(voc_cell / (n * thermal_voltage(tc)));
}

inline OperatingDiodeParams stc_cell(const ModuleSpec& spec, double rs, double rsh, double n1, double n2, double share) {
    OperatingDiodeParams op;
    op.iph = spec.isc_stc;
    op.vt = thermal_voltage(constants::t_stc);
    op.n1 = n1;
    op.n2 = n2;
    op.isat1 = saturation_current(spec, n1, constants::t_stc, 1.0 - share);
    op.isat2 = saturation_current(spec, n2, constants::t_stc, share);
    op.rs = rs / spec.cells_in_series;
    op.rsh = rsh / spec.cells_in_series;
    return op;
}

/// Junction voltage at which the terminal current vanishes.
inline double open_circuit_junction(const OperatingDiodeParams& op) {
    if (op.iph <= 0) {
        // i(0) = iph <= 0: the root sits at or below zero; dark cells use 0.
        return 0.0;
    }
    double lo = 0.0;
    double hi = op.n1 * op.vt * std::log1p(op.iph / std::max(op.isat1, 1e-300));
    hi = std::max(hi, 1e-3);
    while (op.current_at_junction(hi) > 0) hi *= 1.5;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (op.current_at_junction(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Open-circuit voltage of one cell.
inline double open_circuit_voltage(const OperatingDiodeParams& op) {
    return detail::open_circuit_junction(op);  // I = 0 so V = u
}

/// Maximum power point of one cell, by golden-section search over the
/// junction voltage on [0, u_oc].
inline IVPoint cell_mpp(const OperatingDiodeParams& op) {
    const double uoc = detail::open_circuit_junction(op);
    if (uoc <= 0) return {0.0, std::max(op.iph, 0.0)};
    auto power = [&](double u) {
        const IVPoint p = op.point_at_junction(u);
        return p.v * p.i;
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0, b = uoc;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = power(c), fd = power(d);
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = power(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = power(d);
        }
    }
    return op.point_at_junction(0.5 * (a + b));
}

/// Initial shunt resistance from the datasheet MPP and short-circuit values.
inline double initial_shunt_resistance(const ModuleSpec& spec) {
    const double denom = spec.isc_stc - spec.imp_stc;
    if (!(denom > 0)) {
        throw CalibrationDiverged("module '" + spec.id + "': isc_stc - imp_stc is not positive, initial shunt resistance undefined");
    }
    return spec.vmp_stc / denom - (spec.voc_stc - spec.vmp_stc) / spec.imp_stc;
}

/// Shunt resistance that places the datasheet MPP on the model curve for a
/// given series resistance. Returns a non-positive value when no such shunt
/// exists.
inline double shunt_resistance_for(const ModuleSpec& spec, double rs, double isat1, double isat2, double n1, double n2) {
    const double vt_mod = thermal_voltage(constants::t_stc) * spec.cells_in_series;
    const double u = spec.vmp_stc + spec.imp_stc * rs;
    const double denom = spec.isc_stc - isat1 * std::expm1(u / (n1 * vt_mod)) - isat2 * std::expm1(u / (n2 * vt_mod)) - spec.imp_stc;
    if (!(denom > 0)) return -1.0;
    return u / denom;
}

/// Series/shunt resistance sweep: Rs grows from zero while Rsh is re-derived
/// so the datasheet MPP stays on the curve, until the model STC maximum power
/// is within tolerance of vmp_stc * imp_stc.
inline TwoDiodeParams calibrate_two_diode(const ModuleSpec& spec, const CalibrationOptions& opt = {}) {
    const double rsh0 = initial_shunt_resistance(spec);
    spec.validate();
    if (!(opt.recombination_share >= 0 && opt.recombination_share < 1)) {
        throw ConfigError("recombination_share must lie in [0, 1)");
    }

    const auto [n1, n2] = lookup_ideality_factors(spec.module_type, constants::e_stc);
    const double share = opt.recombination_share;
    const double isat1 = detail::saturation_current(spec, n1, constants::t_stc, 1.0 - share);
    const double isat2 = detail::saturation_current(spec, n2, constants::t_stc, share);
    const double target = spec.pmp_stc();
    const double step = opt.rs_step_fraction * spec.voc_stc / spec.isc_stc;
    const double rs_bound = 2.0 * (spec.voc_stc - spec.vmp_stc) / spec.imp_stc;

    if (!(rsh0 > 0)) throw NegativeRsh("module '" + spec.id + "': initial shunt resistance is not positive", 0.0);

    double rs = 0.0;
    double rsh = rsh0;
    for (int iter = 0;; ++iter) {
        const OperatingDiodeParams op = detail::stc_cell(spec, rs, rsh, n1, n2, share);
        const IVPoint mpp = cell_mpp(op);
        const double p_model = mpp.v * mpp.i * spec.cells_in_series;
        const double err = (p_model - target) / target;
        if (std::abs(err) < opt.tolerance) {
            TwoDiodeParams out;
            out.rs = rs;
            out.rsh = rsh;
            out.n1 = n1;
            out.n2 = n2;
            out.isat1_stc = isat1;
            out.isat2_stc = isat2;
            out.calibration_mpp_error = err;
            out.iterations = iter;
            out.cells_in_series = spec.cells_in_series;
            out.recombination_share = share;
            return out;
        }
        rs = step * (iter + 1);
        if (rs > rs_bound) {
            throw CalibrationDiverged("module '" + spec.id + "': Rs exceeded " + std::to_string(rs_bound) +
                                      " ohm without reaching the MPP tolerance");
        }
        rsh = shunt_resistance_for(spec, rs, isat1, isat2, n1, n2);
        if (!(rsh > 0)) {
            throw NegativeRsh("module '" + spec.id + "': shunt resistance turned non-positive at Rs = " + std::to_string(rs) + " ohm", rs);
        }
    }
}

/// Condition-adjusted per-cell parameters.
inline OperatingDiodeParams operating_params(const TwoDiodeParams& params, const ModuleSpec& spec, double e_eff, double tc) {
    if (!(e_eff >= 0)) throw DataError("operating_params: effective irradiance must be non-negative");
    const double dt = tc - constants::t_stc;
    const auto [n1, n2] = lookup_ideality_factors(spec.module_type, e_eff);
    OperatingDiodeParams op;
    op.e_eff = e_eff;
    op.tc = tc;
    op.vt = thermal_voltage(tc);
    op.n1 = n1;
    op.n2 = n2;
    op.iph = (spec.isc_stc + spec.alpha_isc * dt) * e_eff / constants::e_stc;
    op.isat1 = detail::saturation_current(spec, n1, tc, 1.0 - params.recombination_share);
    op.isat2 = detail::saturation_current(spec, n2, tc, params.recombination_share);
    op.rs = params.rs / spec.cells_in_series;
    op.rsh = params.rsh / spec.cells_in_series;
    return op;
}

/// Cell current at terminal voltage v. Safeguarded Newton inside a bisection
/// bracket; the residual is strictly decreasing in i so the root is unique.
inline double solve_cell_current(const OperatingDiodeParams& op, double v) {
    auto f = [&](double i) { return op.current_at_junction(v + i * op.rs) - i; };
    auto df = [&](double i) { return op.di_du(v + i * op.rs) * op.rs - 1.0; };

    double lo = -0.1 * op.iph - 1.0;
    double hi = op.iph + 1.0;
    for (int k = 0; k < 60 && f(lo) < 0; ++k) lo = 2.0 * lo - 1.0;
    for (int k = 0; k < 60 && f(hi) > 0; ++k) hi = 2.0 * hi + 1.0;
    if (f(lo) < 0 || f(hi) > 0) throw NonConvergence("solve_cell_current: could not bracket the root");

    double i = std::clamp(op.iph - v / op.rsh, lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double fi = f(i);
        if (std::abs(fi) < 1e-12) return i;
        if (fi > 0) lo = i; else hi = i;
        if (hi - lo < 1e-13) return 0.5 * (lo + hi);
        double next = i - fi / df(i);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        i = next;
    }
    const double fi = f(i);
    if (std::abs(fi) < 1e-9) return i;
    throw NonConvergence("solve_cell_current: iteration budget exhausted at v = " + std::to_string(v));
}

struct CellCurveOptions {
    /// Most negative cell voltage sampled (reverse-bias extent).
    double v_reverse = -2.0;
    /// A segment is accepted when its midpoint lies within tol_v of the chord
    /// along the voltage axis or within tol_i along the current axis.
    double tol_v = 2e-6;
    double tol_i = 2e-6;
    /// Forward extent for dark cells, whose open-circuit voltage is zero.
    double dark_forward_v = 0.1;
    std::size_t max_points = 20000;
};

/// Sampled cell characteristic from v_reverse up to open circuit.
///
/// Points are generated along the junction voltage, where the two-diode
/// relation is explicit, so each sample is an exact solution of the circuit
/// equation. n_points uniform samples seed the forward region; segments are
/// then split until linear interpolation meets the chord tolerances.
inline IVCurve cell_iv_curve(const OperatingDiodeParams& op, std::size_t n_points = 32, const CellCurveOptions& opt = {}) {
    if (n_points < 16) throw DataError("cell_iv_curve: n_points must be at least 16");
    if (!(opt.v_reverse < 0)) throw DataError("cell_iv_curve: v_reverse must be negative");

    const double uoc = detail::open_circuit_junction(op);
    const double u_top = op.iph > 0 ? uoc : opt.dark_forward_v;
    // Reverse region: diodes are saturated at -isat, the rest is ohmic.
    const double u_lo = (opt.v_reverse + op.rs * (op.iph + op.isat1 + op.isat2)) / (1.0 + op.rs / op.rsh);

    struct Sample {
        double u;
        IVPoint p;
    };
    std::vector<Sample> seeds;
    seeds.reserve(n_points + 8);
    for (int k = 0; k < 4; ++k) {
        const double u = u_lo * (1.0 - k / 4.0);
        seeds.push_back({u, op.point_at_junction(u)});
    }
    for (std::size_t k = 0; k < n_points; ++k) {
        const double u = u_top * static_cast<double>(k) / static_cast<double>(n_points - 1);
        seeds.push_back({u, op.point_at_junction(u)});
    }
    if (op.iph > 0) seeds.back().p = {uoc, 0.0};

    auto acceptable = [&](const Sample& a, const Sample& m, const Sample& b) {
        const double dv = b.p.v - a.p.v;
        const double di = b.p.i - a.p.i;
        if (dv > 0) {
            const double i_chord = a.p.i + di * (m.p.v - a.p.v) / dv;
            if (std::abs(m.p.i - i_chord) <= opt.tol_i) return true;
        }
        if (di != 0) {
            const double v_chord = a.p.v + dv * (m.p.i - a.p.i) / di;
            if (std::abs(m.p.v - v_chord) <= opt.tol_v) return true;
        }
        return false;
    };

    std::vector<IVPoint> pts;
    pts.reserve(4 * n_points);
    pts.push_back(seeds.front().p);
    std::vector<Sample> stack;
    for (std::size_t k = 1; k < seeds.size(); ++k) {
        // Depth-first refinement of [seeds[k-1], seeds[k]], emitting points in
        // increasing u order.
        stack.clear();
        stack.push_back(seeds[k]);
        Sample left = seeds[k - 1];
        while (!stack.empty()) {
            const Sample right = stack.back();
            const double um = 0.5 * (left.u + right.u);
            const Sample mid{um, op.point_at_junction(um)};
            const bool tiny = right.u - left.u < 1e-12 * std::max(1.0, std::abs(left.u));
            if (tiny || pts.size() + stack.size() >= opt.max_points || acceptable(left, mid, right)) {
                pts.push_back(right.p);
                left = right;
                stack.pop_back();
            } else {
                stack.push_back(mid);
            }
        }
    }

    // Guard against rounding ties at extremely fine spacing.
    std::vector<IVPoint> clean;
    clean.reserve(pts.size());
    for (const auto& p : pts) {
        if (!clean.empty() && !(p.v > clean.back().v)) continue;
        if (!clean.empty() && p.i > clean.back().i) continue;
        clean.push_back(p);
    }
    return IVCurve(std::move(clean), CurveLevel::Cell);
}

}  // namespace pvhires
