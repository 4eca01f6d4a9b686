#pragma once

// Module-level power electronics: a dual-mode buck optimizer and a DC-side
// microinverter.
//
// Optimizer: while the string asks for no more than the module's MPP current
// the device passes the module through unchanged (conductive mode). Above it
// the module is held at its MPP and the buck stage steps the voltage down so
// the output carries the string current (buck mode). The duty cycle follows
// from current matching, D = eta i_mpp / I, bounded by [d_min, d_max].

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "pvhires/error.hpp"
#include "pvhires/iv_curve.hpp"
#include "pvhires/mpp.hpp"

namespace pvhires {

struct LossParams {
    double switch_coeff = 0.0056;  // W per (V A) of switched power at unit duty
    double conduction_r = 0.025;   // ohm, inductor and switch conduction path
    double capacitor_esr = 0.05;   // ohm, output capacitor
    double control_power = 0.15;   // W, drawn while converting

    void validate() const {
        if (switch_coeff < 0 || conduction_r < 0 || capacitor_esr < 0 || control_power < 0) {
            throw ConfigError("optimizer loss parameters must be non-negative");
        }
    }
};

struct OptimizerSpec {
    double d_min = 0.1;
    double d_max = 0.95;
    double i_max = 15.0;  // A, output current rating
    LossParams loss;

    void validate() const {
        if (!(d_min > 0 && d_min < d_max && d_max <= 1)) throw ConfigError("optimizer duty bounds must satisfy 0 < d_min < d_max <= 1");
        if (!(i_max > 0)) throw ConfigError("optimizer i_max must be positive");
        loss.validate();
    }

    static OptimizerSpec lossless() {
        OptimizerSpec s;
        s.d_max = 1.0;
        s.loss = LossParams{0, 0, 0, 0};
        return s;
    }
};

enum class OptimizerMode { Conductive, Buck };

inline const char* to_string(OptimizerMode m) { return m == OptimizerMode::Buck ? "buck" : "conductive"; }

inline OptimizerMode select_mode(double i_demand, double i_activate) {
    return i_demand > i_activate ? OptimizerMode::Buck : OptimizerMode::Conductive;
}

/// Impedance-matching duty cycle sqrt(r_out / r_in) in buck mode, 1 otherwise.
inline double required_duty(double r_in, double r_out, OptimizerMode mode) {
    if (mode == OptimizerMode::Conductive) return 1.0;
    if (!(r_in > 0 && r_out > 0)) throw DataError("required_duty: resistances must be positive");
    return std::sqrt(r_out / r_in);
}

inline double clamp_duty(double d, const OptimizerSpec& spec) { return std::min(std::max(d, spec.d_min), spec.d_max); }

/// eta = 1 - P_loss / P_in with
/// P_loss = k v_in i_in d + R i_out^2 + ESR (0.2 i_out)^2 + P_ctrl, i_out = i_in / d.
inline double converter_efficiency(double v_in, double i_in, double d, const LossParams& loss) {
    const double p_in = v_in * i_in;
    if (!(p_in > 0) || !(d > 0)) return 0.0;
    const double i_out = i_in / d;
    const double ripple = 0.2 * i_out;
    const double p_loss = loss.switch_coeff * v_in * i_in * d + loss.conduction_r * i_out * i_out +
                          loss.capacitor_esr * ripple * ripple + loss.control_power;
    return std::clamp(1.0 - p_loss / p_in, 0.0, 1.0);
}

struct OptimizerOutput {
    double v = 0;  // output voltage
    double i = 0;  // output current (the string current)
    double p = 0;
    OptimizerMode mode = OptimizerMode::Conductive;
    double duty = 1.0;
    double efficiency = 1.0;
    double v_in = 0, i_in = 0;  // module-side operating point
    bool demand_infeasible = false;
};

namespace detail {

/// Buck conversion at output current i_string (> 0).
inline OptimizerOutput buck_output(const OperatingPoint& mpp, double i_string, const OptimizerSpec& spec, const IVCurve& module) {
    OptimizerOutput out;
    out.mode = OptimizerMode::Buck;
    out.i = i_string;
    if (i_string > spec.i_max) {
        out.demand_infeasible = true;
        out.duty = spec.d_min;
        out.efficiency = 0;
        return out;
    }
    // Current matching with the module held at its MPP; eta depends on d.
    double eta = 1.0;
    double d = mpp.i / i_string;
    for (int it = 0; it < 50; ++it) {
        d = eta * mpp.i / i_string;
        const double next = converter_efficiency(mpp.v, mpp.i, d, spec.loss);
        if (std::abs(next - eta) < 1e-14) {
            eta = next;
            break;
        }
        eta = next;
    }
    d = eta * mpp.i / i_string;
    const double dc = clamp_duty(d, spec);
    if (dc == d) {
        out.duty = d;
        out.efficiency = eta;
        out.v_in = mpp.v;
        out.i_in = mpp.i;
        out.p = eta * mpp.p;
        out.v = out.p / i_string;
        return out;
    }
    // Duty at a bound: the module is pulled off its MPP to i_in = d I.
    out.duty = dc;
    out.i_in = dc * i_string;
    out.v_in = module.voltage_at(out.i_in);
    const double p_in = out.v_in * out.i_in;
    out.efficiency = converter_efficiency(out.v_in, out.i_in, dc, spec.loss);
    out.p = p_in > 0 ? out.efficiency * p_in : 0.0;
    out.v = out.p / i_string;
    return out;
}

}  // namespace detail

/// Optimizer output at string current i_string for a module with the given
/// MPP and curve. Buck output is used only where it beats pass-through, which
/// also covers the duty-ceiling region just above the MPP current.
inline OptimizerOutput optimizer_output(const OperatingPoint& module_mpp, double i_string, const OptimizerSpec& spec,
                                        const IVCurve& module_curve) {
    if (!(i_string >= 0)) throw DataError("optimizer_output: string current must be non-negative");
    OptimizerOutput pass;
    pass.i = i_string;
    pass.v = module_curve.voltage_at(i_string);
    pass.p = pass.v * i_string;
    pass.v_in = pass.v;
    pass.i_in = i_string;
    if (i_string == 0) {
        pass.p = 0;
        return pass;
    }
    if (select_mode(i_string, module_mpp.i) == OptimizerMode::Conductive || !(module_mpp.p > 0)) return pass;
    OptimizerOutput buck = detail::buck_output(module_mpp, i_string, spec, module_curve);
    if (buck.demand_infeasible) return buck;
    return buck.v > pass.v ? buck : pass;
}

/// Output characteristic of an optimized module sampled on an ascending
/// current grid. Voltages are made non-increasing in current by a running
/// minimum, which only trims efficiency ripple.
inline IVCurve build_optimized_curve(const IVCurve& module_curve, const OptimizerSpec& spec, std::span<const double> i_grid,
                                     std::vector<OptimizerMode>* modes = nullptr) {
    const OperatingPoint mpp = find_mpp(module_curve);
    std::vector<double> v(i_grid.size());
    if (modes) modes->assign(i_grid.size(), OptimizerMode::Conductive);
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < i_grid.size(); ++k) {
        const OptimizerOutput o = optimizer_output(mpp, i_grid[k], spec, module_curve);
        running = std::min(running, o.v);
        v[k] = running;
        if (modes) (*modes)[k] = o.mode;
    }
    return IVCurve::from_current_samples(i_grid, v, CurveLevel::Optimized, module_curve.label());
}

/// DC power a per-module MPP tracker harvests.
inline double microinverter_harvest(const IVCurve& module_curve) { return std::max(0.0, find_mpp(module_curve).p); }

}  // namespace pvhires
