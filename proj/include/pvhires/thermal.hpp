#pragma once

// Transient cell temperature from the Fuentes energy balance
//
//   hc (Tc - Ta) + eps sigma [(Tc^4 - Ts^4) + (Tc^4 - Tg^4)] - alpha E + mc dTc/dt = 0
//
// with sky temperature Ts = 0.0552 Ta^1.5, ground temperature Tg = Ta and a
// mixed forced/free convection coefficient scaled so that the steady state at
// 800 W/m^2, 20 C air and 1 m/s wind equals the installed NOCT.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvhires/constants.hpp"
#include "pvhires/error.hpp"

namespace pvhires {

struct ThermalParams {
    double inoct_c = 48.0;         // installed nominal operating cell temperature, C
    double emissivity = 0.84;
    double absorptivity = 0.83;    // net of electrical conversion
    double thermal_mass = 11000.0; // J/(m^2 K)
    double mount_height = 5.0;     // m, for the wind-speed height correction

    void validate() const {
        if (!(emissivity > 0 && emissivity <= 1)) throw ConfigError("thermal: emissivity must lie in (0, 1]");
        if (!(absorptivity > 0 && absorptivity <= 1)) throw ConfigError("thermal: absorptivity must lie in (0, 1]");
        if (!(thermal_mass > 0)) throw ConfigError("thermal: thermal_mass must be positive");
        if (!(mount_height > 0)) throw ConfigError("thermal: mount_height must be positive");
        if (!(inoct_c > 20.0 && inoct_c < 100.0)) throw ConfigError("thermal: inoct must lie in (20, 100) C");
    }
};

struct ThermalEnv {
    double e_eff = 0;       // W/m^2
    double temp_air = 0;    // K
    double wind_speed = 0;  // m/s
    /// Overrides the sky temperature closure when set (K).
    std::optional<double> sky_temp;
};

namespace detail {

inline double sky_temperature(const ThermalEnv& env) {
    return env.sky_temp ? *env.sky_temp : 0.0552 * std::pow(env.temp_air, 1.5);
}

/// Mixed convection before the INOCT scaling factor.
inline double raw_convection(double wind, double dtemp, double mount_height) {
    const double w = std::max(wind, 0.0) * std::pow(mount_height / 10.0, 0.2);
    const double forced = 2.8 + 3.0 * w;
    const double free = 1.31 * std::cbrt(std::abs(dtemp));
    return std::cbrt(forced * forced * forced + free * free * free);
}

inline double radiation(double tc, double ts, double tg, double eps) {
    const double tc4 = tc * tc * tc * tc;
    return eps * constants::stefan_boltzmann * ((tc4 - ts * ts * ts * ts) + (tc4 - tg * tg * tg * tg));
}

/// Convection scale that makes the INOCT point an equilibrium.
inline double convection_scale(const ThermalParams& p) {
    ThermalEnv ref{800.0, constants::zero_celsius + 20.0, 1.0, std::nullopt};
    const double tc = constants::zero_celsius + p.inoct_c;
    const double dtemp = tc - ref.temp_air;
    const double needed = (p.absorptivity * ref.e_eff -
                           radiation(tc, sky_temperature(ref), ref.temp_air, p.emissivity)) / dtemp;
    if (!(needed > 0)) throw ConfigError("thermal: inoct is unreachable with the given emissivity/absorptivity");
    return needed / raw_convection(ref.wind_speed, dtemp, p.mount_height);
}

/// Monotone root of g on [lo, hi] with g(lo) <= 0 <= g(hi): Newton steps on a
/// finite-difference slope, falling back to bisection outside the bracket.
template <class G>
double bracketed_root(G&& g, double lo, double hi, double x, double xtol, double ftol, int max_iter, const char* what) {
    double glo = g(lo), ghi = g(hi);
    if (glo > 0 || ghi < 0) throw NoRootInBracket(std::string(what) + ": balance does not change sign on the search interval");
    x = std::clamp(x, lo, hi);
    for (int it = 0; it < max_iter; ++it) {
        const double gx = g(x);
        if (std::abs(gx) <= ftol) return x;
        if (gx < 0) lo = x; else hi = x;
        if (hi - lo <= xtol) return 0.5 * (lo + hi);
        const double h = 1e-6;
        const double slope = (g(x + h) - gx) / h;
        double next = slope > 0 ? x - gx / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= xtol) return next;
        x = next;
    }
    throw NonConvergence(std::string(what) + ": iteration budget exhausted");
}

}  // namespace detail

/// Net heat flux out of the cell (W/m^2) at temperature tc in steady air;
/// zero at the steady state, positive when the cell is cooling.
inline double thermal_balance(double tc, const ThermalEnv& env, const ThermalParams& p, double scale) {
    const double dtemp = tc - env.temp_air;
    const double hc = scale * detail::raw_convection(env.wind_speed, dtemp, p.mount_height);
    return hc * dtemp + detail::radiation(tc, detail::sky_temperature(env), env.temp_air, p.emissivity) -
           p.absorptivity * env.e_eff;
}

inline double thermal_balance(double tc, const ThermalEnv& env, const ThermalParams& p) {
    return thermal_balance(tc, env, p, detail::convection_scale(p));
}

inline void validate_env(const ThermalEnv& env) {
    if (!(env.e_eff >= 0)) throw DataError("thermal: effective irradiance must be non-negative");
    if (!(env.temp_air > 0)) throw DataError("thermal: air temperature must be positive (K)");
    if (!(env.wind_speed >= 0)) throw DataError("thermal: wind speed must be non-negative");
}

/// Temperature at which the static balance vanishes.
inline double steady_state_temp(const ThermalEnv& env, const ThermalParams& p) {
    validate_env(env);
    const double scale = detail::convection_scale(p);
    auto g = [&](double tc) { return thermal_balance(tc, env, p, scale); };
    return detail::bracketed_root(g, env.temp_air - 50.0, env.temp_air + 100.0, env.temp_air, 1e-12, 1e-8, 200,
                                  "steady_state_temp");
}

/// One implicit (backward Euler) step of dt seconds from prev_tc.
class FuentesModel {
public:
    explicit FuentesModel(ThermalParams p) : p_(p) {
        p_.validate();
        scale_ = detail::convection_scale(p_);
    }

    const ThermalParams& params() const { return p_; }

    double balance(double tc, const ThermalEnv& env) const { return thermal_balance(tc, env, p_, scale_); }

    double step(double prev_tc, const ThermalEnv& env, double dt) const {
        if (!(dt > 0)) throw DataError("fuentes_step: dt must be positive");
        if (!(prev_tc >= 150.0 && prev_tc <= 400.0)) throw DataError("fuentes_step: previous temperature outside [150, 400] K");
        validate_env(env);
        const double k = p_.thermal_mass / dt;
        auto g = [&](double tc) { return k * (tc - prev_tc) + balance(tc, env); };
        // The implicit solution lies between prev_tc and the steady state; the
        // wide interval below contains both for any admissible input.
        const double lo = std::min(prev_tc, env.temp_air) - 60.0;
        const double hi = std::max(prev_tc, env.temp_air) + 120.0;
        return detail::bracketed_root(g, lo, hi, prev_tc, 1e-11, 1e-10, 100, "fuentes_step");
    }

    /// Temperature chain over consecutive environments. The chain starts at
    /// initial_tc (or the first air temperature).
    std::vector<double> run(std::span<const ThermalEnv> envs, double dt, std::optional<double> initial_tc = {}) const {
        std::vector<double> out;
        out.reserve(envs.size());
        if (envs.empty()) return out;
        double tc = initial_tc ? *initial_tc : envs.front().temp_air;
        for (const auto& env : envs) {
            tc = step(tc, env, dt);
            out.push_back(tc);
        }
        return out;
    }

private:
    ThermalParams p_;
    double scale_ = 1;
};

inline double fuentes_step(double prev_tc, const ThermalEnv& env, double dt, const ThermalParams& p) {
    return FuentesModel(p).step(prev_tc, env, dt);
}

}  // namespace pvhires
