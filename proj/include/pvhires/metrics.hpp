#pragma once

#include <cmath>
#include <span>

#include "pvhires/error.hpp"

namespace pvhires {

struct ErrorMetrics {
    double r2 = 0;
    double mbe = 0;
    double rmse = 0;
};

inline ErrorMetrics error_metrics(std::span<const double> predicted, std::span<const double> measured) {
    if (predicted.size() != measured.size()) throw LengthMismatch("predicted and measured series differ in length");
    if (predicted.size() < 2) throw LengthMismatch("error metrics need at least two samples");
    const auto n = static_cast<double>(predicted.size());
    double mean = 0;
    for (double m : measured) mean += m;
    mean /= n;
    double bias = 0, ss_res = 0, ss_tot = 0;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const double d = predicted[k] - measured[k];
        bias += d;
        ss_res += d * d;
        ss_tot += (measured[k] - mean) * (measured[k] - mean);
    }
    if (ss_tot == 0) throw DegenerateVariance("measured series has zero variance");
    return {1.0 - ss_res / ss_tot, bias / n, std::sqrt(ss_res / n)};
}

}  // namespace pvhires
