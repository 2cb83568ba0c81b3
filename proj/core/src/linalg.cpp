#include "ggiw/linalg.hpp"

#include <algorithm>
#include <limits>

namespace ggiw {

Mat2 inverse_wishart_mean(double v, const Mat2& scale, int dim) {
    const double denom = v - 2.0 * dim - 2.0;
    if (!(denom > 0.0)) {
        throw DomainError("inverse_wishart_mean: degrees of freedom must exceed 2d + 2");
    }
    return symmetrized(scale) / denom;
}

double gamma_mean(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("gamma_mean: shape and rate must be positive");
    }
    return alpha / beta;
}

double log_sum_exp(const double* values, std::size_t count) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) peak = std::max(peak, values[i]);
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += std::exp(values[i] - peak);
    return peak + std::log(acc);
}

}  // namespace ggiw
