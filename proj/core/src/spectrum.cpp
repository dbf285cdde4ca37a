#include "qexp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qexp {

void Spectrum::validate() const {
    if (frequency_hz.size() != value.size())
        throw std::invalid_argument("spectrum: frequency and value lengths differ");
    if (frequency_hz.size() < 2) throw std::invalid_argument("spectrum: need at least two points");
    for (std::size_t i = 0; i < frequency_hz.size(); ++i) {
        if (!(frequency_hz[i] > 0.0)) throw std::invalid_argument("spectrum: frequencies must be positive");
        if (i > 0 && !(frequency_hz[i] > frequency_hz[i - 1]))
            throw std::invalid_argument("spectrum: frequencies must increase strictly");
        if (!(value[i] > 0.0)) throw std::invalid_argument("spectrum: PSD values must be positive");
    }
}

std::vector<double> log_grid(double f_min_hz, double f_max_hz, std::size_t n) {
    if (!(f_min_hz > 0.0 && f_max_hz > f_min_hz) || n < 2)
        throw std::invalid_argument("log_grid: need 0 < f_min < f_max and n >= 2");
    std::vector<double> f(n);
    const double lo = std::log(f_min_hz), hi = std::log(f_max_hz);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    f.front() = f_min_hz;
    f.back() = f_max_hz;
    return f;
}

std::vector<double> linear_grid(double f_min_hz, double f_max_hz, std::size_t n) {
    if (!(f_max_hz > f_min_hz) || n < 2)
        throw std::invalid_argument("linear_grid: need f_min < f_max and n >= 2");
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = f_min_hz + (f_max_hz - f_min_hz) * static_cast<double>(i) / static_cast<double>(n - 1);
    f.back() = f_max_hz;
    return f;
}

double interpolate_loglog(const Spectrum& s, double f_hz) {
    const auto& x = s.frequency_hz;
    if (x.empty() || f_hz < x.front() || f_hz > x.back())
        throw std::invalid_argument("interpolate_loglog: frequency outside spectrum grid");
    auto it = std::lower_bound(x.begin(), x.end(), f_hz);
    std::size_t j = static_cast<std::size_t>(it - x.begin());
    if (x[j] == f_hz) return s.value[j];
    const std::size_t i = j - 1;
    const double t = std::log(f_hz / x[i]) / std::log(x[j] / x[i]);
    return std::exp(std::log(s.value[i]) + t * std::log(s.value[j] / s.value[i]));
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

}  // namespace qexp
