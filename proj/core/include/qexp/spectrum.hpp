#pragma once

#include <cstddef>
#include <vector>

namespace qexp {

struct Spectrum {
    std::vector<double> frequency_hz;
    std::vector<double> value;

    std::size_t size() const { return frequency_hz.size(); }
    // Throws std::invalid_argument unless the grid is strictly increasing,
    // positive and matched by positive values.
    void validate() const;
};

// n log-spaced points from f_min to f_max inclusive.
std::vector<double> log_grid(double f_min_hz, double f_max_hz, std::size_t n);
std::vector<double> linear_grid(double f_min_hz, double f_max_hz, std::size_t n);

// Log-log interpolation; the argument must lie within the grid.
double interpolate_loglog(const Spectrum& s, double f_hz);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qexp
