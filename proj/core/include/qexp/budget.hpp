#pragma once

#include <array>
#include <vector>

#include "qexp/fullmodel.hpp"

namespace qexp {

struct NoiseBudget {
    std::vector<double> frequency_hz;
    std::vector<double> total;
    std::array<std::vector<double>, kNoisePortCount> contribution;

    const std::vector<double>& operator[](NoisePort p) const {
        return contribution[static_cast<int>(p)];
    }
};

NoiseBudget decompose(const DetectorConfig& cfg, const ReadoutConfig& readout,
                      const std::vector<double>& grid_hz);

// Phase-insensitive pre-amplification by e^q ahead of a lossy readout,
// signal squeezed by r.
double caves_snr(double eta, double r, double q);

struct Band {
    double f_min_hz = 1000.0;
    double f_max_hz = 4000.0;
    std::size_t points = 121;
};

// Integral of 1 / S_h over the band (linear trapezoid).
double band_sensitivity(const DetectorConfig& cfg, const ReadoutConfig& readout, const Band& band);

// Splits a total loss between SE internal loss and readout loss.
DetectorConfig with_total_loss(DetectorConfig cfg, double total_loss, double internal_share = 0.5);

struct BenefitMap {
    std::vector<double> total_loss;
    std::vector<double> gain_fraction;
    std::vector<double> improvement_db;  // row-major, loss x gain
    std::vector<double> best_gain_fraction;
    std::vector<double> best_improvement_db;

    double at(std::size_t loss_index, std::size_t gain_index) const {
        return improvement_db[loss_index * gain_fraction.size() + gain_index];
    }
};

// Gain fractions are relative to threshold; negative values amplify the
// signal quadrature.
BenefitMap benefit_map(const DetectorConfig& cfg_base, const std::vector<double>& loss_grid,
                       double ext_squeeze, const std::vector<double>& gain_grid,
                       const Band& band = {}, double internal_share = 0.5);

struct GainOptimum {
    double fraction = 0;
    double improvement_db = 0;
    bool flat = false;
};

struct GainSearch {
    double upper = 1.0 - 1e-6;
    std::size_t coarse_points = 101;
    double tolerance = 1e-4;
    double flat_db = 0.1;
};

// Maximizes band_sensitivity over internal gain in [0, upper].
GainOptimum optimize_gain(const DetectorConfig& cfg, const ReadoutConfig& readout,
                          const Band& band = {}, const GainSearch& search = {});

}  // namespace qexp
