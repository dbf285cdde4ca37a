#pragma once

#include <complex>

#include "qexp/detector.hpp"

namespace qexp {

struct DerivedRates {
    double carrier = 0;            // omega_0
    double sloshing = 0;           // omega_s
    double se_coupling = 0;        // gamma
    double signal_coupling = 0;    // G
    double gain = 0;               // chi
    double baseline_bandwidth = 0; // omega_s^2 / gamma
    double expanded_bandwidth = 0; // omega_s^2 / (gamma - chi), +inf at threshold
    bool at_threshold = false;
};

DerivedRates derive_rates(const DetectorConfig& cfg, double chi);

// chi = fraction * gamma
double gain_from_fraction(const DetectorConfig& cfg, double chi_over_gamma);

struct TwoModeResponse {
    std::complex<double> noise;     // output phase quadrature per input vacuum
    std::complex<double> signal;    // output per unit strain
    std::complex<double> se_noise;  // SE mode per input vacuum
    std::complex<double> arm;       // arm mode per SE vacuum
};

TwoModeResponse io_twomode(const DetectorConfig& cfg, double chi, double omega);

// Single-sided strain PSD, 1/Hz. Negative omega throws std::domain_error.
double strain_psd_twomode(const DetectorConfig& cfg, double chi, double omega);

// Arm-field fluctuation spectrum S_aa.
double arm_field_psd(const DetectorConfig& cfg, double chi, double omega);

// Cramer-Rao bound built from S_aa; coincides with strain_psd_twomode.
double qcrb_psd(const DetectorConfig& cfg, double chi, double omega);

}  // namespace qexp
