#pragma once

#include <complex>

#include "qexp/detector.hpp"

namespace qexp {

// Lossless ITM / SE-mirror chain with a single-pass phase-quadrature gain.
// Amplitude coefficients; trip times in s.
struct ChainParams {
    double itm_reflectivity = 0;
    double itm_transmissivity = 0;
    double sem_reflectivity = 0;
    double sem_transmissivity = 0;
    double gain = 0;  // q, nepers
    double se_tuning = constants::pi / 2;
    double arm_trip = 0;
    double se_trip = 0;
    double wavenumber = 0;
    double amplitude = 0;  // carrier, sqrt(photons / s)

    static ChainParams from_detector(const DetectorConfig& cfg);
    void validate() const;
};

struct ExactTransfer {
    std::complex<double> noise;   // R_a
    std::complex<double> signal;  // T_sig, per metre of end-mirror motion
    bool unstable = false;        // anti-squeezed loop at or above threshold
};

ExactTransfer exact_transfer(const ChainParams& p, double omega);

// SE intracavity field (just inside the SE mirror) per unit input vacuum.
std::complex<double> se_field_transfer(const ChainParams& p, double omega);

// |R_a|^2 / |T_sig|^2 referred to strain, with the arm sinc response.
double strain_psd_exact(const ChainParams& p, double omega);

}  // namespace qexp
