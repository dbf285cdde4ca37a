#include "qexp/twomode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qexp/errors.hpp"

namespace qexp {

using constants::c;
using constants::hbar;

DerivedRates derive_rates(const DetectorConfig& cfg, double chi) {
    cfg.validate();
    if (!(chi >= 0.0)) throw ConfigError("chi", "internal gain chi must be non-negative");

    DerivedRates r;
    r.carrier = cfg.carrier_frequency();
    r.sloshing = c * std::sqrt(cfg.itm_transmission / (4.0 * cfg.se_length * cfg.arm_length));
    r.se_coupling = c * cfg.sem_transmission / (4.0 * cfg.se_length);
    r.signal_coupling =
        std::sqrt(2.0 * cfg.circulating_power() * cfg.arm_length * r.carrier / (hbar * c));
    r.gain = chi;
    r.baseline_bandwidth = r.sloshing * r.sloshing / r.se_coupling;
    r.at_threshold = chi >= r.se_coupling;
    r.expanded_bandwidth = r.at_threshold ? std::numeric_limits<double>::infinity()
                                          : r.sloshing * r.sloshing / (r.se_coupling - chi);
    return r;
}

double gain_from_fraction(const DetectorConfig& cfg, double chi_over_gamma) {
    return chi_over_gamma * c * cfg.sem_transmission / (4.0 * cfg.se_length);
}

namespace {

void check_frequency(double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("sideband frequency must be non-negative");
}

// Eq. (9) prefactor hbar c / (8 omega_0 L P_c)
double strain_prefactor(const DetectorConfig& cfg, const DerivedRates& r) {
    return hbar * c / (8.0 * r.carrier * cfg.arm_length * cfg.circulating_power());
}

}  // namespace

TwoModeResponse io_twomode(const DetectorConfig& cfg, double chi, double omega) {
    check_frequency(omega);
    const DerivedRates r = derive_rates(cfg, chi);
    const double g = r.se_coupling;
    const double ws = r.sloshing;
    const std::complex<double> i(0.0, 1.0);
    const double detune = omega * omega - ws * ws;

    const std::complex<double> den = (g + chi) * omega - i * detune;
    TwoModeResponse out;
    out.noise = ((g - chi) * omega + i * detune) / den;
    out.signal = 2.0 * i * r.signal_coupling * std::sqrt(g) * ws / den;
    out.se_noise = std::sqrt(2.0 * g) * omega / den;
    out.arm = i * std::sqrt(2.0 * g) * ws / ((g - chi) * omega - i * detune);
    return out;
}

double strain_psd_twomode(const DetectorConfig& cfg, double chi, double omega) {
    check_frequency(omega);
    const DerivedRates r = derive_rates(cfg, chi);
    const double ws2 = r.sloshing * r.sloshing;
    const double detune = omega * omega - ws2;
    const double damp = (r.se_coupling - chi) * omega;
    return strain_prefactor(cfg, r) * (detune * detune + damp * damp) / (r.se_coupling * ws2);
}

double arm_field_psd(const DetectorConfig& cfg, double chi, double omega) {
    check_frequency(omega);
    const DerivedRates r = derive_rates(cfg, chi);
    const double ws2 = r.sloshing * r.sloshing;
    const double detune = omega * omega - ws2;
    const double damp = (r.se_coupling - chi) * omega;
    return 2.0 * r.se_coupling * ws2 / (damp * damp + detune * detune);
}

double qcrb_psd(const DetectorConfig& cfg, double chi, double omega) {
    const DerivedRates r = derive_rates(cfg, chi);
    // S_FF of the radiation-pressure force over the force-to-strain response.
    const double s_aa = arm_field_psd(cfg, chi, omega);
    return hbar * c / (4.0 * r.carrier * cfg.arm_length * cfg.circulating_power()) / s_aa;
}

}  // namespace qexp
