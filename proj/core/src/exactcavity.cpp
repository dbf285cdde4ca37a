#include "qexp/exactcavity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qexp/errors.hpp"

namespace qexp {

ChainParams ChainParams::from_detector(const DetectorConfig& cfg) {
    cfg.validate();
    ChainParams p;
    p.itm_reflectivity = std::sqrt(1.0 - cfg.itm_transmission);
    p.itm_transmissivity = std::sqrt(cfg.itm_transmission);
    p.sem_reflectivity = std::sqrt(1.0 - cfg.sem_transmission);
    p.sem_transmissivity = std::sqrt(cfg.sem_transmission);
    p.gain = cfg.internal_squeeze;
    p.se_tuning = cfg.se_phase_itm + cfg.se_phase_sem;
    p.arm_trip = cfg.arm_trip_time();
    p.se_trip = cfg.se_trip_time();
    p.wavenumber = cfg.wavenumber();
    p.amplitude = std::sqrt(2.0 * cfg.circulating_power() / (constants::hbar * cfg.carrier_frequency()));
    return p;
}

void ChainParams::validate() const {
    auto mirror = [](const char* key, double r, double t) {
        if (!(r >= 0.0 && t >= 0.0) || std::abs(r * r + t * t - 1.0) > 1e-12)
            throw ConfigError(key, std::string(key) + ": R^2 + T^2 must equal 1");
    };
    mirror("itm", itm_reflectivity, itm_transmissivity);
    mirror("sem", sem_reflectivity, sem_transmissivity);
    if (!(arm_trip > 0.0)) throw ConfigError("arm_trip", "arm trip time must be positive");
    if (!(se_trip > 0.0)) throw ConfigError("se_trip", "SE trip time must be positive");
    if (!std::isfinite(gain)) throw ConfigError("gain", "gain must be finite");
}

namespace {

struct Chain {
    std::complex<double> se_round;   // e^{2i phi} e^{2i omega tau_SE}
    std::complex<double> arm_round;  // e^{2i omega tau_arm}
    std::complex<double> num;
    std::complex<double> den;
};

Chain chain(const ChainParams& p, double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("sideband frequency must be non-negative");
    const std::complex<double> i(0.0, 1.0);
    const double ri = p.itm_reflectivity;
    const double rs = p.sem_reflectivity;
    const double g2 = std::exp(2.0 * p.gain);

    Chain ch;
    ch.se_round = std::exp(i * (2.0 * p.se_tuning + 2.0 * omega * p.se_trip));
    ch.arm_round = std::exp(i * (2.0 * omega * p.arm_trip));
    const auto a = ch.arm_round - ri;
    const auto b = ch.arm_round * ri - 1.0;
    ch.num = ch.se_round * a + g2 * rs * b;
    ch.den = g2 * b + ch.se_round * a * rs;
    if (ch.den == 0.0) throw std::domain_error("cavity chain denominator vanishes");
    return ch;
}

}  // namespace

ExactTransfer exact_transfer(const ChainParams& p, double omega) {
    const Chain ch = chain(p, omega);
    const std::complex<double> i(0.0, 1.0);

    ExactTransfer out;
    out.noise = -ch.num / ch.den;
    out.signal = 2.0 * i * p.wavenumber * p.amplitude *
                 std::exp(i * (p.se_tuning + omega * p.se_trip + omega * p.arm_trip)) *
                 std::exp(p.gain) * p.itm_transmissivity * p.sem_transmissivity / ch.den;
    out.unstable = p.sem_reflectivity * std::exp(2.0 * std::abs(p.gain)) >= 1.0;
    return out;
}

std::complex<double> se_field_transfer(const ChainParams& p, double omega) {
    const ExactTransfer t = exact_transfer(p, omega);
    if (p.sem_transmissivity == 0.0) return 0.0;
    return (t.noise + p.sem_reflectivity) / p.sem_transmissivity;
}

double strain_psd_exact(const ChainParams& p, double omega) {
    const ExactTransfer t = exact_transfer(p, omega);
    const double length = p.arm_trip * constants::c;
    const double x = omega * p.arm_trip;
    const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
    return std::norm(t.noise) / std::norm(t.signal) / (length * length) / (sinc * sinc);
}

}  // namespace qexp
