#pragma once

#include "qexp/constants.hpp"

namespace qexp {

// Effective two-cavity detector. Lengths in m, powers in W, rates in rad/s,
// transmissions and losses are power fractions. Defaults equal the
// baseline GWO design.
struct DetectorConfig {
    double wavelength = 1550e-9;
    double arm_power = 4e6;  // per Michelson arm, P_c = 2 P_arm
    double arm_length = 20e3;
    double se_length = 56.0;
    double mirror_mass = 200.0;
    double itm_transmission = 0.07;
    double sem_transmission = 0.35;
    double etm_transmission = 5e-6;
    double se_loss = 1500e-6;             // single trip
    double detection_efficiency = 0.99;   // eta
    double ext_squeeze = 1.1512925464970229;  // nepers, 10 dB
    double ext_squeeze_angle = 0.0;
    double internal_squeeze = 0.0;  // single pass, nepers
    double crystal_angle = 0.0;
    double se_phase_itm = constants::pi / 2;  // crystal to ITM
    double se_phase_sem = 0.0;                // SE mirror to crystal
    double arm_detuning = 0.0;
    double homodyne_angle = constants::pi / 2;

    double carrier_frequency() const { return constants::two_pi * constants::c / wavelength; }
    double wavenumber() const { return constants::two_pi / wavelength; }
    double circulating_power() const { return 2.0 * arm_power; }
    double arm_trip_time() const { return arm_length / constants::c; }
    double se_trip_time() const { return se_length / constants::c; }

    // Throws ConfigError naming the first offending field.
    void validate() const;
};

DetectorConfig baseline_gwo();
DetectorConfig adv_ligo();

double db_to_nepers(double db);
double nepers_to_db(double q);

}  // namespace qexp
