#include "qexp/detector.hpp"

#include <cmath>
#include <string>

#include "qexp/errors.hpp"

namespace qexp {
namespace {

void require_positive(const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(key, std::string(key) + " must be positive and finite");
}

void require_unit(const char* key, double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(key, std::string(key) + " must lie in [0, 1]");
}

void require_finite(const char* key, double v) {
    if (!std::isfinite(v)) throw ConfigError(key, std::string(key) + " must be finite");
}

}  // namespace

void DetectorConfig::validate() const {
    require_positive("wavelength", wavelength);
    require_positive("arm_power", arm_power);
    require_positive("arm_length", arm_length);
    require_positive("se_length", se_length);
    require_positive("mirror_mass", mirror_mass);
    require_unit("itm_transmission", itm_transmission);
    require_unit("sem_transmission", sem_transmission);
    require_unit("etm_transmission", etm_transmission);
    require_unit("se_loss", se_loss);
    require_unit("eta", detection_efficiency);
    require_finite("ext_squeeze_db", ext_squeeze);
    require_finite("ext_squeeze_angle", ext_squeeze_angle);
    require_finite("internal_squeeze", internal_squeeze);
    require_finite("crystal_angle", crystal_angle);
    require_finite("se_phase_itm", se_phase_itm);
    require_finite("se_phase_sem", se_phase_sem);
    require_finite("arm_detuning", arm_detuning);
    require_finite("homodyne_angle", homodyne_angle);
}

DetectorConfig baseline_gwo() { return DetectorConfig{}; }

DetectorConfig adv_ligo() {
    DetectorConfig c;
    c.wavelength = 1064e-9;
    c.arm_power = 840e3;
    c.arm_length = 4e3;
    c.se_length = 56.0;
    c.mirror_mass = 40.0;
    c.itm_transmission = 0.014;
    c.sem_transmission = 0.35;
    c.etm_transmission = 5e-6;
    c.se_loss = 1000e-6;
    c.detection_efficiency = 0.85;
    c.ext_squeeze = 0.0;
    return c;
}

double db_to_nepers(double db) { return db * std::log(10.0) / 20.0; }
double nepers_to_db(double q) { return q * 20.0 / std::log(10.0); }

}  // namespace qexp
