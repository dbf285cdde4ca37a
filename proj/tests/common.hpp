#pragma once

#include "qexp/detector.hpp"

namespace testing_support {

// Strips every loss channel and external squeezing.
inline qexp::DetectorConfig lossless(qexp::DetectorConfig c) {
    c.se_loss = 0.0;
    c.etm_transmission = 0.0;
    c.detection_efficiency = 1.0;
    c.ext_squeeze = 0.0;
    return c;
}

// Short arm with small mirror transmissions, where the two-mode
// description holds: T_ITM well below L_SE / L_arm and T_SE << 1.
inline qexp::DetectorConfig validity_config() {
    qexp::DetectorConfig c = lossless(qexp::adv_ligo());
    c.itm_transmission = 0.0014;
    c.sem_transmission = 0.02;
    c.mirror_mass = 1e9;
    return c;
}

}  // namespace testing_support
