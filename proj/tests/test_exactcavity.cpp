#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"
#include "qexp/errors.hpp"
#include "qexp/exactcavity.hpp"
#include "qexp/fullmodel.hpp"
#include "qexp/twomode.hpp"

using namespace qexp;
using testing_support::validity_config;

TEST(ChainParams, FromDetectorIsConsistent) {
    const ChainParams p = ChainParams::from_detector(baseline_gwo());
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(p.itm_reflectivity * p.itm_reflectivity + p.itm_transmissivity * p.itm_transmissivity, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(p.se_tuning, M_PI / 2);
}

TEST(ChainParams, RejectsNonUnitaryMirror) {
    ChainParams p = ChainParams::from_detector(baseline_gwo());
    p.sem_reflectivity += 1e-6;
    EXPECT_THROW(p.validate(), ConfigError);
    p = ChainParams::from_detector(baseline_gwo());
    p.arm_trip = 0;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(ExactTransfer, PassiveChainIsUnitary) {
    for (const DetectorConfig& c : {baseline_gwo(), adv_ligo(), validity_config()}) {
        const ChainParams p = ChainParams::from_detector(c);
        for (int k = 0; k < 2000; ++k) {
            const double w = 2 * M_PI * (0.5 + 13.0 * k);
            EXPECT_NEAR(std::abs(exact_transfer(p, w).noise), 1.0, 1e-12);
        }
    }
}

TEST(ExactTransfer, MatchesTwoModeInValidityRegime) {
    const DetectorConfig base = validity_config();
    const DerivedRates r = derive_rates(base, 0.0);
    for (double f : {0.5, 0.9}) {
        DetectorConfig c = base;
        c.internal_squeeze = gain_from_threshold_fraction(c, f);
        const ChainParams p = ChainParams::from_detector(c);
        double worst = 0;
        for (int k = 1; k <= 300; ++k) {
            const double w = 0.3 * r.sloshing * k / 300.0;
            const double exact = std::abs(exact_transfer(p, w).noise);
            const double two = std::abs(io_twomode(c, f * r.se_coupling, w).noise);
            worst = std::max(worst, std::abs(exact / two - 1));
        }
        EXPECT_LT(worst, 0.02) << "gain fraction " << f;
    }
}

TEST(ExactTransfer, StrainMatchesTwoModeInValidityRegime) {
    const DetectorConfig c = validity_config();
    const DerivedRates r = derive_rates(c, 0.0);
    const ChainParams p = ChainParams::from_detector(c);
    for (int k = 1; k <= 30; ++k) {
        const double w = 0.01 * r.sloshing * k;
        EXPECT_NEAR(strain_psd_exact(p, w) / strain_psd_twomode(c, 0.0, w), 1.0, 0.02);
    }
}

TEST(ExactTransfer, PeriodicUnderArmFreeSpectralRange) {
    DetectorConfig c = baseline_gwo();
    c.internal_squeeze = 0.03;
    ChainParams p = ChainParams::from_detector(c);
    const double shift = M_PI / p.arm_trip;
    ChainParams q = p;
    q.se_tuning = p.se_tuning - shift * p.se_trip;
    for (double f : {10.0, 200.0, 1500.0, 7000.0}) {
        const double w = 2 * M_PI * f;
        const auto a = exact_transfer(p, w);
        const auto b = exact_transfer(q, w + shift);
        EXPECT_NEAR(std::abs(a.noise - b.noise), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(a.signal) / std::abs(b.signal), 1.0, 1e-9);
    }
}

TEST(ExactTransfer, SeModeResonatesAtSloshingFrequency) {
    const DetectorConfig c = validity_config();
    const double ws = derive_rates(c, 0.0).sloshing;
    const ChainParams p = ChainParams::from_detector(c);
    double best_w = 0, best = 0;
    for (int k = 1; k <= 3000; ++k) {
        const double w = ws * k / 1000.0;
        const double m = std::abs(se_field_transfer(p, w));
        if (m > best) {
            best = m;
            best_w = w;
        }
    }
    EXPECT_NEAR(best_w / ws, 1.0, 0.05);
}

TEST(ExactTransfer, InstabilityFlag) {
    DetectorConfig c = baseline_gwo();
    c.se_loss = 0;
    c.internal_squeeze = 0.99 * threshold_gain(c);
    EXPECT_FALSE(exact_transfer(ChainParams::from_detector(c), 100.0).unstable);
    c.internal_squeeze = 1.01 * threshold_gain(c);
    EXPECT_TRUE(exact_transfer(ChainParams::from_detector(c), 100.0).unstable);
}

TEST(ExactTransfer, RejectsNegativeFrequency) {
    EXPECT_THROW(exact_transfer(ChainParams::from_detector(baseline_gwo()), -1.0), std::domain_error);
}

TEST(ExactTransfer, ArmResponseVanishesAtFreeSpectralRange) {
    const ChainParams p = ChainParams::from_detector(adv_ligo());
    const double fsr = M_PI / p.arm_trip;
    EXPECT_GT(strain_psd_exact(p, fsr) / strain_psd_exact(p, 0.999 * fsr), 1e20);
}
