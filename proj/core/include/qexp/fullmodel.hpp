#pragma once

#include <array>
#include <vector>

#include "qexp/detector.hpp"
#include "qexp/quad.hpp"

namespace qexp {

enum class FilterPlacement { input, output };

// Lossless detuned filter cavity; rates in rad/s.
struct FilterCavity {
    double bandwidth = 0;
    double detuning = 0;
    FilterPlacement placement = FilterPlacement::input;
};

struct ReadoutConfig {
    double homodyne_angle = constants::pi / 2;
    double efficiency = 1.0;
    double ext_squeeze = 0.0;
    double ext_squeeze_angle = 0.0;
    std::vector<FilterCavity> filters;

    static ReadoutConfig from(const DetectorConfig& cfg);
    void validate() const;
};

struct SeCavityResponse {
    QuadMatrix to_itm;  // single pass SE mirror -> ITM
    QuadMatrix to_sem;  // single pass ITM -> SE mirror
    QuadMatrix resolvent_b, resolvent_d;
    QuadMatrix reflect_b, reflect_d;
    QuadMatrix transmit_b, transmit_d;
    QuadMatrix loss_b1, loss_b2, loss_d1, loss_d2;
    bool singular = false;
};

struct ArmCavityResponse {
    QuadMatrix resolvent_c, resolvent_e;
    QuadMatrix detuning;  // O(delta tau_arm)
    cplx trip_phase;      // exp(i omega tau_arm)
    bool singular = false;
};

struct PlantResponse {
    SeCavityResponse se;
    ArmCavityResponse arm;
    QuadMatrix reflection;  // input vacuum
    QuadMatrix end_port;    // ETM transmission vacuum
    QuadMatrix loss1;       // SE internal loss, first location
    QuadMatrix loss2;       // SE internal loss, second location
    QuadVector displacement;  // output per metre
    bool unstable = false;
};

// Single-pass gain at which the anti-squeezed SE loop reaches threshold.
double threshold_gain(const DetectorConfig& cfg);
double gain_from_threshold_fraction(const DetectorConfig& cfg, double fraction);

SeCavityResponse se_cavity(const DetectorConfig& cfg, double omega);
ArmCavityResponse arm_cavity(const DetectorConfig& cfg, double omega, const SeCavityResponse& se);
PlantResponse plant_output(const DetectorConfig& cfg, double omega);

// Carrier amplitude vector in the arm.
QuadVector carrier_vector(const DetectorConfig& cfg);

enum class NoisePort : int {
    input_vacuum = 0,
    se_internal_loss_1,
    se_internal_loss_2,
    arm_loss,
    readout_loss,
};
inline constexpr int kNoisePortCount = 5;
const char* port_name(NoisePort p);

struct BackAction {
    cplx spring{0};            // K, N/m
    cplx free_susceptibility{0};
    cplx effective_susceptibility{0};
    double force_psd = 0;      // S_FF
    cplx cross_psd{0};         // S_xF
};

BackAction back_action(const DetectorConfig& cfg, double omega);
BackAction back_action(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega);

struct HomodyneSpectra {
    double displacement = 0;  // S_x
    double shot = 0;          // S_xx
    cplx cross{0};            // S_xF
    double force = 0;         // S_FF
    cplx effective_susceptibility{0};
    std::array<double, kNoisePortCount> per_port{};  // contributions to S_x
    bool unstable = false;
};

// Throws DegenerateReadout when the homodyne is blind to the signal.
HomodyneSpectra homodyne_psd(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega);

// Factor turning S_x into strain PSD (includes the arm sinc response).
double strain_scale(const DetectorConfig& cfg, double omega, cplx effective_susceptibility);

double strain_psd_full(const DetectorConfig& cfg, const ReadoutConfig& readout, double omega);

// 2 hbar / (m omega^2 L^2)
double sql_psd(const DetectorConfig& cfg, double omega);

double filter_angle(double bandwidth, double detuning, double omega);

}  // namespace qexp
