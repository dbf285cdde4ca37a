#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qexp/spectrum.hpp"

namespace qexp {

struct PopulationModel {
    double mass_mean = 1.33;     // solar masses
    double mass_spread = 0.09;
    bool spread_is_variance = false;
    double max_distance_mpc = 1000.0;
    double event_rate = 1.54;    // Mpc^-3 Myr^-1, informational
    std::size_t samples = 1000;
    std::size_t realizations = 100;
    double collapse_mass = 3.45;
    double snr_threshold = 5.0;

    double mass_sigma() const;
    void validate() const;
};

struct EosFit {
    double quality = 23.3;
    double peak_strain = 5e-22;
    double radius_km = 14.42;
    double a2 = 5.503;
    double a1 = -0.5495;
    double a0 = 0.0157;
    double scale_hz = 1.0;  // 1000 reproduces the literal fit

    void validate() const;
};

struct MergerSample {
    double m1 = 0, m2 = 0;
    double distance_mpc = 0;
    double sky_theta = 0, sky_phi = 0;
    double inclination = 0, polarization = 0;
    double phase = 0;
    double peak_hz = 0;
    double response = 1.0;
    double snr = 0;
    bool excluded = false;
};

enum class ResponseModel { quadrupole, unity };
enum class SnrMode { literal, matched_filter };

std::vector<MergerSample> sample_population(const PopulationModel& model, std::size_t n,
                                            std::uint64_t seed, std::uint64_t realization = 0,
                                            const EosFit& eos = {});

double peak_frequency(double m1, double m2, const EosFit& eos);

// Strain amplitude (1/Hz), without antenna response.
std::complex<double> waveform(double f_hz, const MergerSample& s, const EosFit& eos);

// Amplitude of the detector response for the sample's angles.
double antenna_response(const MergerSample& s);

struct SnrOptions {
    double f_min_hz = 1000.0;
    double f_max_hz = 4000.0;
    std::size_t nodes = 3001;
    SnrMode mode = SnrMode::literal;
    ResponseModel response = ResponseModel::quadrupole;
};

// Throws std::invalid_argument if the band is not covered by the spectrum.
double snr(const MergerSample& s, const Spectrum& strain_psd, const EosFit& eos,
           const SnrOptions& opt = {});

struct StudyOptions {
    SnrOptions snr;
    unsigned threads = 1;
    std::size_t histogram_bins = 40;
    double histogram_log10_min = -2.0;
    double histogram_log10_max = 3.0;
};

struct StudyResult {
    std::vector<double> loudest_snr;  // per realization
    std::vector<std::size_t> excluded;
    double detection_fraction = 0;
    std::vector<double> bin_edges;  // log10 SNR
    std::vector<std::size_t> histogram;
};

StudyResult run_study(const PopulationModel& model, const EosFit& eos, const Spectrum& strain_psd,
                      std::uint64_t seed, const StudyOptions& opt = {});

}  // namespace qexp
