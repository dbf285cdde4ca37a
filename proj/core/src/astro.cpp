#include "qexp/astro.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qexp/constants.hpp"

namespace qexp {

using constants::pi;

double PopulationModel::mass_sigma() const {
    return spread_is_variance ? std::sqrt(mass_spread) : mass_spread;
}

void PopulationModel::validate() const {
    if (!(mass_mean > 0 && mass_spread > 0 && max_distance_mpc > 0 && event_rate > 0 &&
          collapse_mass > 0 && snr_threshold > 0))
        throw std::invalid_argument("population parameters must be positive");
    if (samples == 0 || realizations == 0) throw std::invalid_argument("population sizes must be positive");
}

void EosFit::validate() const {
    if (!(quality > 0 && peak_strain > 0 && radius_km > 0 && scale_hz > 0))
        throw std::invalid_argument("EoS fit parameters must be positive");
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream: draw k of sample (seed, realization, index) depends
// on nothing else, so any evaluation order gives the same numbers.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t realization, std::uint64_t index)
        : key_(mix64(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ realization) + index)) {}

    // Uniform on (0, 1).
    double uniform() {
        const std::uint64_t x = mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    std::pair<double, double> normal_pair() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * pi * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace

double peak_frequency(double m1, double m2, const EosFit& eos) {
    if (!(m1 > 0.0 && m2 > 0.0)) throw std::domain_error("peak_frequency: masses must be positive");
    const double r = eos.radius_km;
    return eos.scale_hz * (m1 + m2) * (eos.a2 * r * r + eos.a1 * r + eos.a0);
}

double antenna_response(const MergerSample& s) {
    const double ct = std::cos(s.sky_theta);
    const double ci = std::cos(s.inclination);
    const double c2p = std::cos(2.0 * s.sky_phi), s2p = std::sin(2.0 * s.sky_phi);
    const double c2s = std::cos(2.0 * s.polarization), s2s = std::sin(2.0 * s.polarization);
    const double f_plus = 0.5 * (1.0 + ct * ct) * c2p * c2s - ct * s2p * s2s;
    const double f_cross = 0.5 * (1.0 + ct * ct) * c2p * s2s + ct * s2p * c2s;
    const double hp = f_plus * 0.5 * (1.0 + ci * ci);
    const double hx = f_cross * ci;
    return std::sqrt(hp * hp + hx * hx);
}

std::vector<MergerSample> sample_population(const PopulationModel& model, std::size_t n,
                                            std::uint64_t seed, std::uint64_t realization,
                                            const EosFit& eos) {
    model.validate();
    if (n == 0) throw std::invalid_argument("sample_population: n must be positive");
    const double sigma = model.mass_sigma();
    std::vector<MergerSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        SampleStream rng(seed, realization, i);
        MergerSample& s = out[i];
        const auto [g1, g2] = rng.normal_pair();
        s.m1 = model.mass_mean + sigma * g1;
        s.m2 = model.mass_mean + sigma * g2;
        s.distance_mpc = model.max_distance_mpc * std::cbrt(rng.uniform());
        s.sky_theta = std::acos(2.0 * rng.uniform() - 1.0);
        s.sky_phi = 2.0 * pi * rng.uniform();
        s.inclination = std::acos(2.0 * rng.uniform() - 1.0);
        s.polarization = pi * rng.uniform();
        s.phase = 2.0 * pi * rng.uniform();
        s.excluded = s.m1 + s.m2 > model.collapse_mass;
        s.peak_hz = (s.m1 > 0.0 && s.m2 > 0.0) ? peak_frequency(s.m1, s.m2, eos) : 0.0;
        s.response = antenna_response(s);
    }
    return out;
}

std::complex<double> waveform(double f_hz, const MergerSample& s, const EosFit& eos) {
    if (!(s.distance_mpc > 0.0)) throw std::domain_error("waveform: distance must be positive");
    if (!(f_hz > 0.0)) throw std::domain_error("waveform: frequency must be positive");
    const std::complex<double> i(0.0, 1.0);
    const double q = eos.quality;
    const double fp = s.peak_hz;
    const std::complex<double> num =
        2.0 * fp * q * std::cos(s.phase) - (fp - 2.0 * i * f_hz * q) * std::sin(s.phase);
    const std::complex<double> den = fp * fp - 4.0 * i * f_hz * fp * q - 4.0 * q * q * (f_hz * f_hz - fp * fp);
    return 50.0 / (pi * s.distance_mpc) * eos.peak_strain * q * num / den;
}

namespace {

struct Nodes {
    std::vector<double> f;
    std::vector<double> inv_psd;
};

Nodes make_nodes(const Spectrum& psd, const SnrOptions& opt) {
    if (!(opt.f_max_hz > opt.f_min_hz) || opt.nodes < 2)
        throw std::invalid_argument("snr: invalid integration band");
    if (psd.frequency_hz.empty() || opt.f_min_hz < psd.frequency_hz.front() ||
        opt.f_max_hz > psd.frequency_hz.back())
        throw std::invalid_argument("snr: integration band outside the noise-curve grid");
    Nodes n;
    n.f = linear_grid(opt.f_min_hz, opt.f_max_hz, opt.nodes);
    n.inv_psd.resize(n.f.size());
    for (std::size_t i = 0; i < n.f.size(); ++i) n.inv_psd[i] = 1.0 / interpolate_loglog(psd, n.f[i]);
    return n;
}

double snr_on(const MergerSample& s, const Nodes& nodes, const EosFit& eos, const SnrOptions& opt) {
    const double amp = opt.response == ResponseModel::quadrupole ? s.response : 1.0;
    const double amp2 = amp * amp;
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < nodes.f.size(); ++i) {
        const double cur = amp2 * std::norm(waveform(nodes.f[i], s, eos)) * nodes.inv_psd[i];
        if (i > 0) acc += 0.5 * (nodes.f[i] - nodes.f[i - 1]) * (cur + prev);
        prev = cur;
    }
    return opt.mode == SnrMode::literal ? acc : std::sqrt(4.0 * acc);
}

}  // namespace

double snr(const MergerSample& s, const Spectrum& strain_psd, const EosFit& eos, const SnrOptions& opt) {
    return snr_on(s, make_nodes(strain_psd, opt), eos, opt);
}

StudyResult run_study(const PopulationModel& model, const EosFit& eos, const Spectrum& strain_psd,
                      std::uint64_t seed, const StudyOptions& opt) {
    model.validate();
    eos.validate();
    strain_psd.validate();
    const Nodes nodes = make_nodes(strain_psd, opt.snr);

    StudyResult res;
    res.loudest_snr.assign(model.realizations, 0.0);
    res.excluded.assign(model.realizations, 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < model.realizations; r = next++) {
            const auto samples = sample_population(model, model.samples, seed, r, eos);
            double loudest = 0.0;
            std::size_t excluded = 0;
            for (const auto& s : samples) {
                if (s.excluded) {
                    ++excluded;
                    continue;
                }
                loudest = std::max(loudest, snr_on(s, nodes, eos, opt.snr));
            }
            res.loudest_snr[r] = loudest;
            res.excluded[r] = excluded;
        }
    };

    const unsigned threads = std::max(1u, opt.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::size_t detected = 0;
    for (double s : res.loudest_snr)
        if (s > model.snr_threshold) ++detected;
    res.detection_fraction = static_cast<double>(detected) / static_cast<double>(model.realizations);

    const std::size_t bins = std::max<std::size_t>(1, opt.histogram_bins);
    const double lo = opt.histogram_log10_min, hi = opt.histogram_log10_max;
    res.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        res.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    res.histogram.assign(bins, 0);
    for (double s : res.loudest_snr) {
        const double x = s > 0.0 ? std::log10(s) : lo;
        const double t = std::floor((x - lo) / (hi - lo) * static_cast<double>(bins));
        const auto k = static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
        ++res.histogram[k];
    }
    return res;
}

}  // namespace qexp
