// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
//   qexp_acceptance [--criterion N] [--cli path/to/qexp]

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "common.hpp"
#include "qexp/astro.hpp"
#include "qexp/budget.hpp"
#include "qexp/exactcavity.hpp"
#include "qexp/fullmodel.hpp"
#include "qexp/spectrum.hpp"
#include "qexp/twomode.hpp"

using namespace qexp;
using testing_support::lossless;

namespace {

constexpr double kTwoPi = 2 * M_PI;

std::string cli_path;

struct Outcome {
    bool pass = false;
    std::string detail;
};

void info(const std::string& s) { std::printf("  info: %s\n", s.c_str()); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a / b - 1); }

// 1 ---------------------------------------------------------------------------
Outcome qcrb_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        DetectorConfig c = baseline_gwo();
        c.wavelength = 1e-6 * (0.8 + 1.2 * u(rng));
        c.arm_power = 1e5 * std::pow(10.0, 2 * u(rng));
        c.arm_length = 1e3 * (1 + 39 * u(rng));
        c.se_length = 5 + 100 * u(rng);
        c.itm_transmission = 0.001 + 0.2 * u(rng);
        c.sem_transmission = 0.01 + 0.8 * u(rng);
        const DerivedRates r = derive_rates(c, 0);
        const double chi = 0.999 * u(rng) * r.se_coupling;
        for (int j = 0; j < 100; ++j) {
            const double w = r.sloshing * std::pow(10.0, -3 + 4 * j / 99.0);
            worst = std::max(worst, rel(qcrb_psd(c, chi, w), strain_psd_twomode(c, chi, w)));
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-12 && dt < 1, fmt("max relative deviation %.2e (tol 1e-12), %.3f s (limit 1 s)", worst, dt)};
}

// 2 ---------------------------------------------------------------------------
// Half-power angular frequency of a low-pass power response.
double half_power(const std::function<double(double)>& power, double w_start) {
    const double p0 = power(w_start);
    auto below = [&](double w) { return power(w) < 0.5 * p0; };
    double lo = w_start, hi = w_start;
    while (!below(hi)) hi *= 1.5;
    for (int k = 0; k < 200 && hi - lo > 1e-13 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Signal transfer referred to the output noise, |T_sig / R|^2, which is the
// response that sets the detection bandwidth.
double detection_bandwidth(const DetectorConfig& c, double chi) {
    return half_power(
        [&](double w) {
            const TwoModeResponse t = io_twomode(c, chi, w);
            return std::norm(t.signal / t.noise);
        },
        1e-9 * derive_rates(c, 0).sloshing);
}

double raw_signal_bandwidth(const DetectorConfig& c, double chi) {
    return half_power([&](double w) { return std::norm(io_twomode(c, chi, w).signal); },
                      1e-9 * derive_rates(c, 0).sloshing);
}

double expansion_error(const DetectorConfig& c, double fraction) {
    const DerivedRates r0 = derive_rates(c, 0);
    const double chi = fraction * r0.se_coupling;
    const double expected = r0.baseline_bandwidth * r0.se_coupling / (r0.se_coupling - chi);
    return rel(detection_bandwidth(c, chi), expected);
}

// Resonant SE cavity far wider than the sloshing frequency, where the
// signal transfer is a single pole.
DetectorConfig broadband_config() {
    DetectorConfig c = adv_ligo();
    c.arm_length = 4000;
    c.se_length = 0.25;
    c.itm_transmission = 2.5e-4;
    c.sem_transmission = 0.5;
    return c;
}

Outcome bandwidth_expansion() {
    const auto t0 = std::chrono::steady_clock::now();
    const DetectorConfig c = broadband_config();
    const DerivedRates r = derive_rates(c, 0);
    info(fmt("single-pole detector: gamma / omega_s = %.0f", r.se_coupling / r.sloshing));
    double worst = 0;
    for (double f : {0.0, 0.5, 0.9, 0.99}) {
        const double e = expansion_error(c, f);
        const double chi = f * r.se_coupling;
        info(fmt("chi/gamma = %.2f: deviation %.3e; bare |T_sig|^2 half-power / (omega_s^2/(gamma+chi)) = %.6f", f, e,
                 raw_signal_bandwidth(c, chi) / (r.sloshing * r.sloshing / (r.se_coupling + chi))));
        worst = std::max(worst, e);
    }
    const DetectorConfig t = baseline_gwo();
    const DerivedRates rt = derive_rates(t, 0);
    for (double f : {0.0, 0.5, 0.9, 0.99})
        info(fmt("baseline preset (gamma / omega_s = %.2f), chi/gamma = %.2f: deviation %.1f%%",
                 rt.se_coupling / rt.sloshing, f, 100 * expansion_error(t, f)));
    const double dt = seconds_since(t0);
    return {worst <= 0.01 && dt < 1, fmt("max half-power deviation %.3e (tol 1e-2), %.3f s", worst, dt)};
}

// 3 ---------------------------------------------------------------------------
Outcome threshold_flatness() {
    const auto t0 = std::chrono::steady_clock::now();
    const DetectorConfig c = baseline_gwo();
    const DerivedRates r = derive_rates(c, 0);
    const double chi = 0.999 * r.se_coupling;
    double lo = INFINITY, hi = 0;
    for (int k = 0; k <= 2000; ++k) {
        const double w = r.sloshing * (0.01 + 0.29 * k / 2000.0);
        const double s = strain_psd_twomode(c, chi, w);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double variation = hi / lo - 1;
    info(fmt("S_h from %.4e to %.4e 1/Hz over [0.01, 0.3] omega_s", lo, hi));
    info(fmt("the (omega_s^2 - Omega^2)^2 term alone varies by (1 - 0.3^2)^-2 - 1 = %.1f%%",
             100 * (std::pow(1 - 0.09, -2) - 1)));
    const double dt = seconds_since(t0);
    return {variation < 0.01 && dt < 1, fmt("variation %.2f%% (tol 1%%), %.3f s", 100 * variation, dt)};
}

// 4 ---------------------------------------------------------------------------
Outcome conservation() {
    double worst_exact = 0;
    for (const DetectorConfig& c : {baseline_gwo(), adv_ligo()}) {
        const ChainParams p = ChainParams::from_detector(c);
        for (int k = 0; k < 10000; ++k) {
            const double w = kTwoPi * (1.0 + 2.0 * k);
            worst_exact = std::max(worst_exact, std::abs(std::abs(exact_transfer(p, w).noise) - 1));
        }
    }
    double worst_full = 0;
    DetectorConfig c = baseline_gwo();
    c.etm_transmission = 100e-6;
    c.arm_detuning = kTwoPi * 4;
    c.se_phase_sem = 0.05;
    for (const double f : log_grid(1, 2e4, 2000)) {
        const PlantResponse p = plant_output(c, kTwoPi * f);
        const QuadMatrix sum = p.reflection * p.reflection.adjoint() + p.loss1 * p.loss1.adjoint() +
                               p.loss2 * p.loss2.adjoint() + p.end_port * p.end_port.adjoint();
        worst_full = std::max(worst_full, (sum - QuadMatrix::identity()).frobenius());
    }
    return {worst_exact <= 1e-12 && worst_full <= 1e-10,
            fmt("exact chain ||R_a|-1| max %.2e (tol 1e-12); full plant |sum - I| max %.2e (tol 1e-10)", worst_exact,
                worst_full)};
}

// 5 ---------------------------------------------------------------------------
double full_vs_twomode(const DetectorConfig& c) {
    const double ws = derive_rates(c, 0).sloshing;
    const ReadoutConfig r = ReadoutConfig::from(c);
    double worst = 0;
    for (int k = 1; k <= 300; ++k) {
        const double w = 0.3 * ws * k / 300.0;
        worst = std::max(worst, rel(strain_psd_full(c, r, w), strain_psd_twomode(c, 0, w)));
    }
    return worst;
}

Outcome cross_model() {
    const auto t0 = std::chrono::steady_clock::now();
    DetectorConfig c = lossless(adv_ligo());
    c.mirror_mass = 1e9;
    const double two = full_vs_twomode(c);

    const ChainParams chain = ChainParams::from_detector(c);
    const ReadoutConfig r = ReadoutConfig::from(c);
    double exact = 0;
    for (const double f : log_grid(1, 1e4, 1000))
        exact = std::max(exact, rel(strain_psd_full(c, r, kTwoPi * f), strain_psd_exact(chain, kTwoPi * f)));
    const double dt = seconds_since(t0);

    const DerivedRates rates = derive_rates(c, 0);
    info(fmt("preset: T_ITM / (L_SE / L_arm) = %.2f, gamma / omega_s = %.2f, omega_s tau_arm = %.2f",
             c.itm_transmission / (c.se_length / c.arm_length), rates.se_coupling / rates.sloshing,
             rates.sloshing * c.arm_trip_time()));
    info(fmt("small-transmission detector (T_ITM 0.0014, T_SE 0.02): full vs twomode %.2f%%",
             100 * full_vs_twomode(testing_support::validity_config())));
    return {two <= 0.02 && exact <= 1e-6 && dt < 10,
            fmt("full vs twomode %.2f%% (tol 2%%); full vs exact %.2e (tol 1e-6); %.2f s", 100 * two, exact, dt)};
}

// 6 ---------------------------------------------------------------------------
Outcome caves() {
    const double a = caves_snr(0.5, 10, 0), ea = 0.5 / (0.5 + 0.5 * std::exp(-20.0));
    const double b = caves_snr(0.5, 1, 30);
    const double da = std::abs(a - ea), db = rel(b, std::exp(2.0));
    return {da <= 1e-9 && db <= 1e-6, fmt("|SNR - eta/(1-eta+eta e^-20)| = %.2e (tol 1e-9); q=30 vs e^2: %.2e (tol 1e-6)", da, db)};
}

// 7 ---------------------------------------------------------------------------
double squeeze_ratio_error(DetectorConfig c, const std::vector<double>& grid, double* low_ratio = nullptr) {
    ReadoutConfig r = ReadoutConfig::from(c);
    r.homodyne_angle = M_PI / 2;
    r.ext_squeeze = 0;
    ReadoutConfig sq = r;
    sq.ext_squeeze = db_to_nepers(10);
    sq.ext_squeeze_angle = 0;
    double worst = 0;
    for (double f : grid) {
        const double ratio = strain_psd_full(c, sq, kTwoPi * f) / strain_psd_full(c, r, kTwoPi * f);
        if (low_ratio && f == grid.front()) *low_ratio = ratio;
        worst = std::max(worst, rel(ratio, 0.1));
    }
    return worst;
}

Outcome external_squeezing() {
    DetectorConfig c = lossless(baseline_gwo());
    c.internal_squeeze = 0;
    c.mirror_mass = 1e20;  // shot-noise-limited plant
    const auto grid = log_grid(1, 1e4, 1000);
    const double worst = squeeze_ratio_error(c, grid);
    double low = 0;
    DetectorConfig heavy = lossless(baseline_gwo());
    squeeze_ratio_error(heavy, grid, &low);
    info(fmt("with the 200 kg mirror, S_h ratio at 1 Hz is %.2f (radiation pressure grows by 10 dB)", low));
    return {worst <= 1e-10, fmt("max |ratio / 0.1 - 1| = %.2e (tol 1e-10)", worst)};
}

// 8 ---------------------------------------------------------------------------
Outcome variational_readout() {
    DetectorConfig c = lossless(baseline_gwo());
    const ReadoutConfig fixed = ReadoutConfig::from(c);

    // Shot / radiation-pressure crossover of the fixed readout.
    auto rp_dominates = [&](double f) {
        const HomodyneSpectra s = homodyne_psd(c, fixed, kTwoPi * f);
        return std::norm(s.effective_susceptibility) * s.force > s.shot;
    };
    double lo = 0.1, hi = 1e4;
    if (!rp_dominates(lo) || rp_dominates(hi)) return {false, "no radiation-pressure-dominated band found"};
    for (int k = 0; k < 100; ++k) {
        const double mid = std::sqrt(lo * hi);
        (rp_dominates(mid) ? lo : hi) = mid;
    }
    const double f_sql = lo;

    ReadoutConfig filtered = fixed;
    const double g = kTwoPi * f_sql / std::sqrt(2.0);
    filtered.filters.push_back({g, g, FilterPlacement::output});

    std::size_t checked = 0, better = 0;
    double worst = 0;
    for (const double f : log_grid(1, 1e4, 400)) {
        if (!rp_dominates(f)) continue;
        ++checked;
        const double a = strain_psd_full(c, filtered, kTwoPi * f);
        const double b = strain_psd_full(c, fixed, kTwoPi * f);
        if (a < b) ++better;
        worst = std::max(worst, a / b);
    }
    info(fmt("crossover %.1f Hz; filter bandwidth = detuning = %.1f Hz", f_sql, g / kTwoPi));
    return {checked > 0 && better == checked,
            fmt("filtered below fixed readout at %zu of %zu radiation-pressure-dominated points (max ratio %.3g)",
                better, checked, worst)};
}

// 9 ---------------------------------------------------------------------------
Outcome budget_closure() {
    DetectorConfig c = baseline_gwo();
    c.etm_transmission = 100e-6;
    const auto grid = log_grid(1, 1e4, 500);
    const NoiseBudget b = decompose(c, ReadoutConfig::from(c), grid);
    double worst = 0;
    std::size_t ordered = 0, above = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0;
        for (const auto& col : b.contribution) sum += col[i];
        worst = std::max(worst, rel(sum, b.total[i]));
        if (grid[i] <= 1000) continue;
        ++above;
        const double arm = b[NoisePort::arm_loss][i];
        const double internal = b[NoisePort::se_internal_loss_1][i] + b[NoisePort::se_internal_loss_2][i];
        if (b[NoisePort::readout_loss][i] > arm && internal > arm) ++ordered;
    }
    return {worst <= 1e-10 && ordered == above,
            fmt("closure %.2e (tol 1e-10); detection and SE-internal loss above arm loss at %zu of %zu points > 1 kHz",
                worst, ordered, above)};
}

// 10 --------------------------------------------------------------------------
Spectrum band_curve(const DetectorConfig& c) {
    Spectrum s;
    s.frequency_hz = linear_grid(1000, 4000, 601);
    const ReadoutConfig r = ReadoutConfig::from(c);
    for (double f : s.frequency_hz) s.value.push_back(strain_psd_full(c, r, kTwoPi * f));
    return s;
}

DetectorConfig expander_at_loss(double total_loss, double* fraction) {
    DetectorConfig c = with_total_loss(baseline_gwo(), total_loss);
    c.ext_squeeze = 0;
    const GainOptimum g = optimize_gain(c, ReadoutConfig::from(c));
    c.internal_squeeze = gain_from_threshold_fraction(c, g.fraction);
    *fraction = g.fraction;
    return c;
}

Outcome monte_carlo() {
    const auto t0 = std::chrono::steady_clock::now();
    const PopulationModel pop;
    const EosFit eos;
    StudyOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t seed = 20241015;

    DetectorConfig base = baseline_gwo();
    base.ext_squeeze = 0;
    double g3 = 0, g05 = 0;
    const DetectorConfig qe3 = expander_at_loss(0.03, &g3);
    const DetectorConfig qe05 = expander_at_loss(0.005, &g05);

    const StudyResult rb = run_study(pop, eos, band_curve(base), seed, opt);
    const StudyResult r3 = run_study(pop, eos, band_curve(qe3), seed, opt);
    const StudyResult r05 = run_study(pop, eos, band_curve(qe05), seed, opt);

    StudyOptions serial = opt;
    serial.threads = 1;
    const bool repeatable = run_study(pop, eos, band_curve(qe3), seed, serial).loudest_snr == r3.loudest_snr;
    const double dt = seconds_since(t0);

    auto median = [](std::vector<double> v) {
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        return v[v.size() / 2];
    };
    info(fmt("gain fractions: %.3f at 3%% loss, %.3f at 0.5%% loss", g3, g05));
    info(fmt("median loudest SNR: baseline %.2f, QE@3%% %.2f, QE@0.5%% %.2f", median(rb.loudest_snr),
             median(r3.loudest_snr), median(r05.loudest_snr)));
    const double b = rb.detection_fraction, q3 = r3.detection_fraction, q05 = r05.detection_fraction;
    const bool ok = b < q3 && q3 < q05 && q05 > 0.9 && b >= 0.02 && b <= 0.25 && repeatable && dt < 120;
    return {ok, fmt("detection fractions baseline %.2f, QE@3%% %.2f, QE@0.5%% %.2f; thread-independent %s; %.1f s", b, q3,
                    q05, repeatable ? "yes" : "no", dt)};
}

// 11 --------------------------------------------------------------------------
std::string capture(const std::string& cmd, int* status) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        *status = -1;
        return out;
    }
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    *status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

Outcome determinism() {
    if (cli_path.empty()) return {false, "no --cli path given"};
    const std::string base = cli_path + " montecarlo --preset baseline_gwo --seed 7 --set realizations=20 --set samples=300";
    std::vector<std::string> outs;
    for (const char* t : {"1", "2", "4", "8"}) {
        int status = 0;
        outs.push_back(capture(base + " --threads " + t, &status));
        if (status != 0) return {false, fmt("montecarlo exited with %d", status)};
    }
    bool same = !outs[0].empty();
    for (const auto& o : outs) same = same && o == outs[0];
    return {same, fmt("outputs for 1, 2, 4, 8 threads %s (%zu bytes)", same ? "byte-identical" : "differ",
                      outs[0].size())};
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run one criterion (1-11)")->check(CLI::Range(1, 11));
    app.add_option("--cli", cli_path, "Path to the qexp executable");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all = {
        {"QCRB identity", qcrb_identity},
        {"bandwidth expansion", bandwidth_expansion},
        {"threshold flatness", threshold_flatness},
        {"unitarity / conservation", conservation},
        {"cross-model equivalence", cross_model},
        {"Caves limits", caves},
        {"external squeezing scaling", external_squeezing},
        {"variational readout", variational_readout},
        {"budget closure", budget_closure},
        {"Monte-Carlo reproduction", monte_carlo},
        {"determinism", determinism},
    };

    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        std::printf("criterion %zu (%s)\n", i + 1, all[i].title);
        std::fflush(stdout);
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
        std::fflush(stdout);
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
