#include "qexp/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qexp/budget.hpp"
#include "qexp/errors.hpp"
#include "qexp/exactcavity.hpp"
#include "qexp/twomode.hpp"

namespace qexp::cli {
namespace {

using constants::two_pi;

std::vector<double> frequencies(const RunConfig& rc) {
    return log_grid(rc.grid.f_min_hz, rc.grid.f_max_hz, rc.grid.points);
}

std::string psd_name(const RunConfig& rc, const std::string& base) {
    return base + (rc.asd ? "_asd" : "_psd");
}

std::vector<double> maybe_asd(const RunConfig& rc, std::vector<double> v) {
    if (rc.asd)
        for (double& x : v) x = std::sqrt(x);
    return v;
}

// Applies the optimal internal gain when requested and records it.
RunConfig with_resolved_gain(const RunConfig& rc, nlohmann::json& meta) {
    if (!rc.optimize) return rc;
    RunConfig out = rc;
    const GainOptimum opt = optimize_gain(rc.detector, rc.readout, rc.band);
    out.chi_over_gamma = opt.fraction;
    out.detector.internal_squeeze = gain_from_threshold_fraction(out.detector, opt.fraction);
    meta["optimized_gain"] = {{"chi_over_gamma", opt.fraction},
                              {"improvement_db", opt.improvement_db},
                              {"flat", opt.flat}};
    return out;
}

}  // namespace

Spectrum model_spectrum(const RunConfig& rc, std::vector<double>* unstable) {
    Spectrum s;
    s.frequency_hz = frequencies(rc);
    s.value.resize(s.size());
    if (unstable) unstable->assign(s.size(), 0.0);

    switch (rc.model) {
        case Model::twomode: {
            const double chi = gain_from_fraction(rc.detector, rc.chi_over_gamma);
            const bool flag = derive_rates(rc.detector, chi).at_threshold;
            for (std::size_t i = 0; i < s.size(); ++i) {
                s.value[i] = strain_psd_twomode(rc.detector, chi, two_pi * s.frequency_hz[i]);
                if (unstable) (*unstable)[i] = flag;
            }
            break;
        }
        case Model::exact: {
            const ChainParams p = ChainParams::from_detector(rc.detector);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double w = two_pi * s.frequency_hz[i];
                s.value[i] = strain_psd_exact(p, w);
                if (unstable) (*unstable)[i] = exact_transfer(p, w).unstable;
            }
            break;
        }
        case Model::full: {
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double w = two_pi * s.frequency_hz[i];
                const HomodyneSpectra h = homodyne_psd(rc.detector, rc.readout, w);
                s.value[i] = h.displacement * strain_scale(rc.detector, w, h.effective_susceptibility);
                if (unstable) (*unstable)[i] = h.unstable;
            }
            break;
        }
    }
    return s;
}

Table run_spectrum(const RunConfig& rc_in) {
    Table t;
    const RunConfig rc = with_resolved_gain(rc_in, t.meta);
    std::vector<double> unstable;
    Spectrum s = model_spectrum(rc, &unstable);
    t.add("frequency_hz", s.frequency_hz);
    t.add(psd_name(rc, "strain"), maybe_asd(rc, s.value));
    t.add("unstable", unstable);
    t.meta["model"] = model_name(rc.model);
    return t;
}

Table run_qcrb(const RunConfig& rc) {
    const std::vector<double> f = frequencies(rc);
    const double chi = gain_from_fraction(rc.detector, rc.chi_over_gamma);
    std::vector<double> bound(f.size()), twomode(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        bound[i] = qcrb_psd(rc.detector, chi, two_pi * f[i]);
        twomode[i] = strain_psd_twomode(rc.detector, chi, two_pi * f[i]);
    }
    Table t;
    t.add("frequency_hz", f);
    t.add(psd_name(rc, "qcrb"), maybe_asd(rc, bound));
    t.add(psd_name(rc, "strain"), maybe_asd(rc, twomode));
    return t;
}

Table run_budget(const RunConfig& rc_in) {
    Table t;
    const RunConfig rc = with_resolved_gain(rc_in, t.meta);
    const NoiseBudget b = decompose(rc.detector, rc.readout, frequencies(rc));
    t.add("frequency_hz", b.frequency_hz);
    t.add(psd_name(rc, "total"), maybe_asd(rc, b.total));
    for (int p = 0; p < kNoisePortCount; ++p)
        t.add(psd_name(rc, port_name(static_cast<NoisePort>(p))), maybe_asd(rc, b.contribution[p]));
    return t;
}

Table run_bandwidth(const RunConfig& rc) {
    const double chi = gain_from_fraction(rc.detector, rc.chi_over_gamma);
    const DerivedRates r = derive_rates(rc.detector, chi);
    Table t;
    t.add("chi_over_gamma", {rc.chi_over_gamma});
    t.add("sloshing_hz", {r.sloshing / two_pi});
    t.add("se_coupling_hz", {r.se_coupling / two_pi});
    t.add("baseline_bandwidth_hz", {r.baseline_bandwidth / two_pi});
    t.add("expanded_bandwidth_hz", {r.expanded_bandwidth / two_pi});
    t.add("at_threshold", {r.at_threshold ? 1.0 : 0.0});
    // At threshold the bandwidth is reported as +inf by design.
    t.allow_infinite = r.at_threshold;
    return t;
}

Table run_sweep(const RunConfig& rc) {
    auto grid = [](double lo, double hi, std::size_t n) {
        if (n == 1 || hi == lo) return std::vector<double>{lo};
        return linear_grid(lo, hi, n);
    };
    const auto losses = grid(rc.sweep.loss_min, rc.sweep.loss_max, rc.sweep.loss_points);
    const auto gains = grid(rc.sweep.gain_min, rc.sweep.gain_max, rc.sweep.gain_points);
    const BenefitMap m = benefit_map(rc.detector, losses, rc.detector.ext_squeeze, gains, rc.band, rc.loss_share);

    Table t;
    std::vector<double> loss_col, gain_col;
    for (double l : losses)
        for (double g : gains) {
            loss_col.push_back(l);
            gain_col.push_back(g);
        }
    t.add("total_loss", loss_col);
    t.add("gain_fraction", gain_col);
    t.add("improvement_db", m.improvement_db);
    t.meta["best_gain_fraction"] = m.best_gain_fraction;
    t.meta["best_improvement_db"] = m.best_improvement_db;
    return t;
}

Table run_montecarlo(const RunConfig& rc_in, std::uint64_t seed) {
    Table t;
    const RunConfig rc = with_resolved_gain(rc_in, t.meta);
    Spectrum curve;
    if (!rc.noise_curve.empty()) {
        curve = read_noise_curve(rc.noise_curve);
        t.meta["noise_curve"] = rc.noise_curve;
    } else {
        curve = model_spectrum(rc);
        t.meta["noise_curve"] = std::string("model:") + model_name(rc.model);
    }
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (!std::isfinite(curve.value[i]) || !(curve.value[i] > 0.0))
            throw NumericError("noise curve is not a positive finite PSD", curve.frequency_hz[i]);

    StudyOptions opt;
    opt.snr = rc.snr;
    opt.threads = rc.threads;
    const StudyResult r = run_study(rc.population, rc.eos, curve, seed, opt);

    std::vector<double> idx, loud, det, excl;
    for (std::size_t i = 0; i < r.loudest_snr.size(); ++i) {
        idx.push_back(static_cast<double>(i));
        loud.push_back(r.loudest_snr[i]);
        det.push_back(r.loudest_snr[i] > rc.population.snr_threshold ? 1.0 : 0.0);
        excl.push_back(static_cast<double>(r.excluded[i]));
    }
    t.add("realization", idx);
    t.add("loudest_snr", loud);
    t.add("detected", det);
    t.add("excluded", excl);
    t.meta["detection_fraction"] = r.detection_fraction;
    t.meta["histogram_log10_edges"] = r.bin_edges;
    t.meta["histogram_counts"] = r.histogram;
    return t;
}

Spectrum parse_noise_curve(std::istream& in) {
    Spectrum s;
    std::string line;
    std::size_t column = 1;
    bool squared = false;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() < 2)
            throw ConfigError("noise_curve", "noise curve line " + std::to_string(lineno) + ": need two columns");

        if (first) {
            first = false;
            char* end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            if (end == cells[0].c_str()) {  // header row
                for (std::size_t i = 1; i < cells.size(); ++i) {
                    if (cells[i].rfind("strain_psd", 0) == 0) { column = i; squared = false; break; }
                    if (cells[i].rfind("strain_asd", 0) == 0) { column = i; squared = true; break; }
                }
                continue;
            }
        }
        if (column >= cells.size())
            throw ConfigError("noise_curve", "noise curve line " + std::to_string(lineno) + ": missing column");
        try {
            std::size_t used = 0;
            const double f = std::stod(cells[0], &used);
            const double v = std::stod(cells[column]);
            s.frequency_hz.push_back(f);
            s.value.push_back(squared ? v * v : v);
        } catch (const std::exception&) {
            throw ConfigError("noise_curve", "noise curve line " + std::to_string(lineno) + ": not a number");
        }
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("noise_curve", std::string("noise curve: ") + e.what());
    }
    return s;
}

Spectrum read_noise_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read noise curve '" + path + "'");
    return parse_noise_curve(in);
}

void check_finite(const Table& t) {
    const bool has_freq = !t.names.empty() && t.names.front() == "frequency_hz";
    const bool allow_inf = t.allow_infinite;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        for (std::size_t r = 0; r < t.columns[c].size(); ++r) {
            const double v = t.columns[c][r];
            if (std::isnan(v) || (std::isinf(v) && !allow_inf))
                throw NumericError("non-finite " + t.names[c], has_freq ? t.columns[0][r] : std::nan(""));
        }
}

}  // namespace qexp::cli
