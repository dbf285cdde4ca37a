#include "qexp/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "qexp/errors.hpp"
#include "qexp/twomode.hpp"

namespace qexp::cli {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out))
        throw ConfigError(key, key + ": expected a finite number, got '" + v + "'");
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, key + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v, std::size_t min) {
    const auto n = to_u64(key, v);
    if (n < min) throw ConfigError(key, key + ": must be at least " + std::to_string(min));
    return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, key + ": expected true or false, got '" + v + "'");
}

double positive(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (!(x > 0.0)) throw ConfigError(key, key + ": must be positive");
    return x;
}

double unit(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(key, key + ": must lie in [0, 1]");
    return x;
}

const std::vector<std::string> kRequired = {
    "wavelength", "arm_power", "arm_length", "se_length", "mirror_mass",
    "itm_transmission", "sem_transmission", "etm_transmission", "se_loss", "eta",
};

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

struct Filter {
    double bandwidth_hz = 0.0;
    double detuning_hz = 0.0;
    std::string placement = "none";
};

struct Gain {
    std::optional<double> fraction, chi, single_pass;
};

struct Pending {
    Filter filter;
    Gain gain;
};

std::map<std::string, Setter> setters(Pending& p) {
    std::map<std::string, Setter> s;
    auto det = [&s](const char* key, double DetectorConfig::*field, double (*conv)(const std::string&, const std::string&)) {
        s[key] = [field, conv](RunConfig& rc, const std::string& k, const std::string& v) {
            rc.detector.*field = conv(k, v);
        };
    };
    det("wavelength", &DetectorConfig::wavelength, positive);
    det("arm_power", &DetectorConfig::arm_power, positive);
    det("arm_length", &DetectorConfig::arm_length, positive);
    det("se_length", &DetectorConfig::se_length, positive);
    det("mirror_mass", &DetectorConfig::mirror_mass, positive);
    det("itm_transmission", &DetectorConfig::itm_transmission, unit);
    det("sem_transmission", &DetectorConfig::sem_transmission, unit);
    det("etm_transmission", &DetectorConfig::etm_transmission, unit);
    det("se_loss", &DetectorConfig::se_loss, unit);
    det("eta", &DetectorConfig::detection_efficiency, unit);
    det("ext_squeeze_angle", &DetectorConfig::ext_squeeze_angle, to_double);
    det("crystal_angle", &DetectorConfig::crystal_angle, to_double);
    det("se_phase_itm", &DetectorConfig::se_phase_itm, to_double);
    det("se_phase_sem", &DetectorConfig::se_phase_sem, to_double);
    det("arm_detuning", &DetectorConfig::arm_detuning, to_double);
    det("homodyne_angle", &DetectorConfig::homodyne_angle, to_double);
    s["ext_squeeze_db"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        rc.detector.ext_squeeze = db_to_nepers(to_double(k, v));
    };

    s["chi_over_gamma"] = [&p](RunConfig&, const std::string& k, const std::string& v) { p.gain.fraction = to_double(k, v); };
    s["chi"] = [&p](RunConfig&, const std::string& k, const std::string& v) { p.gain.chi = to_double(k, v); };
    s["internal_squeeze"] = [&p](RunConfig&, const std::string& k, const std::string& v) { p.gain.single_pass = to_double(k, v); };

    s["filter_bandwidth_hz"] = [&p](RunConfig&, const std::string& k, const std::string& v) { p.filter.bandwidth_hz = positive(k, v); };
    s["filter_detuning_hz"] = [&p](RunConfig&, const std::string& k, const std::string& v) { p.filter.detuning_hz = to_double(k, v); };
    s["filter_placement"] = [&p](RunConfig&, const std::string& k, const std::string& v) {
        if (v != "none" && v != "input" && v != "output")
            throw ConfigError(k, k + ": expected none, input or output");
        p.filter.placement = v;
    };

    s["model"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        if (v == "twomode") rc.model = Model::twomode;
        else if (v == "exact") rc.model = Model::exact;
        else if (v == "full") rc.model = Model::full;
        else throw ConfigError(k, k + ": expected twomode, exact or full");
    };
    s["format"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        if (v == "csv") rc.format = Format::csv;
        else if (v == "json") rc.format = Format::json;
        else throw ConfigError(k, k + ": expected csv or json");
    };
    s["asd"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.asd = to_bool(k, v); };
    s["seed"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.seed = to_u64(k, v); };
    s["threads"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        rc.threads = static_cast<unsigned>(to_count(k, v, 1));
    };
    s["f_min_hz"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.grid.f_min_hz = positive(k, v); };
    s["f_max_hz"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.grid.f_max_hz = positive(k, v); };
    s["points"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.grid.points = to_count(k, v, 2); };

    s["band_min_hz"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        rc.band.f_min_hz = rc.snr.f_min_hz = positive(k, v);
    };
    s["band_max_hz"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        rc.band.f_max_hz = rc.snr.f_max_hz = positive(k, v);
    };
    s["band_points"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.band.points = to_count(k, v, 2); };
    s["loss_share"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.loss_share = unit(k, v); };
    s["optimize_gain"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.optimize = to_bool(k, v); };
    s["loss_min"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.loss_min = unit(k, v); };
    s["loss_max"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.loss_max = unit(k, v); };
    s["loss_points"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.loss_points = to_count(k, v, 1); };
    s["gain_min"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.gain_min = to_double(k, v); };
    s["gain_max"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.gain_max = to_double(k, v); };
    s["gain_points"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.sweep.gain_points = to_count(k, v, 1); };

    s["realizations"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.realizations = to_count(k, v, 1); };
    s["samples"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.samples = to_count(k, v, 1); };
    s["mass_mean"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.mass_mean = positive(k, v); };
    s["mass_spread"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.mass_spread = positive(k, v); };
    s["mass_spread_is_variance"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        rc.population.spread_is_variance = to_bool(k, v);
    };
    s["max_distance_mpc"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.max_distance_mpc = positive(k, v); };
    s["event_rate"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.event_rate = positive(k, v); };
    s["collapse_mass"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.collapse_mass = positive(k, v); };
    s["snr_threshold"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.population.snr_threshold = positive(k, v); };
    s["snr_nodes"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.snr.nodes = to_count(k, v, 2); };
    s["response"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        if (v == "quadrupole") rc.snr.response = ResponseModel::quadrupole;
        else if (v == "unity") rc.snr.response = ResponseModel::unity;
        else throw ConfigError(k, k + ": expected quadrupole or unity");
    };
    s["snr_mode"] = [](RunConfig& rc, const std::string& k, const std::string& v) {
        if (v == "literal") rc.snr.mode = SnrMode::literal;
        else if (v == "matched_filter") rc.snr.mode = SnrMode::matched_filter;
        else throw ConfigError(k, k + ": expected literal or matched_filter");
    };
    s["fp_scale_hz"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.eos.scale_hz = positive(k, v); };
    s["eos_quality"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.eos.quality = positive(k, v); };
    s["eos_peak_strain"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.eos.peak_strain = positive(k, v); };
    s["eos_radius_km"] = [](RunConfig& rc, const std::string& k, const std::string& v) { rc.eos.radius_km = positive(k, v); };
    s["noise_curve"] = [](RunConfig& rc, const std::string&, const std::string& v) { rc.noise_curve = v; };
    return s;
}

std::map<std::string, std::string> read_pairs(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(t, "line " + std::to_string(lineno) + ": expected `key = value`");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError(key, key + ": empty value");
        if (!kv.emplace(key, value).second) throw ConfigError(key, key + ": given more than once");
    }
    return kv;
}

}  // namespace

const char* model_name(Model m) {
    switch (m) {
        case Model::twomode: return "twomode";
        case Model::exact: return "exact";
        case Model::full: return "full";
    }
    return "full";
}

RunConfig parse_config(std::string_view text, const Overrides& overrides) {
    auto kv = read_pairs(text);
    // A gain given on the command line replaces whichever gain form the file used.
    for (const char* gk : {"chi_over_gamma", "chi", "internal_squeeze"})
        if (overrides.count(gk))
            for (const char* other : {"chi_over_gamma", "chi", "internal_squeeze"}) kv.erase(other);
    for (const auto& [k, v] : overrides) kv[k] = v;

    RunConfig rc;
    if (auto it = kv.find("preset"); it != kv.end()) {
        if (it->second == "baseline_gwo") rc.detector = baseline_gwo();
        else if (it->second == "adv_ligo") rc.detector = adv_ligo();
        else throw ConfigError("preset", "preset: expected baseline_gwo or adv_ligo");
        rc.preset = it->second;
        kv.erase(it);
    } else {
        std::string missing;
        for (const auto& k : kRequired)
            if (!kv.count(k)) missing += (missing.empty() ? "" : ", ") + k;
        if (!missing.empty()) {
            const std::string first = missing.substr(0, missing.find(','));
            throw ConfigError(first, "missing required keys (or set `preset`): " + missing);
        }
        rc.detector.ext_squeeze = 0.0;
    }

    Pending pending;
    const auto table = setters(pending);
    for (const auto& [k, v] : kv) {
        auto it = table.find(k);
        if (it == table.end()) throw ConfigError(k, "unknown key '" + k + "'");
        it->second(rc, k, v);
    }

    rc.detector.validate();
    if (!(rc.grid.f_max_hz > rc.grid.f_min_hz)) throw ConfigError("f_max_hz", "f_max_hz must exceed f_min_hz");
    if (!(rc.band.f_max_hz > rc.band.f_min_hz)) throw ConfigError("band_max_hz", "band_max_hz must exceed band_min_hz");
    if (!(rc.sweep.loss_max >= rc.sweep.loss_min) || rc.sweep.loss_max >= 1.0)
        throw ConfigError("loss_max", "loss_max must lie in [loss_min, 1)");
    if (!(rc.sweep.gain_max >= rc.sweep.gain_min)) throw ConfigError("gain_max", "gain_max must be at least gain_min");

    const Gain& g = pending.gain;
    const int given = g.fraction.has_value() + g.chi.has_value() + g.single_pass.has_value();
    if (given > 1)
        throw ConfigError("chi_over_gamma", "give only one of chi_over_gamma, chi, internal_squeeze");
    const double gamma = gain_from_fraction(rc.detector, 1.0);
    if (g.fraction) rc.chi_over_gamma = *g.fraction;
    if (g.chi) rc.chi_over_gamma = *g.chi / gamma;
    if (g.single_pass) rc.chi_over_gamma = *g.single_pass / threshold_gain(rc.detector);
    if (!std::isfinite(rc.chi_over_gamma)) throw ConfigError("chi_over_gamma", "internal gain must be finite");
    rc.detector.internal_squeeze = gain_from_threshold_fraction(rc.detector, rc.chi_over_gamma);

    rc.readout = ReadoutConfig::from(rc.detector);
    if (rc.readout.efficiency <= 0.0) throw ConfigError("eta", "eta: readout efficiency must be positive");
    if (pending.filter.placement != "none") {
        if (!(pending.filter.bandwidth_hz > 0.0))
            throw ConfigError("filter_bandwidth_hz", "filter_bandwidth_hz is required with a filter cavity");
        rc.readout.filters.push_back({constants::two_pi * pending.filter.bandwidth_hz,
                                      constants::two_pi * pending.filter.detuning_hz,
                                      pending.filter.placement == "input" ? FilterPlacement::input
                                                                          : FilterPlacement::output});
    }
    return rc;
}

nlohmann::json config_json(const RunConfig& rc) {
    const DetectorConfig& d = rc.detector;
    nlohmann::json j;
    if (!rc.preset.empty()) j["preset"] = rc.preset;
    j["wavelength"] = d.wavelength;
    j["arm_power"] = d.arm_power;
    j["arm_length"] = d.arm_length;
    j["se_length"] = d.se_length;
    j["mirror_mass"] = d.mirror_mass;
    j["itm_transmission"] = d.itm_transmission;
    j["sem_transmission"] = d.sem_transmission;
    j["etm_transmission"] = d.etm_transmission;
    j["se_loss"] = d.se_loss;
    j["eta"] = d.detection_efficiency;
    j["ext_squeeze_db"] = nepers_to_db(d.ext_squeeze);
    j["ext_squeeze_angle"] = d.ext_squeeze_angle;
    j["chi_over_gamma"] = rc.chi_over_gamma;
    j["crystal_angle"] = d.crystal_angle;
    j["se_phase_itm"] = d.se_phase_itm;
    j["se_phase_sem"] = d.se_phase_sem;
    j["arm_detuning"] = d.arm_detuning;
    j["homodyne_angle"] = d.homodyne_angle;
    if (!rc.readout.filters.empty()) {
        const auto& f = rc.readout.filters.front();
        j["filter_bandwidth_hz"] = f.bandwidth / constants::two_pi;
        j["filter_detuning_hz"] = f.detuning / constants::two_pi;
        j["filter_placement"] = f.placement == FilterPlacement::input ? "input" : "output";
    }
    j["model"] = model_name(rc.model);
    j["f_min_hz"] = rc.grid.f_min_hz;
    j["f_max_hz"] = rc.grid.f_max_hz;
    j["points"] = rc.grid.points;
    j["asd"] = rc.asd;
    j["band_min_hz"] = rc.band.f_min_hz;
    j["band_max_hz"] = rc.band.f_max_hz;
    j["band_points"] = rc.band.points;
    j["loss_share"] = rc.loss_share;
    j["optimize_gain"] = rc.optimize;
    j["loss_min"] = rc.sweep.loss_min;
    j["loss_max"] = rc.sweep.loss_max;
    j["loss_points"] = rc.sweep.loss_points;
    j["gain_min"] = rc.sweep.gain_min;
    j["gain_max"] = rc.sweep.gain_max;
    j["gain_points"] = rc.sweep.gain_points;
    j["realizations"] = rc.population.realizations;
    j["samples"] = rc.population.samples;
    j["mass_mean"] = rc.population.mass_mean;
    j["mass_spread"] = rc.population.mass_spread;
    j["mass_spread_is_variance"] = rc.population.spread_is_variance;
    j["max_distance_mpc"] = rc.population.max_distance_mpc;
    j["event_rate"] = rc.population.event_rate;
    j["collapse_mass"] = rc.population.collapse_mass;
    j["snr_threshold"] = rc.population.snr_threshold;
    j["snr_nodes"] = rc.snr.nodes;
    j["response"] = rc.snr.response == ResponseModel::quadrupole ? "quadrupole" : "unity";
    j["snr_mode"] = rc.snr.mode == SnrMode::literal ? "literal" : "matched_filter";
    j["fp_scale_hz"] = rc.eos.scale_hz;
    j["eos_quality"] = rc.eos.quality;
    j["eos_peak_strain"] = rc.eos.peak_strain;
    j["eos_radius_km"] = rc.eos.radius_km;
    if (!rc.noise_curve.empty()) j["noise_curve"] = rc.noise_curve;
    return j;
}

}  // namespace qexp::cli
