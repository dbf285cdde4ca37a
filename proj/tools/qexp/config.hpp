#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qexp/astro.hpp"
#include "qexp/budget.hpp"
#include "qexp/detector.hpp"
#include "qexp/fullmodel.hpp"

namespace qexp::cli {

enum class Model { twomode, exact, full };
enum class Format { csv, json };

struct GridSpec {
    double f_min_hz = 1.0;
    double f_max_hz = 1e4;
    std::size_t points = 1000;
};

struct SweepSpec {
    double loss_min = 0.0;
    double loss_max = 0.1;
    std::size_t loss_points = 11;
    double gain_min = 0.0;
    double gain_max = 0.99;
    std::size_t gain_points = 34;
};

struct RunConfig {
    std::string preset;
    DetectorConfig detector;
    ReadoutConfig readout;
    double chi_over_gamma = 0.0;  // resolved internal gain, fraction of gamma / threshold
    Model model = Model::full;
    GridSpec grid;
    Format format = Format::csv;
    bool asd = false;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;

    Band band;
    double loss_share = 0.5;
    bool optimize = false;
    SweepSpec sweep;

    PopulationModel population;
    EosFit eos;
    SnrOptions snr;
    std::string noise_curve;

    // Every key with its resolved value, as written back into output metadata.
    std::map<std::string, std::string> resolved;
};

using Overrides = std::map<std::string, std::string>;

// Flat `key = value` text, `#` comments. Overrides win over the text.
// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view text, const Overrides& overrides = {});

nlohmann::json config_json(const RunConfig& cfg);

const char* model_name(Model m);

}  // namespace qexp::cli
