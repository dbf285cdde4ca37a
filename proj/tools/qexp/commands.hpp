#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qexp/config.hpp"
#include "qexp/spectrum.hpp"

namespace qexp::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Named columns of equal length plus command-specific metadata.
struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    nlohmann::json meta = nlohmann::json::object();
    bool allow_infinite = false;

    void add(std::string name, std::vector<double> values) {
        names.push_back(std::move(name));
        columns.push_back(std::move(values));
    }
    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

Table run_spectrum(const RunConfig& rc);
Table run_qcrb(const RunConfig& rc);
Table run_budget(const RunConfig& rc);
Table run_bandwidth(const RunConfig& rc);
Table run_sweep(const RunConfig& rc);
Table run_montecarlo(const RunConfig& rc, std::uint64_t seed);

// Strain PSD on the configured grid for the configured model.
Spectrum model_spectrum(const RunConfig& rc, std::vector<double>* unstable = nullptr);

// Two or more comma-separated columns; `#` lines skipped; optional header.
// A column named strain_asd is squared into a PSD.
Spectrum parse_noise_curve(std::istream& in);
Spectrum read_noise_curve(const std::string& path);

// Throws NumericError at the first non-finite value.
void check_finite(const Table& t);

}  // namespace qexp::cli
