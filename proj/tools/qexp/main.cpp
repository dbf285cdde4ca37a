#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qexp/commands.hpp"
#include "qexp/config.hpp"
#include "qexp/emit.hpp"
#include "qexp/errors.hpp"

namespace {

enum Exit { ok = 0, config_error = 2, numeric_error = 3, io_error = 4 };

struct Flags {
    std::string config_path;
    std::string preset;
    std::string model;
    std::string format;
    std::string output;
    std::vector<std::string> sets;
    double chi_over_gamma = 0.0;
    bool chi_given = false;
    bool asd = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("config", f.config_path, "Config file (key = value lines)");
    sub->add_option("--preset", f.preset, "baseline_gwo or adv_ligo");
    sub->add_option("--model", f.model, "twomode, exact or full");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_option("-o,--output", f.output, "Output file (default stdout)");
    sub->add_option("--set", f.sets, "Extra key=value override")->take_all();
    sub->add_option_function<double>("--chi-over-gamma", [&f](double v) {
        f.chi_over_gamma = v;
        f.chi_given = true;
    }, "Internal gain as a fraction of threshold");
    sub->add_flag("--asd", f.asd, "Emit amplitude spectral densities");
    sub->add_option_function<std::uint64_t>("--seed", [&f](std::uint64_t v) {
        f.seed = v;
        f.seed_given = true;
    }, "Random seed");
    sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qexp::cli::IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

qexp::cli::Overrides overrides(const Flags& f) {
    qexp::cli::Overrides o;
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw qexp::ConfigError(s, "--set expects key=value, got '" + s + "'");
        o[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!f.preset.empty()) o["preset"] = f.preset;
    if (!f.model.empty()) o["model"] = f.model;
    if (!f.format.empty()) o["format"] = f.format;
    if (f.asd) o["asd"] = "true";
    if (f.chi_given) o["chi_over_gamma"] = std::to_string(f.chi_over_gamma);
    if (f.seed_given) o["seed"] = std::to_string(f.seed);
    if (f.threads) o["threads"] = std::to_string(f.threads);
    return o;
}

int run(const std::string& command, const Flags& flags) {
    using namespace qexp::cli;
    const std::string text = flags.config_path.empty() ? std::string() : read_text(flags.config_path);
    RunConfig rc = parse_config(text, overrides(flags));

    const std::uint64_t seed = rc.seed ? *rc.seed : (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();

    Table t;
    if (command == "spectrum") t = run_spectrum(rc);
    else if (command == "qcrb") t = run_qcrb(rc);
    else if (command == "budget") t = run_budget(rc);
    else if (command == "bandwidth") t = run_bandwidth(rc);
    else if (command == "sweep") t = run_sweep(rc);
    else t = run_montecarlo(rc, seed);
    check_finite(t);

    nlohmann::json meta;
    meta["command"] = command;
    meta["version"] = QEXP_VERSION;
    meta["seed"] = seed;
    meta["config"] = config_json(rc);
    for (const auto& [k, v] : t.meta.items()) meta[k] = v;

    std::ostringstream body;
    if (rc.format == Format::json)
        write_json(body, t, meta);
    else
        write_csv(body, t, meta);

    if (flags.output.empty()) {
        std::cout << body.str();
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
    } else {
        std::ofstream out(flags.output, std::ios::binary);
        if (!out) throw IoError("cannot open output file '" + flags.output + "'");
        out << body.str();
        out.close();
        if (!out) throw IoError("failed writing output file '" + flags.output + "'");
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-expander detector sensitivity and post-merger detectability"};
    app.set_version_flag("--version", QEXP_VERSION);
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"spectrum", "Strain noise spectrum for the selected model"},
        {"qcrb", "Quantum Cramer-Rao bound next to the two-mode spectrum"},
        {"budget", "Per-vacuum-port noise budget of the full model"},
        {"bandwidth", "Derived rates and detection bandwidth"},
        {"sweep", "Broadband improvement over total loss and internal gain"},
        {"montecarlo", "Loudest post-merger event SNR study"},
    };
    std::string chosen;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, flags);
        sub->callback([&chosen, n = std::string(name)] { chosen = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        return run(chosen, flags);
    } catch (const qexp::ConfigError& e) {
        std::cerr << "qexp: configuration error [" << e.key() << "]: " << e.what() << '\n';
        return config_error;
    } catch (const qexp::NumericError& e) {
        std::cerr << "qexp: numeric failure at " << e.frequency_hz() << " Hz: " << e.what() << '\n';
        return numeric_error;
    } catch (const qexp::cli::IoError& e) {
        std::cerr << "qexp: I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "qexp: numeric failure: " << e.what() << '\n';
        return numeric_error;
    }
}
