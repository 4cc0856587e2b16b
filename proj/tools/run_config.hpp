#pragma once

// Run configuration for the phonon_chain tool.
//
// Config files are flat UTF-8 `key = value` text; `#` starts a comment.
// Keys: n, mass, coupling, spacing, hbar, lambda, energy, n_values (comma
// separated), cutoff, mc_samples, seed, format (csv|json), out, parallel.
// Command-line flags override file values.

#include <phonon_chain/chain_model.hpp>

#include <json.hpp>

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phonon_chain::tool {

/// Usage or configuration problem; maps to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    ChainParams params{};
    std::optional<double> lambda;
    std::optional<double> energy;
    std::vector<std::size_t> n_values;
    std::size_t cutoff = 400;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t seed = 20240101;
    OutputFormat format = OutputFormat::csv;
    std::string out;
    bool parallel = false;
};

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid number for '" + key + "': '" + text + "'");
    }
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw config_error("invalid unsigned integer for '" + key + "': '" + text + "'");
    return v;
}

inline std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
    std::vector<std::size_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        values.push_back(static_cast<std::size_t>(parse_unsigned(key, trim(item))));
    if (values.empty())
        throw config_error("'" + key + "' must list at least one value");
    return values;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on")
        return true;
    if (text == "0" || text == "false" || text == "no" || text == "off")
        return false;
    throw config_error("invalid boolean for '" + key + "': '" + text + "'");
}

inline OutputFormat parse_format(const std::string& text) {
    if (text == "csv")
        return OutputFormat::csv;
    if (text == "json")
        return OutputFormat::json;
    throw config_error("format must be csv or json, got '" + text + "'");
}

inline void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "n")
        config.params.n_particles = static_cast<std::size_t>(parse_unsigned(key, value));
    else if (key == "mass")
        config.params.mass = parse_double(key, value);
    else if (key == "coupling")
        config.params.coupling = parse_double(key, value);
    else if (key == "spacing")
        config.params.spacing = parse_double(key, value);
    else if (key == "hbar")
        config.params.hbar = parse_double(key, value);
    else if (key == "lambda")
        config.lambda = parse_double(key, value);
    else if (key == "energy")
        config.energy = parse_double(key, value);
    else if (key == "n_values")
        config.n_values = parse_size_list(key, value);
    else if (key == "cutoff")
        config.cutoff = static_cast<std::size_t>(parse_unsigned(key, value));
    else if (key == "mc_samples")
        config.mc_samples = static_cast<std::size_t>(parse_unsigned(key, value));
    else if (key == "seed")
        config.seed = parse_unsigned(key, value);
    else if (key == "format")
        config.format = parse_format(value);
    else if (key == "out")
        config.out = value;
    else if (key == "parallel")
        config.parallel = parse_bool(key, value);
    else
        throw config_error("unknown config key '" + key + "'");
}

inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        if (key.empty())
            throw config_error("config line " + std::to_string(line_no) + ": empty key");
        entries[key] = trim(std::string_view(content).substr(eq + 1));
    }
    return entries;
}

inline void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    for (const auto& [key, value] : parse_config_text(buffer.str()))
        apply_setting(config, key, value);
}

/// Physical parameters are checked here; which of lambda/energy a command
/// needs is checked by the command.
inline void validate(const RunConfig& config) {
    try {
        config.params.validate();
    } catch (const phonon_chain::error& e) {
        throw config_error(e.what());
    }
    if (config.lambda && config.energy)
        throw config_error("set exactly one of lambda and energy, not both");
    if (config.lambda && !(*config.lambda > 0.0))
        throw config_error("lambda must be positive");
    if (config.energy && !(*config.energy > 0.0))
        throw config_error("energy must be positive (NonPositiveEnergy)");
    if (config.mc_samples < 1)
        throw config_error("mc_samples must be at least 1");
}

inline nlohmann::json to_json(const RunConfig& config) {
    nlohmann::json j;
    j["n"] = config.params.n_particles;
    j["mass"] = config.params.mass;
    j["coupling"] = config.params.coupling;
    j["spacing"] = config.params.spacing;
    j["hbar"] = config.params.hbar;
    j["lambda"] = config.lambda ? nlohmann::json(*config.lambda) : nlohmann::json(nullptr);
    j["energy"] = config.energy ? nlohmann::json(*config.energy) : nlohmann::json(nullptr);
    j["n_values"] = config.n_values;
    j["cutoff"] = config.cutoff;
    j["mc_samples"] = config.mc_samples;
    j["seed"] = config.seed;
    j["format"] = config.format == OutputFormat::csv ? "csv" : "json";
    j["out"] = config.out;
    j["parallel"] = config.parallel;
    return j;
}

} // namespace phonon_chain::tool
