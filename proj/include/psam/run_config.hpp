#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "psam/sweep_table.hpp"
#include "psam/wiener_mmse.hpp"

namespace psam {

enum class Scenario { RateVsPeriod, RateVsSnr, PowerProfile, BitEnergy, Validate };
enum class OutputFormat { Csv, Json };

std::string to_string(Scenario s);
std::string to_string(OutputFormat f);

// Everything a scenario run depends on. dB quantities live only here; the
// numeric modules see linear powers.
struct RunConfig {
    Scenario scenario = Scenario::RateVsPeriod;
    double alpha = 0.99;
    double sigma_h_sq = 1.0;
    double sigma_n_sq = 1.0;
    double snr_db = 0.0;
    double snr_min_db = -10.0;
    double snr_max_db = 10.0;
    double snr_step_db = 0.5;
    FilterKind filter = FilterKind::Noncausal;
    AliasMode alias = AliasMode::Considered;
    int m_min = 2;
    int m_max = 100;
    std::string out;  // empty means stdout
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 1;

    // Throws ConfigError naming the first invalid field.
    void validate() const;

    ChannelParams channel() const { return {alpha, sigma_h_sq, sigma_n_sq}; }
    double snr_linear() const;
    std::vector<double> snr_grid() const;

    nlohmann::json to_json() const;

    // Overlays values from a config file onto this config, skipping any key
    // the command line already set. Unknown keys are rejected.
    void apply_file(const nlohmann::json& file, const std::set<std::string>& cli_keys);
};

// Dispatches to the optimizer / rate / oracle modules and assembles the
// emission-ready table for the configured scenario.
SweepTable run_scenario(const RunConfig& cfg);

}  // namespace psam
