// Command-line front end: computes channel-estimation error variances for
// pilot-sampled Gauss-Markov fading, the resulting achievable-rate lower
// bounds, and jointly optimized training parameters, emitting plot-ready
// CSV/JSON tables.

#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "psam/errors.hpp"
#include "psam/run_config.hpp"
#include "psam/sweep_table.hpp"
#include "psam/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct CliState {
    psam::RunConfig cfg;
    std::string filter_name = "noncausal";
    std::string alias_name = "considered";
    std::string format_name = "csv";
    std::string config_path;
};

void add_common_options(CLI::App& cmd, CliState& st) {
    cmd.add_option("--alpha", st.cfg.alpha, "Gauss-Markov fading coefficient, in [0, 1)");
    cmd.add_option("--sigma-h-sq", st.cfg.sigma_h_sq, "Fading variance");
    cmd.add_option("--sigma-n-sq", st.cfg.sigma_n_sq, "Noise variance");
    cmd.add_option("--snr-db", st.cfg.snr_db, "Operating SNR in dB (single-point scenarios)");
    cmd.add_option("--snr-min-db", st.cfg.snr_min_db, "Sweep grid lower edge, dB");
    cmd.add_option("--snr-max-db", st.cfg.snr_max_db, "Sweep grid upper edge, dB");
    cmd.add_option("--snr-step-db", st.cfg.snr_step_db, "Sweep grid step, dB");
    cmd.add_option("--filter", st.filter_name, "Estimator: noncausal|causal")
        ->check(CLI::IsMember({"noncausal", "causal"}));
    cmd.add_option("--aliasing", st.alias_name, "Doppler aliasing: considered|ignored")
        ->check(CLI::IsMember({"considered", "ignored"}));
    cmd.add_option("--m-min", st.cfg.m_min, "Smallest training period searched");
    cmd.add_option("--m-max", st.cfg.m_max, "Largest training period searched");
    cmd.add_option("--out", st.cfg.out, "Output path (stdout when omitted)");
    cmd.add_option("--format", st.format_name, "Output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--seed", st.cfg.seed, "Seed for the simulation-backed checks");
    cmd.add_option("--config", st.config_path, "JSON config file (flags take precedence)");
}

// Long names (without dashes) of the options the user set on the command line.
std::set<std::string> provided_keys(const CLI::App& cmd) {
    std::set<std::string> keys;
    for (const CLI::Option* opt : cmd.get_options()) {
        if (opt->count() > 0 && !opt->get_lnames().empty()) {
            keys.insert(opt->get_lnames().front());
        }
    }
    return keys;
}

int run(const CLI::App& cmd, CliState& st, psam::Scenario scenario) {
    st.cfg.scenario = scenario;
    // Enum-valued flags arrive as strings; translate before the file merge so
    // the merge sees final CLI values.
    st.cfg.filter = st.filter_name == "causal" ? psam::FilterKind::Causal
                                               : psam::FilterKind::Noncausal;
    st.cfg.alias = st.alias_name == "ignored" ? psam::AliasMode::Ignored
                                              : psam::AliasMode::Considered;
    st.cfg.format = st.format_name == "json" ? psam::OutputFormat::Json
                                             : psam::OutputFormat::Csv;
    if (!st.config_path.empty()) {
        std::ifstream in(st.config_path);
        if (!in) throw psam::ConfigError("config: cannot read '" + st.config_path + "'");
        nlohmann::json file;
        try {
            in >> file;
        } catch (const nlohmann::json::exception& e) {
            throw psam::ConfigError("config: invalid JSON in '" + st.config_path +
                                    "': " + e.what());
        }
        st.cfg.apply_file(file, provided_keys(cmd));
    }
    st.cfg.validate();
    const psam::SweepTable table = psam::run_scenario(st.cfg);
    psam::emit(table, st.cfg.out, st.cfg.format == psam::OutputFormat::Json);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(psam::kToolName) +
                 " - achievable rates for pilot-assisted transmission over Gauss-Markov "
                 "fading with Wiener-filter channel estimation"};
    app.set_version_flag("--version", psam::kToolVersion);
    app.require_subcommand(1);

    CliState st;
    struct Sub {
        const char* name;
        const char* help;
        psam::Scenario scenario;
    };
    const Sub subs[] = {
        {"rate-vs-period", "Optimized rate for each training period at one SNR",
         psam::Scenario::RateVsPeriod},
        {"rate-vs-snr", "Jointly optimized rate across an SNR grid", psam::Scenario::RateVsSnr},
        {"power-profile", "Optimal pilot and per-symbol data powers",
         psam::Scenario::PowerProfile},
        {"bit-energy", "Normalized energy per bit across an SNR grid",
         psam::Scenario::BitEnergy},
        {"validate", "Analytic results against independent numerical oracles",
         psam::Scenario::Validate},
    };
    for (const Sub& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common_options(*cmd, st);
        const psam::Scenario scenario = sub.scenario;
        cmd->callback([cmd, &st, scenario] {
            const int rc = run(*cmd, st, scenario);
            if (rc != kExitOk) throw CLI::RuntimeError(rc);
        });
    }

    try {
        app.parse(argc, argv);
        return kExitOk;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const psam::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const psam::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
