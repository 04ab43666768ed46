#include <doctest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "psam/errors.hpp"
#include "psam/run_config.hpp"
#include "psam/sweep_table.hpp"

using namespace psam;

namespace {

std::string csv_of(const SweepTable& t) {
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

}  // namespace

TEST_CASE("CSV shape: header plus one line per row, LF endings") {
    SweepTable t;
    t.columns = {"a", "b"};
    t.add_row({1.0, 2.5});
    t.add_row({-3.0, 0.125});
    t.add_row({1e-7, 12345.75});
    const std::string csv = csv_of(t);
    CHECK(csv == "a,b\n1,2.5\n-3,0.125\n1e-07,12345.75\n");

    SweepTable empty;
    empty.columns = {"x", "y", "z"};
    CHECK(csv_of(empty) == "x,y,z\n");

    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("CSV keeps 12 significant digits") {
    SweepTable t;
    t.columns = {"v"};
    t.add_row({0.123456789012345});
    CHECK(csv_of(t) == "v\n0.123456789012\n");
}

TEST_CASE("defaults match the documented contract") {
    const RunConfig cfg;
    CHECK(cfg.alpha == 0.99);
    CHECK(cfg.sigma_h_sq == 1.0);
    CHECK(cfg.sigma_n_sq == 1.0);
    CHECK(cfg.filter == FilterKind::Noncausal);
    CHECK(cfg.alias == AliasMode::Considered);
    CHECK(cfg.m_min == 2);
    CHECK(cfg.m_max == 100);
    CHECK(cfg.format == OutputFormat::Csv);
}

TEST_CASE("empty table is valid JSON with no rows") {
    SweepTable t;
    t.columns = {"a"};
    std::ostringstream os;
    write_json(t, os);
    const auto doc = nlohmann::json::parse(os.str());
    CHECK(doc["rows"].is_array());
    CHECK(doc["rows"].empty());
}

TEST_CASE("JSON round-trip preserves every row value exactly") {
    SweepTable t;
    t.columns = {"w", "value"};
    t.metadata["note"] = "round-trip";
    t.add_row({0.1, 1.0 / 3.0});
    t.add_row({2e-308, 9.007199254740993e15});
    std::ostringstream os;
    write_json(t, os);
    const auto doc = nlohmann::json::parse(os.str());
    CHECK(doc["metadata"]["note"] == "round-trip");
    CHECK(doc["columns"].size() == 2);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) {
            CHECK(doc["rows"][i][j].get<double>() == t.rows[i][j]);
        }
    }
}

TEST_CASE("RunConfig validation names the first bad field") {
    RunConfig cfg;
    cfg.alpha = 1.2;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha"), ConfigError);
    cfg.alpha = 0.9;
    cfg.m_min = 1;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("m-min"), ConfigError);
    cfg.m_min = 4;
    cfg.m_max = 3;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("m-max"), ConfigError);
    cfg.m_max = 20;
    cfg.filter = FilterKind::Causal;
    cfg.alias = AliasMode::Considered;
    cfg.scenario = Scenario::RateVsPeriod;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.alias = AliasMode::Ignored;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config-file merge: flags beat file values, file beats defaults") {
    RunConfig cfg;  // defaults: snr_db = 0, alpha = 0.99
    const nlohmann::json file = {{"snr-db", 3.0}, {"alpha", 0.5}, {"m-max", 40}};
    cfg.snr_db = 5.0;  // pretend --snr-db 5 was given
    cfg.apply_file(file, {"snr-db"});
    CHECK(cfg.snr_db == 5.0);   // flag wins
    CHECK(cfg.alpha == 0.5);    // file wins over default
    CHECK(cfg.m_max == 40);
    CHECK(cfg.sigma_h_sq == 1.0);  // untouched default

    CHECK_THROWS_WITH_AS(cfg.apply_file({{"alhpa", 1.0}}, {}), doctest::Contains("alhpa"),
                         ConfigError);
    CHECK_THROWS_AS(cfg.apply_file({{"alpha", "high"}}, {}), ConfigError);
}

TEST_CASE("scenario tables carry re-runnable metadata") {
    RunConfig cfg;
    cfg.scenario = Scenario::RateVsPeriod;
    cfg.alpha = 0.9;
    cfg.snr_db = 0.0;
    cfg.m_min = 3;
    cfg.m_max = 5;
    const SweepTable t = run_scenario(cfg);
    CHECK(t.columns == std::vector<std::string>{"M", "rate_bits", "P_t_star"});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][0] == 3.0);
    CHECK(t.rows[2][0] == 5.0);
    for (const auto& row : t.rows) CHECK(row[1] > 0.0);

    // rebuild the config from the echoed metadata and reproduce the table
    RunConfig again;
    again.scenario = Scenario::RateVsPeriod;
    again.apply_file(
        [&] {
            nlohmann::json echo = t.metadata["config"];
            echo.erase("scenario");
            return echo;
        }(),
        {});
    const SweepTable t2 = run_scenario(again);
    CHECK(t2.rows == t.rows);
}

TEST_CASE("power-profile scenario emits the pilot at position zero") {
    RunConfig cfg;
    cfg.scenario = Scenario::PowerProfile;
    cfg.alpha = 0.90;
    cfg.snr_db = 0.0;
    cfg.m_min = cfg.m_max = 5;
    const SweepTable t = run_scenario(cfg);
    CHECK(t.columns == std::vector<std::string>{"position", "power"});
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0][0] == 0.0);
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK(t.rows[i][0] == static_cast<double>(i));
        CHECK(t.rows[0][1] > t.rows[i][1]);  // pilot bar largest
    }
}
