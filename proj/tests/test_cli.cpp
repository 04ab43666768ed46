// End-to-end checks of the installed binary: exit codes, file emission,
// config precedence, and byte determinism.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct RunOutcome {
    int exit_code = -1;
};

RunOutcome run_cli(const std::string& args) {
    const std::string cmd = std::string(PSAM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    RunOutcome out;
    if (status != -1 && WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("psam_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

}  // namespace

TEST_CASE("exit code 2 for config mistakes") {
    CHECK(run_cli("").exit_code == 2);                                      // missing subcommand
    CHECK(run_cli("rate-vs-period --alpha 1.2").exit_code == 2);            // domain violation
    CHECK(run_cli("rate-vs-period --filter sideways").exit_code == 2);      // bad enum
    CHECK(run_cli("rate-vs-period --no-such-flag 1").exit_code == 2);       // unknown flag
    CHECK(run_cli("rate-vs-period --filter causal --aliasing considered").exit_code == 2);
    CHECK(run_cli("rate-vs-period --config /no/such/file.json").exit_code == 2);
}

TEST_CASE("exit code 3 when the output path is unwritable") {
    CHECK(run_cli("rate-vs-period --m-min 3 --m-max 3 --out /no/such/dir/out.csv").exit_code ==
          3);
}

TEST_CASE("a small scenario runs, writes the file, and is byte-deterministic") {
    TempDir tmp;
    ::setenv("SOURCE_DATE_EPOCH", "1755000000", 1);
    const std::string base = " --alpha 0.9 --snr-db 0 --m-min 3 --m-max 5 --format json --out ";
    const fs::path out1 = tmp.path / "a.json";
    const fs::path out2 = tmp.path / "b.json";
    CHECK(run_cli("rate-vs-period" + base + out1.string()).exit_code == 0);
    CHECK(run_cli("rate-vs-period" + base + out2.string()).exit_code == 0);
    ::unsetenv("SOURCE_DATE_EPOCH");
    REQUIRE(fs::exists(out1));
    const std::string bytes1 = slurp(out1);
    CHECK(bytes1 == slurp(out2));
    CHECK(bytes1.find("\"rows\"") != std::string::npos);
}

TEST_CASE("config file merges under explicit flags") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "cfg.json";
    {
        std::ofstream os(cfg);
        os << R"({"snr-db": 0.0, "m-min": 3, "m-max": 3, "alpha": 0.9})";
    }
    const fs::path out_file = tmp.path / "merged.csv";
    // flag --snr-db 5 overrides the file's 0
    CHECK(run_cli("rate-vs-period --config " + cfg.string() + " --snr-db 5 --out " +
                  out_file.string())
              .exit_code == 0);
    const std::string csv = slurp(out_file);
    CHECK(csv.rfind("M,rate_bits,P_t_star\n3,", 0) == 0);

    const fs::path bad = tmp.path / "bad.json";
    {
        std::ofstream os(bad);
        os << R"({"snr-dbb": 1.0})";
    }
    CHECK(run_cli("rate-vs-period --config " + bad.string()).exit_code == 2);
}
