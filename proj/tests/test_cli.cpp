#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CommandResult run_cmd(const std::string& args) {
    std::string cmd = std::string(GEVO_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CommandResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ostringstream out;
    out << std::ifstream(p).rdbuf();
    return out.str();
}

std::string fixture_flags() {
    return std::string("--grammars_dir ") + GEVO_ROOT + "/grammars --datasets_dir " + GEVO_ROOT +
           "/datasets";
}

// Commands print "results: <folder>" (run) or "experiment: <folder>".
fs::path reported_folder(const std::string& output, const std::string& prefix = "results: ") {
    auto at = output.find(prefix);
    REQUIRE(at != std::string::npos);
    auto end = output.find('\n', at);
    return fs::path(output.substr(at + prefix.size(), end - at - prefix.size()));
}

}  // namespace

TEST_CASE("a run creates a fully populated results folder") {
    TempDir dir("gevo_cli_run");
    auto r = run_cmd("run --problem string_match --target hey --population_size 20 "
                     "--generations 3 --random_seed 42 --results_dir " +
                     dir.path.string() + " " + fixture_flags());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("seed: 42") != std::string::npos);
    CHECK(r.output.find("best fitness:") != std::string::npos);

    fs::path folder = reported_folder(r.output);
    REQUIRE(fs::exists(folder));
    for (const char* name :
         {"parameters.txt", "stats.csv", "best.txt", "fitness.csv", "fitness.svg"})
        CHECK(fs::exists(folder / name));

    std::string params = slurp(folder / "parameters.txt");
    CHECK(params.find("random_seed: 42") != std::string::npos);
    CHECK(params.find("population_size: 20") != std::string::npos);
}

TEST_CASE("a recorded parameters file replays byte for byte") {
    TempDir dir("gevo_cli_replay");
    auto first = run_cmd("run --problem string_match --target hey --population_size 20 "
                         "--generations 3 --random_seed 9 --results_dir " +
                         dir.path.string() + " " + fixture_flags());
    REQUIRE(first.exit_code == 0);
    fs::path folder1 = reported_folder(first.output);

    auto second = run_cmd("run --parameters " + (folder1 / "parameters.txt").string() +
                          " --results_dir " + dir.path.string());
    REQUIRE(second.exit_code == 0);
    fs::path folder2 = reported_folder(second.output);

    CHECK(folder1 != folder2);
    CHECK(slurp(folder1 / "stats.csv") == slurp(folder2 / "stats.csv"));
    CHECK(slurp(folder1 / "best.txt") == slurp(folder2 / "best.txt"));
    CHECK(slurp(folder1 / "fitness.csv") == slurp(folder2 / "fitness.csv"));
}

TEST_CASE("command line flags override the parameters file") {
    TempDir dir("gevo_cli_override");
    std::ofstream(dir.path / "base.txt") << "problem: string_match\ntarget: hey\n"
                                            "population_size: 30\ngenerations: 2\n"
                                            "random_seed: 4\n";
    auto r = run_cmd("run --parameters " + (dir.path / "base.txt").string() +
                     " --population_size 12 --results_dir " + dir.path.string() + " " +
                     fixture_flags());
    REQUIRE(r.exit_code == 0);
    std::string recorded = slurp(reported_folder(r.output) / "parameters.txt");
    CHECK(recorded.find("population_size: 12") != std::string::npos);
    CHECK(recorded.find("target: hey") != std::string::npos);
}

TEST_CASE("bad configuration exits with status 2 and names the parameter") {
    TempDir dir("gevo_cli_bad");
    auto r = run_cmd("run --problem string_match --population_size 0 --results_dir " +
                     dir.path.string() + " " + fixture_flags());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("configuration error") != std::string::npos);
    CHECK(r.output.find("population_size") != std::string::npos);

    auto unknown = run_cmd("run --no_such_flag 1");
    CHECK(unknown.exit_code == 2);

    std::ofstream(dir.path / "typo.txt") << "tournamnt_size: 3\n";
    auto typo = run_cmd("run --parameters " + (dir.path / "typo.txt").string());
    CHECK(typo.exit_code == 2);
    CHECK(typo.output.find("tournamnt_size") != std::string::npos);
}

TEST_CASE("experiments fan out over seeds") {
    TempDir dir("gevo_cli_exp");
    auto r = run_cmd("experiment --problem string_match --target hey --population_size 16 "
                     "--generations 2 --seeds 5,7-8 --jobs 2 --results_dir " +
                     dir.path.string() + " " + fixture_flags());
    REQUIRE(r.exit_code == 0);

    fs::path folder = reported_folder(r.output, "experiment: ");
    REQUIRE(fs::exists(folder));
    CHECK(fs::exists(folder / "summary.csv"));
    CHECK(fs::exists(folder / "report.csv"));
    CHECK(fs::exists(folder / "fitness.svg"));
    for (const char* seed : {"seed_5", "seed_7", "seed_8"}) {
        CAPTURE(seed);
        CHECK(fs::exists(folder / seed / "stats.csv"));
    }

    std::string summary = slurp(folder / "summary.csv");
    CHECK(summary.find("\n5,ok,") != std::string::npos);
    CHECK(summary.find("\n7,ok,") != std::string::npos);
    CHECK(summary.find("\n8,ok,") != std::string::npos);

    auto noseeds = run_cmd("experiment --problem string_match");
    CHECK(noseeds.exit_code == 2);

    auto badseeds = run_cmd("experiment --problem string_match --seeds 8-5 --results_dir " +
                            dir.path.string());
    CHECK(badseeds.exit_code == 2);
}

TEST_CASE("grammar inspection") {
    auto r = run_cmd(std::string("parse-grammar ") + GEVO_ROOT + "/grammars/letters.bnf");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("start symbol: <string>") != std::string::npos);
    CHECK(r.output.find("min depth") != std::string::npos);

    auto missing = run_cmd("parse-grammar /nonexistent.bnf");
    CHECK(missing.exit_code == 1);

    auto quartic = run_cmd(std::string("parse-grammar ") + GEVO_ROOT +
                           "/grammars/quartic.bnf --dataset-n-vars 2");
    REQUIRE(quartic.exit_code == 0);
    CHECK(quartic.output.find("<idx>  choices: 2") != std::string::npos);

    auto unbound = run_cmd(std::string("parse-grammar ") + GEVO_ROOT + "/grammars/quartic.bnf");
    CHECK(unbound.exit_code == 1);
}

TEST_CASE("help is help") {
    auto r = run_cmd("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("run") != std::string::npos);
    CHECK(r.output.find("experiment") != std::string::npos);

    auto sub = run_cmd("run --help");
    CHECK(sub.exit_code == 0);
    CHECK(sub.output.find("--population_size") != std::string::npos);
}
