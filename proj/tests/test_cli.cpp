#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(TCPKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.stdout_text.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(TCPKIT_FIXTURE_DIR) + "/" + name;
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.stdout_text); }

}  // namespace

TEST_CASE("classify subcommand: definite verdicts exit 0") {
    const RunResult r = run("classify --tensor " + fixture("example32.json") + " --class ER");
    CHECK(r.exit_code == 0);
    const auto j = parse(r);
    CHECK(j["schema_version"] == 1);
    CHECK(j["result"]["status"] == "Member");
    CHECK(j["result"]["method"] == "exhaustive-n2");
    CHECK(j["seed"] == 1);
}

TEST_CASE("solve subcommand: nonnegative q returns the zero solution") {
    const RunResult r =
        run("solve --tensor " + fixture("example31.json") + " --q=1,1");
    CHECK(r.exit_code == 0);
    const auto j = parse(r);
    REQUIRE(j["result"]["solutions"].size() == 1);
    const auto& x = j["result"]["solutions"][0]["x"];
    CHECK(x[0] == 0.0);
    CHECK(x[1] == 0.0);
}

TEST_CASE("solve subcommand: no solution exits 4") {
    const RunResult r = run("solve --tensor " + fixture("zero.json") + " --q=-1,0.5");
    CHECK(r.exit_code == 4);
    const auto j = parse(r);
    CHECK(j["result"]["solutions"].empty());
    CHECK(j["result"]["diagnostics"]["r0_verdict"]["status"] == "NonMember");
}

TEST_CASE("malformed inputs exit 2") {
    CHECK(run("classify --tensor /nonexistent.json --class ER").exit_code == 2);
    CHECK(run("classify --tensor " + fixture("example31.json") + " --class bogus").exit_code == 2);

    char tmpname[] = "/tmp/tcpkit_bad_XXXXXX";
    const int fd = mkstemp(tmpname);
    REQUIRE(fd >= 0);
    {
        std::ofstream out(tmpname);
        out << "{ not json";
    }
    CHECK(run(std::string("classify --tensor ") + tmpname + " --class ER").exit_code == 2);
    std::remove(tmpname);
}

TEST_CASE("unknown verdict exits 3") {
    char tmpname[] = "/tmp/tcpkit_n3_XXXXXX";
    const int fd = mkstemp(tmpname);
    REQUIRE(fd >= 0);
    {
        std::ofstream out(tmpname);
        // positive diagonal, dim 3: member in truth, but no certificate path
        out << R"({"order":3,"dim":3,"entries":[)"
            << R"({"index":[1,1,1],"value":1},)"
            << R"({"index":[2,2,2],"value":1},)"
            << R"({"index":[3,3,3],"value":1}]})";
    }
    const RunResult r = run(std::string("classify --tensor ") + tmpname + " --class ER");
    CHECK(r.exit_code == 3);
    CHECK(parse(r)["result"]["status"] == "Unknown");
    std::remove(tmpname);
}

TEST_CASE("byte-identical output for identical config and seed") {
    const std::string args = "classify --tensor " + fixture("example31.json") +
                             " --class ER --seed 42";
    const RunResult a = run(args);
    const RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(!a.stdout_text.empty());

    const std::string solve_args =
        "solve --tensor " + fixture("example32.json") + " --q=-1,-1 --seed 7";
    CHECK(run(solve_args).stdout_text == run(solve_args).stdout_text);
}

TEST_CASE("audit subcommand emits the verdict table and clean violations") {
    const RunResult r = run("audit --tensor " + fixture("example31.json"));
    CHECK(r.exit_code == 0);
    const auto j = parse(r);
    CHECK(j["result"]["verdicts"]["R"]["status"] == "Member");
    CHECK(j["result"]["verdicts"]["ER"]["status"] == "NonMember");
    CHECK(j["result"]["violations"].empty());
    CHECK(j["result"]["heredity_violations"].empty());
}

TEST_CASE("audit on the all-ones fixture keeps the analytic chain consistent") {
    const RunResult r = run("audit --tensor " + fixture("all_ones.json"));
    CHECK(r.exit_code == 0);
    const auto j = parse(r);
    CHECK(j["result"]["verdicts"]["strictly-semi-positive"]["status"] == "Member");
    CHECK(j["result"]["verdicts"]["ER"]["status"] == "Member");
    CHECK(j["result"]["violations"].empty());
}

TEST_CASE("eig subcommand lists the diagonal pairs") {
    const RunResult r = run("eig --tensor " + fixture("diagonal.json"));
    CHECK(r.exit_code == 0);
    const auto j = parse(r);
    bool z2 = false, h3 = false;
    for (const auto& p : j["result"]) {
        if (p["kind"] == "Z" && std::abs(p["lambda"].get<double>() - 2.0) < 1e-9) z2 = true;
        if (p["kind"] == "H" && std::abs(p["lambda"].get<double>() - 3.0) < 1e-9) h3 = true;
    }
    CHECK(z2);
    CHECK(h3);
}

TEST_CASE("witness subcommand exits 0 with a definite absence") {
    const RunResult member = run("witness --tensor " + fixture("example32.json") + " --class ER");
    CHECK(member.exit_code == 0);
    CHECK(parse(member)["result"].is_null());

    const RunResult found = run("witness --tensor " + fixture("example32.json") + " --class R");
    CHECK(found.exit_code == 0);
    CHECK(parse(found)["result"]["t"] == 1.0);
}

TEST_CASE("seed falls back to the environment variable") {
    const std::string cmd = std::string("env TCPKIT_SEED=123 ") + TCPKIT_CLI_PATH +
                            " classify --tensor " + fixture("example31.json") +
                            " --class R 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string text;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), got);
    pclose(pipe);
    const auto j = nlohmann::json::parse(text);
    CHECK(j["seed"] == 123);
    // explicit --seed wins over the environment
    const RunResult r = run("classify --tensor " + fixture("example31.json") +
                            " --class R --seed 77");
    CHECK(parse(r)["seed"] == 77);
}

TEST_CASE("tolerance overrides are validated") {
    CHECK(run("classify --tensor " + fixture("example31.json") +
              " --class ER --tol witness_residual=1e-20").exit_code == 2);
    CHECK(run("classify --tensor " + fixture("example31.json") +
              " --class ER --tol nonsense=1e-8").exit_code == 2);
    CHECK(run("classify --tensor " + fixture("example31.json") +
              " --class ER --tol witness_residual=1e-9").exit_code == 0);
}
