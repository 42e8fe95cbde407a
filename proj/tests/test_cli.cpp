#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
};

/// Runs the installed binary through the shell, stderr discarded.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + std::string(SOSTREE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    REQUIRE(status != -1);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    return fields;
}

/// Fields equal either byte-for-byte or, when both parse fully as doubles,
/// to within 1e-12 relative.
bool field_equal(const std::string& a, const std::string& b) {
    if (a == b) return true;
    try {
        size_t pa = 0, pb = 0;
        const double da = std::stod(a, &pa);
        const double db = std::stod(b, &pb);
        if (pa != a.size() || pb != b.size()) return false;
        return std::abs(da - db) <= 1e-12 * std::max({1.0, std::abs(da), std::abs(db)});
    } catch (...) {
        return false;
    }
}

std::map<std::string, double> parse_name_values(const std::string& text) {
    std::map<std::string, double> values;
    for (const std::string& line : split_lines(text)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        values[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
    return values;
}

}  // namespace

TEST_CASE("solve prints the solution table") {
    const CliResult r = run_cli("solve --model inf-sos --k 3 --theta 0.1");
    CHECK(r.code == 0);
    CHECK(r.out.find("# schema=solve-v1") != std::string::npos);
    CHECK(r.out.find("# count=7") != std::string::npos);
    int rows = 0;
    for (const std::string& line : split_lines(r.out))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 7);
}

TEST_CASE("solve emits parseable json") {
    const CliResult r = run_cli("solve --model inf-sos --k 3 --theta 0.1 --format json");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["schema"] == "solve-v1");
    CHECK(j["k"] == 3);
    CHECK(j["count"] == 7);
    REQUIRE(j["solutions"].size() == 7);
    for (const auto& s : j["solutions"]) {
        CHECK(s.contains("x"));
        CHECK(s.contains("y"));
        CHECK(s.contains("branch"));
        CHECK(s["residual"].get<double>() <= 1e-9);
    }
}

TEST_CASE("usage problems exit with code 2") {
    CHECK(run_cli("solve --theta 0.2 --bogus-flag").code == 2);
    CHECK(run_cli("solve --model inf-sos --k 3").code == 2);
    CHECK(run_cli("solve --model p-sos --k 3 --theta 0.2 --p 2").code == 2);
    CHECK(run_cli("solve --model p-sos --k 2 --theta 0.2 --p 0.5").code == 2);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("enumeration guard exits with code 3") {
    const CliResult r = run_cli("verify --model p-sos --k 2 --theta 0.3 --p 2 --n 5");
    CHECK(r.code == 3);
}

TEST_CASE("unwritable output path exits with code 4") {
    const CliResult r =
        run_cli("solve --model inf-sos --k 2 --theta 0.2 --out /nonexistent-dir-xyz/out.txt");
    CHECK(r.code == 4);
}

TEST_CASE("sweep csv matches the golden file and is thread-count invariant") {
    const std::string args =
        "sweep --model inf-sos --k 2 --theta-min 0.1 --theta-max 0.6 --step 0.1 --format csv";
    const CliResult r = run_cli(args);
    REQUIRE(r.code == 0);

    std::ifstream golden(std::string(SOSTREE_GOLDEN_DIR) + "/sweep_k2.csv", std::ios::binary);
    REQUIRE_MESSAGE(golden.good(), "golden file missing");
    std::stringstream buf;
    buf << golden.rdbuf();

    const std::vector<std::string> got = split_lines(r.out);
    const std::vector<std::string> want = split_lines(buf.str());
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
        if (!want[i].empty() && (want[i][0] == '#' || want[i][0] == 't')) {
            CHECK_MESSAGE(got[i] == want[i], "line ", i);
            continue;
        }
        const auto gf = split_fields(got[i], ',');
        const auto wf = split_fields(want[i], ',');
        REQUIRE(gf.size() == wf.size());
        for (size_t f = 0; f < gf.size(); ++f)
            CHECK_MESSAGE(field_equal(gf[f], wf[f]), "line ", i, " field ", f, ": ", gf[f], " vs ", wf[f]);
    }

    const CliResult threaded = run_cli(args, "SOS_TREE_THREADS=3 ");
    CHECK(threaded.code == 0);
    CHECK(threaded.out == r.out);
}

TEST_CASE("verify passes on fixed points and fails when perturbed") {
    const CliResult ok = run_cli("verify --model inf-sos --k 2 --theta 0.2 --n 2");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("verdict: PASS") != std::string::npos);

    const CliResult bad = run_cli("verify --model inf-sos --k 2 --theta 0.2 --n 2 --perturb 0.01");
    CHECK(bad.code == 1);
    CHECK(bad.out.find("verdict: FAIL") != std::string::npos);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const std::string args = "simulate --model inf-sos --k 2 --theta 0.3 --n 2 --count 200 --seed 9";
    const CliResult first = run_cli(args);
    const CliResult second = run_cli(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("# chi2=") != std::string::npos);
    int configs = 0;
    for (const std::string& line : split_lines(first.out)) {
        if (line.empty() || line[0] == '#') continue;
        ++configs;
        CHECK(line.size() == 10);
        for (char ch : line) CHECK((ch == '0' || ch == '1' || ch == '2'));
    }
    CHECK(configs == 200);
}

TEST_CASE("critical prints the expected name=value table") {
    const CliResult r = run_cli("critical");
    REQUIRE(r.code == 0);
    const auto values = parse_name_values(r.out);
    const std::map<std::string, double> expected = {
        {"theta_c", 0.2062428302210469},
        {"y0", 0.63555358705358471},
        {"theta_tilde", 0.42983920781689773},
        {"hat_theta_c", 0.48123282404100284},
        {"hat_eta", 4.8291431719827787},
        {"eta_c", (7.0 + 3.0 * std::sqrt(57.0)) / 8.0},
        {"theta0", 0.13506815821142253},
        {"theta0_prime", (std::sqrt(5.0) - 1.0) / 4.0},
        {"theta_c_dprime", 0.60500033370605561},
        {"ks_bound_k3", 0.43528001445219834},
    };
    for (const auto& [name, want] : expected) {
        REQUIRE_MESSAGE(values.count(name) == 1, name);
        CHECK_MESSAGE(std::abs(values.at(name) - want) <= 1e-6, name);
    }
}

TEST_CASE("extremality json labels every solution") {
    const CliResult r = run_cli("extremality --k 3 --theta 0.1 --format json");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["rows"].size() == 7);
    bool saw_non_extremal = false, saw_inconclusive = false;
    for (const auto& row : j["rows"]) {
        const std::string status = row["status"].get<std::string>();
        CHECK((status == "non-extremal" || status == "inconclusive" || status == "boundary"));
        saw_non_extremal = saw_non_extremal || status == "non-extremal";
        saw_inconclusive = saw_inconclusive || status == "inconclusive";
    }
    CHECK(saw_non_extremal);
    CHECK(saw_inconclusive);
}
