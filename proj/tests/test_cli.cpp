#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "wmax/certificate.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
};

// Runs the installed binary, capturing stdout; stderr (progress, manifests on
// csv-to-stdout runs) is dropped.
CliRun run_cli(const std::string& args) {
    std::string cmd = std::string(WMAX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmp_file(const char* name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove(p);
    return p;
}

} // namespace

TEST_CASE("cli text output") {
    CliRun r = run_cli("w-exact 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("w(8) = 6") != std::string::npos);
    CHECK(r.out.find("witness: {2, 4, 8}") != std::string::npos);

    r = run_cli("psi 10 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("psi(10, 2) = 4") != std::string::npos);

    r = run_cli("psi 10 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("psi(10, 10) = 10") != std::string::npos);

    r = run_cli("bound 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("upper_bound = 1") != std::string::npos);

    r = run_cli("witness 8 --w 6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("w(8) >= 6") != std::string::npos);
}

TEST_CASE("cli json output round-trips") {
    CliRun r = run_cli("w-exact 8 --format json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("x") == 8);
    CHECK(j.at("w") == 6);
    CHECK(j.at("status") == "solved");
    CHECK(j.at("certificate").at("elements") == json({2, 4, 8}));
    CHECK(j.at("manifest").at("seed") == 0);
    CHECK(j.at("manifest").contains("version"));

    wmax::WitnessCertificate cert =
        wmax::certificate_from_json(j.at("certificate").dump());
    wmax::PrimeBasis basis = wmax::build_prime_basis(8);
    CHECK(wmax::verify_witness(cert, basis).ok);
}

TEST_CASE("cli psi cross-checks both methods") {
    // method=both recomputes by recursion and aborts on mismatch
    CliRun r = run_cli("psi 100 3 --method both --format json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("exact") == 20);
    CHECK(j.at("method") == "both");
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("w-exact 1").exit_code == 2);         // domain
    CHECK(run_cli("psi 10 1.5").exit_code == 2);        // z below 2
    CHECK(run_cli("w-exact 27 --method brute").exit_code == 3); // capacity
    CHECK(run_cli("w-exact 1000000 --budget 1000n").exit_code == 4);
    CHECK(run_cli("witness 3 --w 2").exit_code == 5);   // target unmet
    CHECK(run_cli("no-such-command").exit_code >= 100); // usage
    CHECK(run_cli("w-exact").exit_code >= 100);         // missing argument
}

TEST_CASE("cli budget exhaustion still reports the floor") {
    CliRun r = run_cli("w-exact 1000000 --budget 1000n --format json");
    CHECK(r.exit_code == 4);
    json j = json::parse(r.out);
    CHECK(j.at("status") == "budget_exhausted");
    CHECK(j.at("w") == 190); // power chain floor, k = 19
    REQUIRE(j.contains("unresolved"));
    CHECK(j.at("unresolved").at(0) == 191);
}

TEST_CASE("cli table matches the golden csv byte for byte") {
    std::string golden = slurp(fs::path(WMAX_GOLDEN_DIR) / "table_4_22.csv");
    CliRun a = run_cli("table 4 22 --exact --seed 7 --format csv");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == golden);
    CliRun b = run_cli("table 4 22 --exact --seed 7 --format csv");
    CHECK(b.out == a.out);
}

TEST_CASE("cli writes certificates to files") {
    fs::path p = tmp_file("wmax_cli_test_cert.json");
    CliRun r = run_cli("w-exact 8 --output " + p.string());
    CHECK(r.exit_code == 0);
    wmax::WitnessCertificate cert = wmax::certificate_from_json(slurp(p));
    CHECK(cert.x == 8);
    CHECK(cert.w == 6);
    wmax::PrimeBasis basis = wmax::build_prime_basis(8);
    CHECK(wmax::verify_witness(cert, basis).ok);
    fs::remove(p);
}

TEST_CASE("cli csv file output carries a manifest sidecar") {
    fs::path p = tmp_file("wmax_cli_test_table.csv");
    fs::path side = p;
    side += ".manifest.json";
    fs::remove(side);
    CliRun r = run_cli("table 4 22 --exact --seed 7 --format csv --output " + p.string());
    CHECK(r.exit_code == 0);
    std::string golden = slurp(fs::path(WMAX_GOLDEN_DIR) / "table_4_22.csv");
    CHECK(slurp(p) == golden);
    REQUIRE(fs::exists(side));
    json manifest = json::parse(slurp(side));
    CHECK(manifest.at("seed") == 7);
    CHECK(manifest.contains("timestamp"));
    fs::remove(p);
    fs::remove(side);
}
