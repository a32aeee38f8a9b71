#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
    int status;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(HAARINT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int rc = pclose(pipe);
    REQUIRE(WIFEXITED(rc));
    return {WEXITSTATUS(rc), out};
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "haarint_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallIs1 = R"({
  "integral": "zis1",
  "alpha": 1.0,
  "spectra": [[[0.3, 0.0], [0.8, 0.0]]],
  "routes": ["closed", "charsum"]
})";

}  // namespace

TEST_CASE("eval writes a passing report for a two-route determinant problem") {
    const fs::path spec = write_file("is1.json", kSmallIs1);
    const fs::path rep_path = work_dir() / "is1_report.json";
    auto r = run_cli("eval " + spec.string() + " -o " + rep_path.string());
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());

    const json rep = json::parse(slurp(rep_path));
    CHECK(rep["tool"] == "haarint");
    CHECK(rep["integral"] == "zis1");
    CHECK(rep["n"] == 2);
    CHECK(rep["pass"] == true);
    REQUIRE(rep["routes"].contains("closed"));
    REQUIRE(rep["routes"].contains("charsum"));
    CHECK(rep["routes"]["closed"]["ok"] == true);
    const double re = rep["routes"]["closed"]["value"][0].get<double>();
    const double im = rep["routes"]["closed"]["value"][1].get<double>();
    CHECK(std::abs(re - 1.67) < 1e-10);
    CHECK(std::abs(im) < 1e-12);
    REQUIRE(rep["checks"].is_array());
    REQUIRE_FALSE(rep["checks"].empty());
    CHECK(rep["checks"][0]["pass"] == true);
    CHECK(rep["checks"][0]["pair"].size() == 2);
}

TEST_CASE("eval prints the report to stdout when no output path is given") {
    const fs::path spec = write_file("is1b.json", kSmallIs1);
    auto r = run_cli("eval " + spec.string());
    REQUIRE(r.status == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["pass"] == true);
    CHECK(rep.contains("version"));
    CHECK(rep.contains("timestamp"));
}

TEST_CASE("eval exports the report tables as CSV") {
    const fs::path spec = write_file("is1c.json", kSmallIs1);
    const fs::path rep_path = work_dir() / "is1c_report.json";
    const fs::path csv_path = work_dir() / "is1c_report.csv";
    auto r = run_cli("eval " + spec.string() + " -o " + rep_path.string() + " --csv " +
                     csv_path.string());
    REQUIRE(r.status == 0);
    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind("type,name,value_re,value_im,std_error,discrepancy,tolerance,pass\n", 0) == 0);
    CHECK(csv.find("route,closed,") != std::string::npos);
    CHECK(csv.find("route,charsum,") != std::string::npos);
    CHECK(csv.find("check,closed|charsum,") != std::string::npos);
}

TEST_CASE("eval accepts a generator source") {
    const fs::path spec = write_file("gen_src.json", R"({
      "integral": "zfh1",
      "alpha": 2.0,
      "beta": 1.0,
      "N": 2,
      "generator": {"seed": 5, "rho": 0.8},
      "routes": ["closed", "charsum"]
    })");
    auto r = run_cli("eval " + spec.string());
    REQUIRE(r.status == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["pass"] == true);
    CHECK(rep["sources"]["mode"] == "generator");
}

TEST_CASE("malformed requests exit with code 2") {
    const fs::path bad_json = write_file("bad.json", "{ this is not json");
    CHECK(run_cli("eval " + bad_json.string()).status == 2);

    const fs::path unknown_key = write_file("unknown_key.json", R"({
      "integral": "zis1", "alpha": 1.0,
      "spectra": [[[0.3, 0.0]]], "bogus": 3
    })");
    CHECK(run_cli("eval " + unknown_key.string()).status == 2);

    const fs::path no_source = write_file("no_source.json", R"({
      "integral": "zis1", "alpha": 1.0
    })");
    CHECK(run_cli("eval " + no_source.string()).status == 2);

    const fs::path missing = work_dir() / "does_not_exist.json";
    CHECK(run_cli("eval " + missing.string()).status == 2);

    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("gen --n 0").status == 2);
    CHECK(run_cli("gen --n 3 --rho 1.5").status == 2);
}

TEST_CASE("a route that fails numerically exits with code 1 and records the error") {
    // The series route needs the spectrum inside the closed unit disc; 1.5 is
    // outside, so the route errors at run time while the request itself is valid.
    const fs::path spec = write_file("out_of_disc.json", R"({
      "integral": "zis1",
      "alpha": 0.5,
      "spectra": [[[1.5, 0.0], [0.2, 0.0]]],
      "routes": ["charsum"]
    })");
    const fs::path rep_path = work_dir() / "out_of_disc_report.json";
    auto r = run_cli("eval " + spec.string() + " -o " + rep_path.string());
    REQUIRE(r.status == 1);
    const json rep = json::parse(slurp(rep_path));
    CHECK(rep["pass"] == false);
    CHECK(rep["routes"]["charsum"]["ok"] == false);
    CHECK(rep["routes"]["charsum"].contains("error"));
}

TEST_CASE("gen is deterministic in the seed and shape-checked") {
    const fs::path g1 = work_dir() / "g1.json";
    const fs::path g2 = work_dir() / "g2.json";
    const fs::path g3 = work_dir() / "g3.json";
    REQUIRE(run_cli("gen --n 3 --rho 0.75 --seed 42 -o " + g1.string()).status == 0);
    REQUIRE(run_cli("gen --n 3 --rho 0.75 --seed 42 -o " + g2.string()).status == 0);
    REQUIRE(run_cli("gen --n 3 --rho 0.75 --seed 43 -o " + g3.string()).status == 0);
    CHECK(slurp(g1) == slurp(g2));
    CHECK(slurp(g1) != slurp(g3));

    const json j = json::parse(slurp(g1));
    CHECK(j["n"] == 3);
    CHECK(j["seed"] == 42);
    REQUIRE(j["matrix"].size() == 3);
    REQUIRE(j["matrix"][0].size() == 3);
    CHECK(j["matrix"][0][0].size() == 2);
}

TEST_CASE("mc runs only the sampling route and repeats bit-identically per seed") {
    const fs::path spec = write_file("mc1.json", R"({
      "integral": "zis1",
      "alpha": 1.0,
      "spectra": [[[0.4, 0.0]]]
    })");
    auto r1 = run_cli("mc " + spec.string() + " --samples 4000 --seed 7");
    auto r2 = run_cli("mc " + spec.string() + " --samples 4000 --seed 7");
    auto r3 = run_cli("mc " + spec.string() + " --samples 4000 --seed 8");
    REQUIRE(r1.status == 0);
    const json a = json::parse(r1.out);
    const json b = json::parse(r2.out);
    const json c = json::parse(r3.out);
    REQUIRE(a["routes"].size() == 1);
    REQUIRE(a["routes"].contains("mc"));
    CHECK(a["routes"]["mc"]["ok"] == true);
    CHECK(a["routes"]["mc"]["samples"] == 4000);
    CHECK(a["mc_seed"] == 7);
    CHECK(a["routes"]["mc"]["std_error"].get<double>() > 0.0);
    CHECK(a["routes"]["mc"]["value"] == b["routes"]["mc"]["value"]);
    CHECK(a["routes"]["mc"]["value"] != c["routes"]["mc"]["value"]);

    // the sampled mean must sit near the exact value 1F1(-1; 1; -0.4) = 1.4
    const double mean = a["routes"]["mc"]["value"][0].get<double>();
    const double se = a["routes"]["mc"]["std_error"].get<double>();
    CHECK(std::abs(mean - 1.4) < 5.0 * se);
}

TEST_CASE("verify quick reports twelve passing criteria") {
    const fs::path rep_path = work_dir() / "verify_quick.json";
    const fs::path csv_path = work_dir() / "verify_quick.csv";
    auto r = run_cli("verify --level quick -o " + rep_path.string() + " --csv " +
                     csv_path.string());
    REQUIRE(r.status == 0);
    const json rep = json::parse(slurp(rep_path));
    CHECK(rep["level"] == "quick");
    CHECK(rep["pass"] == true);
    REQUIRE(rep["criteria"].size() == 12);
    for (const json& c : rep["criteria"]) {
        CHECK(c["pass"] == true);
        CHECK(c["items"].get<long>() > 0);
    }
    CHECK(rep.contains("normalization_mc_consistent"));
    CHECK(rep.contains("kernel_arg_selected"));

    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind("id,title,pass,items,failed,worst_rel,worst_sigma,seconds\n", 0) == 0);
    size_t rows = 0;
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 13);
}
