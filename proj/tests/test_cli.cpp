#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "fflab/cli.hpp"
#include "fflab/json_io.hpp"

using namespace fflab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fflab_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("construct, verify, and round trip") {
    TempDir tmp;
    const std::string inst_path = tmp.file("inst.json");
    CHECK(run_cli({"construct", "prime", "--p", "13", "--n", "2", "--beta", "1/2", "--K", "1",
                   "--out", inst_path}) == 0);
    json j = json::parse(slurp(inst_path));
    FurstenbergInstance inst = instance_from_json(j);
    CHECK(inst.points.size() == 51);
    CHECK(inst == build_prime_furstenberg(13, 2, Rational(1, 2), 1.0));

    CHECK(run_cli({"verify", "--in", inst_path, "--threshold", "4",
                   "--out", tmp.file("verify.json")}) == 0);
    CHECK(run_cli({"verify", "--in", inst_path, "--threshold", "6",
                   "--out", tmp.file("verify6.json")}) == 1);
    json v = json::parse(slurp(tmp.file("verify6.json")));
    CHECK(!v.at("check").at("covered").get<bool>());
}

TEST_CASE("construct psquare") {
    TempDir tmp;
    const std::string path = tmp.file("sq.json");
    CHECK(run_cli({"construct", "psquare", "--p", "3", "--n", "2", "--out", path}) == 0);
    FurstenbergInstance inst = instance_from_json(json::parse(slurp(path)));
    CHECK(inst.points.size() == 19);
    CHECK(run_cli({"verify", "--in", path, "--threshold", "3",
                   "--out", tmp.file("v.json")}) == 0);
}

TEST_CASE("delta subcommand") {
    TempDir tmp;
    CHECK(run_cli({"delta", "--q", "9", "--out", tmp.file("d9.json")}) == 0);
    json j = json::parse(slurp(tmp.file("d9.json")));
    CHECK(j.at("report").at("coverage").get<bool>());
    CHECK(j.at("report").at("delta_size").get<int>() == 3);
    CHECK(run_cli({"delta", "--q", "32", "--K", "2", "--out", tmp.file("d32.json")}) == 0);
    CHECK(run_cli({"delta", "--q", "12", "--out", tmp.file("bad.json")}) == 2);  // not a prime power
}

TEST_CASE("refine subcommand and usage errors") {
    TempDir tmp;
    const std::string grid_path = tmp.file("grid.json");
    {
        GridSet g = GridSet::make(3, {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                      {1, 0, 0}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}});
        std::ofstream out(grid_path);
        out << grid_to_json(g).dump(1) << "\n";
    }
    CHECK(run_cli({"refine", "--in", grid_path, "--m", "9", "--out", tmp.file("c.json")}) == 2);
    CHECK(run_cli({"refine", "--in", grid_path, "--m", "2", "--out", tmp.file("cert.json")}) == 0);
    json j = json::parse(slurp(tmp.file("cert.json")));
    RefineCertificate cert = certificate_from_json(j.at("certificate"));
    CHECK(cert.all_ok());
    GridSet refined = grid_from_json(j.at("refined"));
    CHECK(refined.size() == 8);  // full cube is a fixed point
    CHECK(run_cli({"refine", "--in", tmp.file("missing.json"), "--m", "2"}) == 2);
}

TEST_CASE("lab subcommand") {
    TempDir tmp;
    CHECK(run_cli({"lab", "--p", "7", "--n", "3", "--out", tmp.file("lab.json"),
                   "--csv", tmp.file("hist.csv")}) == 0);
    json j = json::parse(slurp(tmp.file("lab.json")));
    CHECK(j.at("all_pass").get<bool>());
    CHECK(j.at("pair_certificates").size() == 3);
    std::string csv = slurp(tmp.file("hist.csv"));
    CHECK(csv.rfind("richness,line_count\n", 0) == 0);
    CHECK(run_cli({"lab", "--p", "7", "--n", "2", "--out", tmp.file("bad.json")}) == 2);
}

TEST_CASE("deterministic artifacts") {
    TempDir tmp;
    for (int i = 0; i < 2; ++i)
        CHECK(run_cli({"construct", "prime", "--p", "11", "--n", "2", "--beta", "1/2",
                       "--K", "1", "--out", tmp.file("a" + std::to_string(i) + ".json")}) == 0);
    CHECK(slurp(tmp.file("a0.json")) == slurp(tmp.file("a1.json")));
    for (int i = 0; i < 2; ++i)
        CHECK(run_cli({"lab", "--p", "7", "--n", "3",
                       "--out", tmp.file("l" + std::to_string(i) + ".json")}) == 0);
    CHECK(slurp(tmp.file("l0.json")) == slurp(tmp.file("l1.json")));
}

TEST_CASE("flag validation") {
    TempDir tmp;
    CHECK(run_cli({"construct", "prime", "--p", "13", "--n", "2", "--beta", "0.5",
                   "--out", tmp.file("x.json")}) == 2);  // beta must be an exact rational
    CHECK(run_cli({"construct", "prime", "--p", "12", "--n", "2",
                   "--out", tmp.file("x.json")}) == 2);  // not a prime
    CHECK(run_cli({"bogus"}) == 2);
    CHECK(run_cli({"construct", "prime", "--p", "13", "--n", "2", "--bogus-flag", "1"}) == 2);
    CHECK(run_cli({"verify", "--in", tmp.file("x.json")}) == 2);  // missing --threshold
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"--help"}) == 0);
}
