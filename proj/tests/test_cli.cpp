#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fbfade/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "fbfade");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fbfade::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> rows(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::vector<std::vector<double>> out;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        out.push_back(row);
    }
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("fbfade_test_" + name);
}

}  // namespace

TEST_CASE("pdf of the Rayleigh SNR") {
    const auto r = run({"pdf", "--kappa", "0", "--mu", "1", "--eta", "1", "--gbar", "1", "--grid", "0.1:5:50"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.size() == 50);
    for (const auto& row : t) CHECK(std::abs(row[1] - std::exp(-row[0])) < 1e-10);
    CHECK(r.out.rfind("# meta: {", 0) == 0);
    CHECK(r.out.find("\ngamma,pdf\n") != std::string::npos);
}

TEST_CASE("sep over a 1..1000 dB-spaced grid is decreasing") {
    const auto r = run({"sep", "--scheme", "dbpsk", "--kappa", "10", "--mu", "2", "--m", "4", "--eta", "0.5", "--rho",
                        "0.4472", "--grid", "1:1000:30:dB"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.size() == 30);
    CHECK(t.front()[0] == 1.0);
    CHECK(t.back()[0] == 1000.0);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i][1] < t[i - 1][1]);
}

TEST_CASE("shared flags may follow the subcommand or precede it") {
    const auto a = run({"cdf", "--kappa", "2", "--grid", "0.5:2:4"});
    const auto b = run({"--kappa", "2", "cdf", "--grid", "0.5:2:4"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("JSON output carries meta and columns") {
    const auto r = run({"mgf", "--kappa", "1", "--grid", "-1:0:3", "--format", "json", "--eta", "inf"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["meta"]["command"] == "mgf");
    CHECK(j["meta"]["params"]["eta"] == "inf");
    CHECK(j["columns"]["s"].size() == 3);
    CHECK(j["columns"]["mgf"][2].get<double>() == 1.0);
}

TEST_CASE("config file overrides flags") {
    const auto cfg = tmp("cfg.json");
    std::ofstream(cfg) << R"({"schema": 1, "kappa": 0, "mu": 1, "grid": "1:1:1", "rho": "inf"})";
    const auto r = run({"cdf", "--kappa", "7", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.size() == 1);
    CHECK(std::abs(t[0][1] - (1.0 - std::exp(-1.0))) < 1e-9);
    CHECK(r.out.find("\"kappa\":0.0") != std::string::npos);

    std::ofstream(cfg) << R"({"schema": 2, "kappa": 0})";
    CHECK(run({"cdf", "--grid", "1:2:2", "--config", cfg.string()}).code == 2);
    std::ofstream(cfg) << R"({"schema": 1, "nonsense": 0})";
    CHECK(run({"cdf", "--grid", "1:2:2", "--config", cfg.string()}).code == 2);
    std::filesystem::remove(cfg);
}

TEST_CASE("same argv and seed give byte-identical files") {
    const auto a = tmp("a.csv"), b = tmp("b.csv");
    for (const auto& path : {a, b})
        REQUIRE(run({"sample", "--kappa", "3", "--mu", "2", "--eta", "0.4", "--n", "50000", "--seed", "11", "--out",
                     path.string()})
                    .code == 0);
    CHECK(slurp(a) == slurp(b));
    REQUIRE(run({"sample", "--kappa", "3", "--n", "50000", "--seed", "12", "--out", b.string()}).code == 0);
    CHECK(slurp(a) != slurp(b));

    const auto ta = tmp("a.fbtr"), tb = tmp("b.fbtr");
    for (const auto& path : {ta, tb})
        REQUIRE(run({"trace", "--kappa", "5", "--mu", "2", "--eta", "0.5", "--rho", "inf", "--duration", "5", "--seed",
                     "3", "--out", path.string()})
                    .code == 0);
    CHECK(slurp(ta) == slurp(tb));
    CHECK(slurp(ta).substr(0, 4) == "FBTR");
    for (const auto& p : {a, b, ta, tb}) std::filesystem::remove(p);
}

TEST_CASE("sample histogram and Monte Carlo SEP columns") {
    const auto h = run({"sample", "--n", "20000", "--hist", "20", "--format", "json"});
    REQUIRE(h.code == 0);
    const auto j = nlohmann::json::parse(h.out);
    CHECK(j["columns"]["density"].size() == 20);
    const auto r = run({"sample", "--n", "20000", "--hist", "10", "--grid", "0:5:2", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto k = nlohmann::json::parse(r.out);
    CHECK(k["columns"]["bin_lo"][0] == 0.0);
    CHECK(k["columns"]["bin_hi"][9] == 5.0);
    CHECK(k["columns"]["bin_hi"][0] == doctest::Approx(0.5));
    const auto s = run({"sep", "--grid", "1:10:3:dB", "--mc-draws", "20000", "--seed", "4"});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("gbar,sep,sep_mc,sep_mc_se") != std::string::npos);
    CHECK(s.out.find("\"rng\":{\"seed\":4,\"stream\":0}") != std::string::npos);
}

TEST_CASE("reduce prints FB parameters of a legacy model") {
    const auto r = run({"reduce", "nakagami-m", "--m", "3"});
    REQUIRE(r.code == 0);
    const auto t = rows(r.out);
    REQUIRE(t.size() == 1);
    CHECK(t[0][1] == 0.0);
    CHECK(t[0][2] == 3.0);
    CHECK(t[0][4] == 1.0);
    CHECK(run({"reduce", "weibull"}).code == 2);
    CHECK(run({"reduce", "nakagami-m"}).code == 2);
}

TEST_CASE("lcr and afd subcommands") {
    const auto r = run({"afd", "--kappa", "5", "--mu", "2", "--eta", "0.5", "--rho", "inf", "--grid", "0.1:1:3:dB"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("u,afd,lcr,cdf,underflow") != std::string::npos);
    CHECK(run({"lcr", "--kappa", "5", "--rho", "1", "--grid", "0.1:1:3"}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"pdf"}).code == 2);
    CHECK(run({"pdf", "--grid", "1:2"}).code == 2);
    CHECK(run({"pdf", "--grid", "0:2:5:dB"}).code == 2);
    CHECK(run({"pdf", "--grid", "1:2:3", "--mu", "-1"}).code == 2);
    CHECK(run({"pdf", "--grid", "1:2:3", "--kappa", "abc"}).code == 2);
    CHECK(run({"mgf", "--grid", "0.5:2:3"}).code == 2);
    CHECK(run({"validate", "--suite", "nope"}).code == 2);
    CHECK(run({"trace", "--duration", "1"}).code == 2);
    CHECK(run({"lcr", "--kappa", "5", "--mu", "2", "--eta", "0.5", "--rho", "inf", "--grid", "0.5:1:2",
               "--quad-points", "3"}).code == 2);
    const auto e = run({"sep", "--scheme", "mfsk", "--M", "64", "--kappa", "1", "--eta", "1", "--grid", "1000:100000:3"});
    CHECK(e.code == 3);
    CHECK(e.err.find('\n') == e.err.size() - 1);
}

TEST_CASE("validate runs the oracle suites") {
    const auto r = run({"validate", "--suite", "all", "--seed", "7"});
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& c : j["checks"]) INFO(c.dump());
    CHECK(r.code == 0);
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() >= 10);
    for (const auto& c : j["checks"]) {
        INFO(c.dump());
        CHECK(c["pass"] == true);
    }
}
