#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "ricciflow");
    std::ostringstream out, err;
    const int code = ricci::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    REQUIRE(line == "t,x1,x2,x3,phi,psi,r1,r2,r3,S,V,neg_count");
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        REQUIRE(row.size() == 12);
        rows.push_back(row);
    }
    return rows;
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("ricciflow_test_" + name); }

}  // namespace

TEST_CASE("flow at the Einstein point") {
    const Result r = run({"flow", "--n", "2", "--system", "phase", "--phi", "2", "--psi", "0", "--t-max", "1"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows.back()[0] == 1.0);
    for (const auto& row : rows) {
        for (int c = 6; c <= 8; ++c) CHECK(std::abs(row[c] - 0.4375) < 1e-9);
        CHECK(row[5] == 0.0);
    }
}

TEST_CASE("flow in reparametrized time") {
    const Result r = run({"flow", "--n", "2", "--system", "reparam", "--phi", "10", "--psi", "-0.001"});
    CHECK(r.code == 0);
    for (const auto& row : parse_csv(r.out)) {
        CHECK(std::abs(row[4] - (row[0] + 10.0)) < 1e-9);
        CHECK(row[5] < 0.0);
    }
}

TEST_CASE("flow from a submersion metric keeps psi at zero") {
    for (const char* tmax : {"0.5", "5", "20"}) {
        const Result r = run({"flow", "--n", "3", "--system", "phase", "--phi", "1.6", "--psi", "0.0", "--t-max", tmax});
        CHECK(r.code == 0);
        for (const auto& row : parse_csv(r.out)) CHECK(std::abs(row[5]) < 1e-10);
    }
}

TEST_CASE("full-system CSV has constant volume") {
    const Result r = run({"flow", "--n", "3", "--system", "full", "--x1", "0.8", "--x2", "0.8", "--t-max", "50"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    for (const auto& row : rows) CHECK(std::abs(row[10] / rows.front()[10] - 1.0) < 1e-8);
}

TEST_CASE("flow writes to a file") {
    const fs::path path = temp_file("flow.csv");
    const Result r = run({"flow", "--n", "2", "--system", "submersion", "--phi", "1.6", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(parse_csv(buf.str()).size() > 1);
    fs::remove(path);
}

TEST_CASE("flow usage and integrator errors") {
    CHECK(run({"flow", "--n", "2", "--phi", "4"}).code == 1);
    CHECK(run({"flow", "--n", "2", "--system", "banana", "--phi", "4"}).code == 1);
    CHECK(run({"flow", "--n", "2", "--system", "phase", "--phi", "1", "--psi", "2"}).code == 1);
    CHECK(run({"flow", "--n", "1", "--system", "phase", "--phi", "4"}).code == 1);
    CHECK(run({"flow", "--n", "2", "--system", "full", "--x1", "1"}).code == 1);
    CHECK(run({"flow", "--n", "2", "--system", "phase", "--phi", "4", "--rel-tol", "-1"}).code == 1);
    CHECK(run({"flow", "--n", "2", "--system", "phase", "--phi", "x"}).code == 1);
    CHECK(run({}).code == 1);
    // time change undefined at the Einstein point
    const Result r = run({"flow", "--n", "2", "--system", "reparam", "--phi", "2", "--psi", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("integrator error") != std::string::npos);
    // a run that cannot reach t-max
    CHECK(run({"flow", "--n", "2", "--system", "phase", "--phi", "4", "--t-max", "100", "--max-steps", "3"}).code ==
          2);
}

TEST_CASE("experiment report and exit code mapping") {
    const Result r = run({"experiment", "--n", "2"});
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"n", "N", "epsilon", "t_r1_negative", "t_r2_negative", "final_negative_count",
                            "expected_negative_count", "slope_estimate", "slope_target", "decay_bound_holds",
                            "divergence", "monotonicity", "termination"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["n"] == 2);
    CHECK(j["expected_negative_count"] == 8);
    const bool match = j["final_negative_count"] == j["expected_negative_count"];
    CHECK(r.code == (match ? 0 : 4));
    CHECK(j["final_negative_count"] == 4);
}

TEST_CASE("experiment with bad initial data") {
    const Result r = run({"experiment", "--n", "2", "--N", "2"});
    CHECK(r.code == 3);
    CHECK(r.out.empty());
    CHECK(run({"experiment", "--n", "2", "--epsilon", "-1"}).code == 1);
    CHECK(run({"experiment"}).code == 1);
}

TEST_CASE("experiment writes report and trajectory files") {
    const fs::path report = temp_file("report.json");
    const fs::path traj = temp_file("traj.csv");
    run({"experiment", "--n", "3", "--t-max", "100", "--out", report.string(), "--trajectory", traj.string()});
    std::ifstream rin(report);
    const auto j = nlohmann::json::parse(rin);
    CHECK(j["n"] == 3);
    CHECK(j["final_t"].get<double>() == 100.0);
    std::ifstream tin(traj);
    std::stringstream buf;
    buf << tin.rdbuf();
    CHECK(parse_csv(buf.str()).back()[0] == 100.0);
    fs::remove(report);
    fs::remove(traj);
}

TEST_CASE("portrait subcommand") {
    const Result a = run({"portrait", "--n", "2", "--phi-range", "1:8", "--psi-range", "-2:2"});
    CHECK(a.code == 0);
    CHECK(a.out.find("<svg") != std::string::npos);
    CHECK(a.out.find("class=\"fixed-point\" data-phi=\"2.000\" data-psi=\"0.000\"") != std::string::npos);
    const Result b = run({"portrait", "--n", "2", "--phi-range", "1:8", "--psi-range", "-2:2"});
    CHECK(a.out == b.out);

    const Result c = run({"portrait", "--start", "4:-0.5", "--start", "3:1"});
    CHECK(c.code == 0);
    CHECK(c.out.find("data-phi0=\"4.000\" data-psi0=\"-0.500\"") != std::string::npos);

    CHECK(run({"portrait", "--phi-range", "8:1"}).code == 1);
    CHECK(run({"portrait", "--phi-range", "-3:-1"}).code == 1);
    CHECK(run({"portrait", "--phi-range", "1:2", "--psi-range", "3:4"}).code == 1);
    CHECK(run({"portrait", "--phi-range", "1-8"}).code == 1);
}

TEST_CASE("check subcommand") {
    const Result ok = run({"check", "--n-max", "3", "--grid", "8"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("spectrum-agreement") != std::string::npos);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(run({"check", "--n-max", "1"}).code == 1);
}

TEST_CASE("config file with command-line precedence") {
    const fs::path cfg = temp_file("config.json");
    {
        std::ofstream out(cfg);
        out << R"({"n": 2, "system": "reparam", "phi": 10, "psi": -0.001, "t_max": 2})";
    }
    const Result from_file = run({"flow", "--config", cfg.string()});
    CHECK(from_file.code == 0);
    CHECK(parse_csv(from_file.out).back()[0] == 2.0);

    const Result override = run({"flow", "--config", cfg.string(), "--t-max", "1", "--phi", "20"});
    CHECK(override.code == 0);
    const auto rows = parse_csv(override.out);
    CHECK(rows.back()[0] == 1.0);
    CHECK(rows.front()[4] == 20.0);

    {
        std::ofstream out(cfg);
        out << R"({"start": ["4:-0.5", "3:1"]})";
    }
    const Result starts = run({"portrait", "--config", cfg.string()});
    CHECK(starts.code == 0);
    CHECK(starts.out.find("data-phi0=\"3.000\"") != std::string::npos);

    {
        std::ofstream out(cfg);
        out << R"({"no_such_option": 1})";
    }
    CHECK(run({"check", "--config", cfg.string()}).code == 1);
    CHECK(run({"check", "--config", (cfg.string() + ".missing")}).code == 1);
    fs::remove(cfg);
}
